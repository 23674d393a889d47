import argparse
import logging
import sys
from pathlib import Path

from bofdb.errors import BofdbError, ModelNotLoaded
from bofdb.features.extractor import DescriptorExtractor
from bofdb.pipeline.benchmark import benchmark_table1
from bofdb.pipeline.classify import classify_bytes, extractor_for
from bofdb.pipeline.dataset import generate_dataset, synthetic_images
from bofdb.pipeline.ingest import ingest_and_classify
from bofdb.pipeline.learn import learn, load_trained
from bofdb.pipeline.learn_spec import LearnSpec, manifest_images
from bofdb.pipeline.service import QueryServer, QueryService
from bofdb.query.executor import execute
from bofdb.query.parser import parse
from bofdb.settings import Settings
from bofdb.store.store import Store
from bofdb.svm.svm_config import SvmConfig


def _sizes(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("sizes must be comma-separated integers")


def _add_extractor_options(parser, learned=True):
    # left as None unless given, so the learned (or Settings) values apply
    suffix = " (default: as learned)" if learned else " (default: 8 and 16)"
    parser.add_argument("--grid-step", type=int, default=None, help="keypoint spacing in pixels" + suffix)
    parser.add_argument("--patch-size", type=int, default=None, help="patch side, a multiple of 4" + suffix)


def _add_training_options(parser):
    _add_extractor_options(parser, learned=False)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--c", type=float, default=10.0, help="SVM regularisation constant")
    parser.add_argument("--kernel", default="linear", help="linear or rbf:<gamma>")
    parser.add_argument("--restarts", type=int, default=3, help="k-means restarts")
    parser.add_argument("--max-iter", type=int, default=100, help="Lloyd iterations cap")
    parser.add_argument("--subsample", type=int, default=None, help="k-means sample size")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bofdb", description="Bag-of-features image classification store"
    )
    parser.add_argument("--log-level", default="WARNING", help="DEBUG, INFO, WARNING...")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("init", help="create an empty store")
    p.add_argument("store")

    p = commands.add_parser("learn", help="learn a dictionary and classifiers")
    p.add_argument("store")
    p.add_argument("--manifest", required=True, help="CSV file of path,class lines")
    p.add_argument("--words", type=int, default=100, help="dictionary size")
    _add_training_options(p)

    p = commands.add_parser("classify", help="print the class of an image file")
    p.add_argument("store")
    p.add_argument("image")
    _add_extractor_options(p)

    p = commands.add_parser("ingest", help="store and classify an image file")
    p.add_argument("store")
    p.add_argument("image")
    _add_extractor_options(p)

    p = commands.add_parser("query", help="run one statement")
    p.add_argument("store")
    p.add_argument("sql")
    _add_extractor_options(p)

    p = commands.add_parser("serve", help="run the line-protocol service")
    p.add_argument("store")
    p.add_argument("--port", type=int, default=7878)
    p.add_argument("--host", default="127.0.0.1")
    _add_extractor_options(p)

    p = commands.add_parser("bench", help="accuracy for several dictionary sizes")
    p.add_argument("store")
    p.add_argument("--sizes", type=_sizes, default=[40, 50, 80, 100, 130, 150])
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--manifest", default=None, help="dataset; synthetic if omitted")
    p.add_argument("--classes", type=int, default=3, help="synthetic classes")
    p.add_argument("--per-class", type=int, default=60, help="synthetic images per class")
    p.add_argument("--test-fraction", type=float, default=0.15)
    p.add_argument("--output", default=None, help="CSV report (.csv)")
    _add_training_options(p)

    p = commands.add_parser("gen-dataset", help="write a synthetic dataset")
    p.add_argument("directory")
    p.add_argument("--classes", type=int, default=3)
    p.add_argument("--per-class", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=64, help="image side in pixels")
    return parser


def settings_from_args(args):
    """Maps the command line options onto a bofdb.Settings"""
    settings = Settings(log_level=getattr(logging, args.log_level.upper(), logging.WARNING))
    for option in ("seed", "restarts", "max_iter", "subsample"):
        if hasattr(args, option):
            setattr(settings, option, getattr(args, option))
    for option in ("grid_step", "patch_size"):
        if getattr(args, option, None) is not None:
            setattr(settings, option, getattr(args, option))
    if hasattr(args, "words"):
        settings.words_count = args.words
    if hasattr(args, "kernel"):
        settings.svm = SvmConfig.from_string(args.kernel, c=args.c)
    if hasattr(args, "test_fraction"):
        settings.test_fraction = args.test_fraction
    return settings


def _load_optional(store):
    try:
        return load_trained(store)
    except ModelNotLoaded:
        return None, None


def _extractor_override(args, dictionary):
    """Extractor built from --grid-step/--patch-size, or None when neither
    is given so that the one learned with the dictionary is used"""
    if args.grid_step is None and args.patch_size is None:
        return None
    learned = extractor_for(dictionary)
    return DescriptorExtractor(
        learned.grid_step if args.grid_step is None else args.grid_step,
        learned.patch_size if args.patch_size is None else args.patch_size,
    )


def run(args, settings=None):
    settings = settings_from_args(args) if settings is None else settings

    if args.command == "gen-dataset":
        generate_dataset(args.directory, args.classes, args.per_class, args.seed, args.size)
        return 0

    with Store.open(args.store) as store:
        if args.command == "init":
            print("Initialised store in {}".format(store.path))

        elif args.command == "learn":
            spec = LearnSpec.from_settings(manifest_images(args.manifest), settings)
            dictionary, model = learn(store, spec)
            print(
                "Learned dictionary {} ({} words) and a model of {} classes".format(
                    dictionary.dictionary_id, dictionary.words_count, len(model.class_labels)
                )
            )

        elif args.command == "classify":
            dictionary, model = load_trained(store)
            data = Path(args.image).read_bytes()
            print(classify_bytes(data, dictionary, model, _extractor_override(args, dictionary)))

        elif args.command == "ingest":
            dictionary, model = load_trained(store)
            path = Path(args.image)
            report = ingest_and_classify(
                store,
                path.read_bytes(),
                dictionary,
                model,
                _extractor_override(args, dictionary),
                name=path.name,
            )
            print("image_id\t{}".format(report.image_id))
            print("class\t{}".format(report.predicted_class))
            print("duplicate_of\t{}".format(",".join(str(i) for i in report.duplicate_of)))
            for record in report.timings:
                print("{}_us\t{:.1f}".format(record.stage, record.elapsed_us))

        elif args.command == "query":
            dictionary, model = _load_optional(store)
            extractor = _extractor_override(args, dictionary)
            result = execute(store, parse(args.sql), model=model, dictionary=dictionary, extractor=extractor)
            print("\n".join(result.to_lines()))

        elif args.command == "serve":
            dictionary, model = _load_optional(store)
            service = QueryService(store, dictionary, model, _extractor_override(args, dictionary))
            server = QueryServer((args.host, args.port), service)
            print("Serving {} on {}:{} (Ctrl+C to quit)".format(store.path, args.host, server.port))
            try:
                server.serve_forever()
            except KeyboardInterrupt:
                print("\nExiting.")
            finally:
                server.server_close()

        elif args.command == "bench":
            if args.manifest is None:
                dataset = synthetic_images(args.classes, args.per_class, settings.seed)
            else:
                dataset = manifest_images(args.manifest)
            output = args.output or str(store.path / "benchmark.csv")
            report = benchmark_table1(
                store, dataset, args.sizes, args.runs, settings.seed, settings, filename=output
            )
            print(report.format_table())
            print("Report written to {}".format(output))
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    settings = settings_from_args(args)
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        return run(args, settings)
    except BofdbError as err:
        print("error: {}: {}".format(err.code, err), file=sys.stderr)
        return 1
    except (OSError, ValueError) as err:
        print("error: {}".format(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
