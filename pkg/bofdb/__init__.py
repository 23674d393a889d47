try:
    # Python 3.8+
    from importlib import metadata
except ImportError:
    try:
        import importlib_metadata as metadata
    except ImportError:
        __version__ = "unknown"

try:
    __version__ = metadata.version("bofdb")
except Exception:
    __version__ = "unknown"


from .errors import (
    BofdbError,
    MalformedImage,
    ImageTooSmall,
    MalformedDescriptorFile,
    DimensionMismatch,
    InvalidK,
    TooFewDistinctPoints,
    SingleClassData,
    CorruptStore,
    MalformedRecord,
    UnknownFileId,
    UnknownRecord,
    ForeignKeyViolation,
    QuerySyntaxError,
    UnknownTable,
    UnknownFunction,
    UnknownColumn,
    TypeMismatch,
    ModelNotLoaded,
)

from .helpers import SplitMix64, Stopwatch, digest_to_hex, hex_to_digest

from .features.image import Image, decode_image, encode_image
from .features.keypoint import Keypoint
from .features.descriptor_set import (
    DescriptorSet,
    export_descriptors,
    import_descriptors,
)
from .features.extractor import DescriptorExtractor, extract_descriptors

from .vocab.dictionary import Dictionary, assign_word, assign_words, sse
from .vocab.kmeans import KMeans, kmeans_train

from .encode.histogram import (
    BofHistogram,
    encode_histogram,
    normalize_l1,
    hash_descriptor,
    histogram_distance,
)
from .encode.md5 import md5

from .svm.svm_config import SvmConfig
from .svm.binary_svm import BinarySvm, train_binary, decision_value
from .svm.svm_model import SvmModel, train_one_vs_rest, predict_class

from .store.codecs import (
    encode_dictionary_udt,
    decode_dictionary_udt,
    encode_descriptor_udt,
    decode_descriptor_udt,
    encode_svm_model_udt,
    decode_svm_model_udt,
)
from .store.rows import StatsRecord
from .store.hash_index import HashIndex
from .store.store import Store

from .query.parser import parse
from .query.printer import print_query
from .query.executor import ResultSet, execute

from .settings import Settings

from .pipeline.learn_spec import LearnSpec, TrainingImage
from .pipeline.learn import learn, load_trained
from .pipeline.classify import classify_bytes
from .pipeline.ingest import IngestReport, ingest_and_classify
from .pipeline.dataset import synthetic_images, generate_dataset
from .pipeline.benchmark import BenchmarkReport, benchmark_table1
from .pipeline.service import QueryService, serve
