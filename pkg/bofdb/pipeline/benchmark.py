import logging
import os

import numpy as np

from bofdb.encode.histogram import normalize_l1
from bofdb.errors import SingleClassData
from bofdb.features.extractor import DescriptorExtractor
from bofdb.features.image import decode_image
from bofdb.helpers import SplitMix64
from bofdb.settings import Settings
from bofdb.svm.svm_model import predict_class, train_one_vs_rest
from bofdb.vocab.dictionary import assign_words
from bofdb.vocab.kmeans import kmeans_train, subsample

logger = logging.getLogger(__name__)


class BenchmarkReport:
    """Per-class and overall accuracies for each dictionary size

    The overall accuracy of a run is the mean of its per-class accuracies.
    Reported figures are means over the runs.

    Args:
        sizes (list): the dictionary sizes
        class_labels (list): the class labels
        runs (int): number of runs per size
        filename (str, optional): the CSV file (must end with .csv). If
            None, write does nothing. Defaults to None.

    Attributes:
        results (dict): (size, class label) -> list of per-run accuracies
        overall_results (dict): size -> list of per-run overall accuracies
    """

    def __init__(self, sizes, class_labels, runs, filename=None) -> None:
        self.sizes = list(sizes)
        self.class_labels = list(class_labels)
        self.runs = runs
        self.filename = filename
        self.results = {(k, label): [] for k in self.sizes for label in self.class_labels}
        self.overall_results = {k: [] for k in self.sizes}

    @property
    def filename(self):
        return self._filename

    @filename.setter
    def filename(self, value):
        if value is not None:
            if not isinstance(value, str):
                raise TypeError("filename must be a string")
            if not value.endswith(".csv"):
                raise ValueError("filename must end with .csv")
        self._filename = value

    def add_run(self, words_count, per_class):
        """Records the per-class accuracies of one run

        Args:
            words_count (int): the dictionary size
            per_class (dict): class label -> accuracy in [0, 1]
        """
        for label in self.class_labels:
            self.results[(words_count, label)].append(per_class[label])
        self.overall_results[words_count].append(
            float(np.mean([per_class[label] for label in self.class_labels]))
        )

    def accuracy(self, words_count, class_label):
        return float(np.mean(self.results[(words_count, class_label)]))

    def overall(self, words_count):
        return float(np.mean(self.overall_results[words_count]))

    def rows(self):
        """CSV rows: header, then (word_count, class, accuracy) per class
        and an "overall" row per size"""
        rows = [["word_count", "class", "accuracy"]]
        for k in self.sizes:
            for label in self.class_labels:
                rows.append([k, label, repr(self.accuracy(k, label))])
            rows.append([k, "overall", repr(self.overall(k))])
        return rows

    def write(self):
        if self.filename is not None:
            dirname = os.path.dirname(self.filename)
            if dirname and not os.path.exists(dirname):
                os.makedirs(dirname, exist_ok=True)
            np.savetxt(self.filename, np.array(self.rows(), dtype=str), fmt="%s", delimiter=",")
        return True

    def format_table(self):
        """Table with one column per size, one row per class and a final
        Result row, accuracies in percent"""
        width = max([len(label) for label in self.class_labels] + [len("Result:")]) + 2
        lines = ["Words:".ljust(width) + "".join("{:>8}".format(k) for k in self.sizes)]
        for label in self.class_labels:
            cells = "".join("{:>7.1f}%".format(100 * self.accuracy(k, label)) for k in self.sizes)
            lines.append(label.ljust(width) + cells)
        cells = "".join("{:>7.1f}%".format(100 * self.overall(k)) for k in self.sizes)
        lines.append("Result:".ljust(width) + cells)
        lines.append("(mean of {} runs)".format(self.runs))
        return "\n".join(lines)


def split_by_class(labels, test_fraction, seed):
    """Seeded per-class hold-out split

    Each class with n images contributes max(1, round(test_fraction * n))
    test images, always leaving at least one for training. With
    test_fraction == 0 every image is used for both training and testing.

    Args:
        labels (list): class label of every image
        test_fraction (float): share held out per class
        seed (int): the seed

    Returns:
        tuple: sorted train indices, sorted test indices
    """
    if test_fraction == 0:
        everything = list(range(len(labels)))
        return everything, everything
    rng = SplitMix64(seed)
    train, test = [], []
    for label in sorted(set(labels)):
        members = [i for i, l in enumerate(labels) if l == label]
        order = [members[j] for j in rng.permutation(len(members))]
        n_test = min(max(1, round(test_fraction * len(members))), len(members) - 1)
        test += order[:n_test]
        train += order[n_test:]
    return sorted(train), sorted(test)


def _histogram_features(dictionary, vectors):
    counts = np.bincount(assign_words(dictionary, vectors), minlength=dictionary.words_count)
    return normalize_l1(counts.astype(np.float64))


def benchmark_table1(store, dataset, sizes, runs=5, split_seed=0, settings=None, filename=None):
    """Accuracy of the whole pipeline for several dictionary sizes

    For every size and run r, each class is split with seed
    split_seed + r, a dictionary and a one-vs-rest model are trained on
    the training part and the test part is classified. Descriptors are
    extracted once per image.

    Args:
        store (bofdb.Store or None): if given, the dataset images are
            stored in it as training blobs with their descriptor sets
        dataset (list): bofdb.pipeline.learn_spec.TrainingImage objects
        sizes (list): dictionary sizes
        runs (int, optional): runs per size. Defaults to 5.
        split_seed (int, optional): seed of the first run. Defaults to 0.
        settings (bofdb.Settings, optional): extraction, k-means and SVM
            parameters. Defaults to Settings().
        filename (str, optional): CSV output. Defaults to None.

    Raises:
        SingleClassData: if the dataset has fewer than two classes

    Returns:
        BenchmarkReport: the report
    """
    settings = Settings() if settings is None else settings
    extractor = DescriptorExtractor(settings.grid_step, settings.patch_size)
    labels = [image.class_label for image in dataset]
    class_labels = sorted(set(labels))
    if len(class_labels) < 2:
        raise SingleClassData("the dataset must have at least two classes")
    if settings.test_fraction > 0 and min(labels.count(l) for l in class_labels) < 2:
        raise ValueError("every class needs two images to be split")

    vectors = []
    for image in dataset:
        descriptors = extractor.extract(decode_image(image.data))
        if store is not None:
            file_id = store.put_blob(image.data, image.name)
            descriptors.image_id = file_id
            store.put_image(file_id, image.class_label, "train")
            store.put_sifts(descriptors)
        vectors.append(descriptors.vectors.astype(np.float64))
    logger.info("benchmark: extracted descriptors of %d images", len(dataset))

    report = BenchmarkReport(sizes, class_labels, runs, filename=filename)
    for k in sizes:
        for r in range(runs):
            seed = split_seed + r
            train, test = split_by_class(labels, settings.test_fraction, seed)
            data = np.concatenate([vectors[i] for i in train])
            if settings.subsample is not None:
                data = subsample(data, settings.subsample, seed)
            dictionary = kmeans_train(
                data, k, seed=seed, restarts=settings.restarts, max_iter=settings.max_iter
            )
            features = {i: _histogram_features(dictionary, vectors[i]) for i in set(train) | set(test)}
            model = train_one_vs_rest(
                np.array([features[i] for i in train]),
                [labels[i] for i in train],
                settings.svm,
                seed=seed,
            )
            per_class = {}
            for label in class_labels:
                members = [i for i in test if labels[i] == label]
                correct = sum(predict_class(model, features[i]) == label for i in members)
                per_class[label] = correct / len(members)
            report.add_run(k, per_class)
            logger.info("benchmark k=%d run %d: overall %.3f", k, r, report.overall_results[k][-1])
    report.write()
    return report
