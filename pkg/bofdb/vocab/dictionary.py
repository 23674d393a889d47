import numpy as np
from scipy.spatial.distance import cdist

from bofdb.errors import DimensionMismatch


class Dictionary:
    """A bag-of-features visual dictionary: k cluster centres

    Args:
        values (np.ndarray): array of shape (words_count, single_word_size)
            holding the cluster centres
        dictionary_id (int, optional): the dictionary id. Defaults to None.
        extractor (bofdb.DescriptorExtractor, optional): the extractor whose
            descriptors were clustered. Defaults to None.

    Attributes:
        values (np.ndarray): float64 array of the cluster centres, read-only
        words_count (int): the number of visual words k
        single_word_size (int): the descriptor dimensionality
        dictionary_id (int): the dictionary id
        extractor (bofdb.DescriptorExtractor): the extractor images must be
            described with, None if unknown
    """

    def __init__(self, values, dictionary_id=None, extractor=None) -> None:
        values = np.array(values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("values must be a 2D array")
        if values.shape[0] < 1:
            raise ValueError("a dictionary has at least one word")
        if not np.all(np.isfinite(values)):
            raise ValueError("cluster centres must be finite")
        values.setflags(write=False)
        self._values = values
        self.dictionary_id = dictionary_id
        self.extractor = extractor

    @property
    def values(self):
        return self._values

    @property
    def words_count(self):
        return self._values.shape[0]

    @property
    def single_word_size(self):
        return self._values.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Dictionary):
            return NotImplemented
        return self._values.shape == other._values.shape and np.array_equal(
            self._values, other._values
        )

    def check_dimension(self, data):
        """Returns data as a float64 2D array after checking its width

        Raises:
            DimensionMismatch: if data doesn't have single_word_size columns
        """
        data = np.asarray(data, dtype=np.float64)
        if data.ndim == 1:
            data = data.reshape(1, -1)
        if data.ndim != 2 or data.shape[1] != self.single_word_size:
            raise DimensionMismatch(
                "expected vectors of size {}, got shape {}".format(
                    self.single_word_size, data.shape
                )
            )
        return data


def assign_words(d, data):
    """Index of the nearest centre for each row of data

    Distances are squared Euclidean. Ties go to the lowest index.

    Args:
        d (Dictionary): the dictionary
        data (np.ndarray): array of shape (n, single_word_size)

    Raises:
        DimensionMismatch: if the widths don't match

    Returns:
        np.ndarray: int64 array of word indices of length n
    """
    data = d.check_dimension(data)
    if data.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    distances = cdist(data, d.values, metric="sqeuclidean")
    # argmin returns the first occurrence of the minimum
    return np.argmin(distances, axis=1).astype(np.int64)


def assign_word(d, v):
    """Index of the centre nearest to v

    Args:
        d (Dictionary): the dictionary
        v (np.ndarray): a vector of single_word_size components

    Raises:
        DimensionMismatch: if v has the wrong size
        ValueError: if v is not finite

    Returns:
        int: the word index
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatch("assign_word expects a single vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector components must be finite")
    return int(assign_words(d, v)[0])


def sse(d, data):
    """Sum of squared distances of the points to their nearest centre

    Args:
        d (Dictionary): the dictionary
        data (np.ndarray): array of shape (n, single_word_size)

    Returns:
        float: the within-cluster sum of squares
    """
    data = d.check_dimension(data)
    if data.shape[0] == 0:
        return 0.0
    labels = assign_words(d, data)
    diff = data - d.values[labels]
    return float(np.sum(diff * diff))
