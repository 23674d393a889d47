import numpy as np

from bofdb.encode.md5 import md5
from bofdb.errors import DimensionMismatch
from bofdb.vocab.dictionary import assign_words


class BofHistogram:
    """Per-image bag-of-features histogram (raw occurrence counts)

    Args:
        values (np.ndarray): the k word counts
        image_id (int, optional): the image id. Defaults to None.

    Attributes:
        values (np.ndarray): float64 counts, read-only
        words_count (int): the histogram length k
        image_id (int): the image id
        comparative_hash (bytes): MD5 of the canonical payload, see
            hash_descriptor
    """

    def __init__(self, values, image_id=None) -> None:
        values = np.array(values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("histogram values must be finite and non-negative")
        if not np.array_equal(values, np.floor(values)):
            raise ValueError("histogram values must be integer counts")
        # -0.0 and 0.0 must serialise alike
        values += 0.0
        values.setflags(write=False)
        self._values = values
        self.image_id = image_id
        self._hash = None

    @property
    def values(self):
        return self._values

    @property
    def words_count(self):
        return self._values.shape[0]

    @property
    def comparative_hash(self):
        if self._hash is None:
            self._hash = hash_descriptor(self)
        return self._hash

    def total(self):
        return int(self._values.sum())

    def __eq__(self, other):
        if not isinstance(other, BofHistogram):
            return NotImplemented
        return np.array_equal(self._values, other._values)


def encode_histogram(d, ds):
    """Builds the bag-of-features histogram of a descriptor set

    Args:
        d (bofdb.Dictionary): the dictionary
        ds (bofdb.DescriptorSet): the descriptors

    Raises:
        DimensionMismatch: if the descriptor size differs from
            d.single_word_size

    Returns:
        BofHistogram: counts of descriptors per nearest word
    """
    if ds.dim != d.single_word_size:
        raise DimensionMismatch(
            "descriptors have {} components, dictionary words {}".format(
                ds.dim, d.single_word_size
            )
        )
    words = assign_words(d, ds.vectors)
    counts = np.bincount(words, minlength=d.words_count).astype(np.float64)
    return BofHistogram(counts, image_id=ds.image_id)


def normalize_l1(h):
    """Divides the counts by their sum

    Args:
        h (BofHistogram or np.ndarray): the histogram

    Returns:
        np.ndarray: components summing to 1, or zeros if the sum is 0
    """
    values = h.values if isinstance(h, BofHistogram) else np.asarray(h, dtype=np.float64)
    total = values.sum()
    if total == 0:
        return np.zeros_like(values, dtype=np.float64)
    return values / total


def canonical_payload(h):
    """DescriptorData payload bytes: words_count as i32 LE followed by the
    values as f64 LE. This is the serialised record minus its null flag.
    """
    return np.int32(h.words_count).astype("<i4").tobytes() + h.values.astype("<f8").tobytes()


def hash_descriptor(h):
    """MD5 of the canonical DescriptorData payload

    Args:
        h (BofHistogram): the histogram

    Returns:
        bytes: the 16-byte comparative descriptor
    """
    return md5(canonical_payload(h))


def histogram_distance(a, b):
    """L1 distance between the L1-normalised histograms a and b"""
    return float(np.abs(normalize_l1(a) - normalize_l1(b)).sum())
