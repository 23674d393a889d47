import struct

import numpy as np

from bofdb.errors import DimensionMismatch, MalformedDescriptorFile
from bofdb.features.keypoint import Keypoint

DESCRIPTOR_DIM = 128
NORM_TOLERANCE = 1e-6

FILE_MAGIC = b"BOFD"
FILE_VERSION = 1
FILE_HEADER = struct.Struct("<4sHHI")
_RECORD_DTYPE = np.dtype([("geometry", "<f4", (4,)), ("vector", "<f4", (DESCRIPTOR_DIM,))])


class DescriptorSet:
    """An ordered set of local descriptors of one image

    Args:
        keypoints (list): list of bofdb.Keypoint
        vectors (np.ndarray): array of shape (n, 128). Stored as float32.
        image_id (int, optional): the image the descriptors belong to.
            Defaults to None.

    Raises:
        DimensionMismatch: if vectors don't have 128 columns
        ValueError: if keypoints and vectors differ in length, or if a
            vector breaks the non-negativity or unit norm invariants

    Attributes:
        keypoints (list): list of bofdb.Keypoint
        vectors (np.ndarray): float32 array of shape (n, dim)
        image_id (int): the image id
        dim (int): the descriptor dimensionality (always 128)
    """

    def __init__(self, keypoints, vectors, image_id=None) -> None:
        vectors = np.asarray(vectors, dtype=np.float32)
        if vectors.size == 0:
            vectors = vectors.reshape(0, DESCRIPTOR_DIM)
        if vectors.ndim != 2 or vectors.shape[1] != DESCRIPTOR_DIM:
            raise DimensionMismatch(
                "descriptors must have {} components".format(DESCRIPTOR_DIM)
            )
        if len(keypoints) != vectors.shape[0]:
            raise ValueError("keypoints and vectors must have the same length")
        check_vectors(vectors)
        self.keypoints = list(keypoints)
        self.vectors = vectors
        self.image_id = image_id
        self.dim = DESCRIPTOR_DIM

    def __len__(self):
        return self.vectors.shape[0]

    def __eq__(self, other):
        if not isinstance(other, DescriptorSet):
            return NotImplemented
        return (
            self.keypoints == other.keypoints
            and np.array_equal(self.vectors, other.vectors)
            and self.image_id == other.image_id
        )


def check_vectors(vectors):
    """Checks that descriptors are finite, non-negative and have a norm of
    0 or 1 (within 1e-6)

    Args:
        vectors (np.ndarray): array of shape (n, dim)

    Raises:
        ValueError: if one of the conditions is violated
    """
    if not np.all(np.isfinite(vectors)):
        raise ValueError("descriptor components must be finite")
    if np.any(vectors < 0):
        raise ValueError("descriptor components must be non-negative")
    norms = np.linalg.norm(vectors.astype(np.float64), axis=1)
    bad = (norms != 0) & (np.abs(norms - 1) > NORM_TOLERANCE)
    if np.any(bad):
        raise ValueError(
            "descriptor {} has norm {}, expected 0 or 1".format(
                int(np.argmax(bad)), norms[np.argmax(bad)]
            )
        )


def export_descriptors(ds):
    """Serialises a DescriptorSet to the BOFD descriptor file format

    Layout (little-endian): magic "BOFD", u16 version, u16 dim, u32
    count, then count records of 4 f32 keypoint fields (x, y, scale,
    orientation) followed by dim f32 components.

    Args:
        ds (DescriptorSet): the descriptors

    Returns:
        bytes: the file content
    """
    records = np.zeros(len(ds), dtype=_RECORD_DTYPE)
    if len(ds):
        records["geometry"] = np.array([kp.as_tuple() for kp in ds.keypoints])
        records["vector"] = ds.vectors
    header = FILE_HEADER.pack(FILE_MAGIC, FILE_VERSION, ds.dim, len(ds))
    return header + records.tobytes()


def import_descriptors(data, image_id=None):
    """Parses a BOFD descriptor file

    Args:
        data (bytes): the file content
        image_id (int, optional): id attached to the result. Defaults to
            None.

    Raises:
        MalformedDescriptorFile: bad magic, version or length, or records
            breaking the DescriptorSet invariants
        DimensionMismatch: if the declared dim is not 128

    Returns:
        DescriptorSet: the descriptors
    """
    data = bytes(data)
    if len(data) < FILE_HEADER.size:
        raise MalformedDescriptorFile("truncated header")
    magic, version, dim, count = FILE_HEADER.unpack_from(data)
    if magic != FILE_MAGIC:
        raise MalformedDescriptorFile("bad magic {!r}".format(magic))
    if version != FILE_VERSION:
        raise MalformedDescriptorFile("unsupported version {}".format(version))
    if dim != DESCRIPTOR_DIM:
        raise DimensionMismatch(
            "descriptor files must have dim {}, got {}".format(DESCRIPTOR_DIM, dim)
        )
    expected = FILE_HEADER.size + count * _RECORD_DTYPE.itemsize
    if len(data) != expected:
        raise MalformedDescriptorFile(
            "expected {} bytes for {} records, got {}".format(expected, count, len(data))
        )
    records = np.frombuffer(data, dtype=_RECORD_DTYPE, count=count, offset=FILE_HEADER.size)
    try:
        keypoints = [
            Keypoint(*(float(v) for v in geometry)) for geometry in records["geometry"]
        ]
        return DescriptorSet(keypoints, records["vector"].copy(), image_id=image_id)
    except DimensionMismatch:
        raise
    except ValueError as err:
        raise MalformedDescriptorFile(str(err)) from err
