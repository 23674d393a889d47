"""Row types of the seven tables and their byte layouts.

Every row is stored in its table log as a little-endian payload written
by ``to_bytes`` and read back by ``from_bytes``. Fields beyond those the
UDTs define (file names, sizes, sources, timestamps) are specific to this
store.
"""

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from bofdb.errors import MalformedRecord
from bofdb.store.codecs import ByteReader, ByteWriter

STAGES = ("extract", "encode", "classify", "index", "total")
SOURCES = ("train", "predicted")

# stored when an optional id is absent
NO_ID = 0xFFFFFFFFFFFFFFFF

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def _optional_id(value):
    return NO_ID if value is None else value


def _read_optional_id(reader):
    value = reader.unpack("Q")
    return None if value == NO_ID else value


@dataclass(frozen=True)
class FileRow:
    """images_ft: a stored blob"""

    name: str
    size: int

    def to_bytes(self):
        return ByteWriter().text(self.name).pack("Q", self.size).getvalue()

    @classmethod
    def from_bytes(cls, data):
        reader = ByteReader(data)
        row = cls(reader.text(), reader.unpack("Q"))
        reader.finish()
        return row


@dataclass(frozen=True)
class ImageRow:
    """images: class membership of a stored image"""

    image_id: int
    class_label: str
    source: str = "train"

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError("source must be one of {}".format(SOURCES))

    def to_bytes(self):
        return (
            ByteWriter()
            .pack("Q", self.image_id)
            .text(self.class_label)
            .pack("B", SOURCES.index(self.source))
            .getvalue()
        )

    @classmethod
    def from_bytes(cls, data):
        reader = ByteReader(data)
        image_id, label, source = reader.unpack("Q"), reader.text(), reader.unpack("B")
        reader.finish()
        if source >= len(SOURCES):
            raise MalformedRecord("unknown image source {}".format(source))
        return cls(image_id, label, SOURCES[source])


@dataclass(frozen=True)
class SiftRow:
    """sifts: the exported descriptor set of an image"""

    image_id: int
    descriptors: bytes

    def to_bytes(self):
        return ByteWriter().pack("Q", self.image_id).blob(self.descriptors).getvalue()

    @classmethod
    def from_bytes(cls, data):
        reader = ByteReader(data)
        row = cls(reader.unpack("Q"), reader.blob())
        reader.finish()
        return row


@dataclass(frozen=True)
class DictionaryRow:
    """dictionaries: a serialised DictionaryData and the extraction
    parameters it was learned with (0 when unknown)"""

    udt: bytes
    grid_step: int = 0
    patch_size: int = 0

    def to_bytes(self):
        return ByteWriter().pack("II", self.grid_step, self.patch_size).blob(self.udt).getvalue()

    @classmethod
    def from_bytes(cls, data):
        reader = ByteReader(data)
        grid_step, patch_size = reader.unpack("II")
        row = cls(reader.blob(), grid_step, patch_size)
        reader.finish()
        return row


@dataclass(frozen=True)
class DescriptorRow:
    """descriptors: the histogram of an image under a dictionary"""

    image_id: int
    dictionary_id: int
    udt: bytes
    comparative_descriptor: bytes

    def __post_init__(self):
        if len(self.comparative_descriptor) != 16:
            raise ValueError("comparative_descriptor must be 16 bytes")

    def to_bytes(self):
        return (
            ByteWriter()
            .pack("QQ", self.image_id, self.dictionary_id)
            .raw(self.comparative_descriptor)
            .blob(self.udt)
            .getvalue()
        )

    @classmethod
    def from_bytes(cls, data):
        reader = ByteReader(data)
        image_id, dictionary_id = reader.unpack("QQ")
        digest = reader.take(16)
        udt = reader.blob()
        reader.finish()
        return cls(image_id, dictionary_id, udt, digest)


@dataclass(frozen=True)
class SvmConfigRow:
    """svm_configs: a serialised SvmModel"""

    dictionary_id: int
    udt: bytes

    def to_bytes(self):
        return ByteWriter().pack("Q", _optional_id(self.dictionary_id)).blob(self.udt).getvalue()

    @classmethod
    def from_bytes(cls, data):
        reader = ByteReader(data)
        row = cls(_read_optional_id(reader), reader.blob())
        reader.finish()
        return row


@dataclass(frozen=True)
class StatsRecord:
    """stats: execution time of one stage

    Args:
        image_id (int or None): the image the stage ran on, None for
            stages not tied to one image
        stage (str): one of STAGES
        elapsed_us (float): elapsed time in microseconds
        timestamp (datetime, optional): UTC time of the measurement.
            Defaults to now.
    """

    image_id: int
    stage: str
    elapsed_us: float
    timestamp: datetime = None

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ValueError("stage must be one of {}".format(STAGES))
        if not self.elapsed_us >= 0:
            raise ValueError("elapsed_us must be >= 0")
        if self.timestamp is None:
            object.__setattr__(self, "timestamp", datetime.now(timezone.utc))

    def to_bytes(self):
        micros = (self.timestamp - EPOCH) // timedelta(microseconds=1)
        return (
            ByteWriter()
            .pack("Q", _optional_id(self.image_id))
            .pack("BdQ", STAGES.index(self.stage), self.elapsed_us, micros)
            .getvalue()
        )

    @classmethod
    def from_bytes(cls, data):
        reader = ByteReader(data)
        image_id = _read_optional_id(reader)
        stage, elapsed, micros = reader.unpack("BdQ")
        reader.finish()
        if stage >= len(STAGES):
            raise MalformedRecord("unknown stage {}".format(stage))
        timestamp = EPOCH + timedelta(microseconds=micros)
        return cls(image_id, STAGES[stage], elapsed, timestamp)


ROW_TYPES = {
    "images_ft": FileRow,
    "images": ImageRow,
    "sifts": SiftRow,
    "dictionaries": DictionaryRow,
    "descriptors": DescriptorRow,
    "svm_configs": SvmConfigRow,
    "stats": StatsRecord,
}

TABLES = tuple(ROW_TYPES)
