"""Per-table append log.

A log file is a header (magic "BOFL", u16 version) followed by frames::

    length u32 | crc32 u32 | record_id u64 | payload

where length counts record_id + payload and the CRC covers the same bytes.
A frame cut short at the end of the file is the trace of an interrupted
append and is dropped; a complete frame whose CRC doesn't match means the
file is corrupt.
"""

import logging
import os
import struct
import warnings
import zlib
from pathlib import Path

from bofdb.errors import CorruptStore

logger = logging.getLogger(__name__)

MAGIC = b"BOFL"
VERSION = 1
HEADER = struct.Struct("<4sH")
FRAME = struct.Struct("<II")
RECORD_ID = struct.Struct("<Q")


def frame_record(record_id, payload):
    """Frames one record

    Args:
        record_id (int): the record id
        payload (bytes): the row bytes

    Returns:
        bytes: the frame
    """
    body = RECORD_ID.pack(record_id) + bytes(payload)
    return FRAME.pack(len(body), zlib.crc32(body)) + body


class RecordLog:
    """Append log of one table, fully loaded in memory

    Args:
        path (pathlib.Path): the log file
        sync (bool, optional): if True, every append is followed by
            os.fsync. Defaults to False.

    Attributes:
        records (dict): record id -> payload bytes, in insertion order
    """

    def __init__(self, path, sync=False) -> None:
        self.path = Path(path)
        self.sync = sync
        self.records = {}
        self._file = None
        if self.path.exists():
            self._load()
        else:
            self.path.write_bytes(HEADER.pack(MAGIC, VERSION))
            logger.debug("created table log %s", self.path)
        self._file = open(self.path, "ab")

    @property
    def max_id(self):
        return max(self.records, default=0)

    def _load(self):
        data = self.path.read_bytes()
        if len(data) < HEADER.size:
            raise CorruptStore("{}: truncated log header".format(self.path))
        magic, version = HEADER.unpack_from(data)
        if magic != MAGIC:
            raise CorruptStore("{}: bad log magic {!r}".format(self.path, magic))
        if version != VERSION:
            raise CorruptStore("{}: unsupported log version {}".format(self.path, version))

        pos = HEADER.size
        while pos < len(data):
            if pos + FRAME.size > len(data):
                break
            length, crc = FRAME.unpack_from(data, pos)
            end = pos + FRAME.size + length
            if end > len(data):
                break
            body = data[pos + FRAME.size : end]
            if length < RECORD_ID.size or zlib.crc32(body) != crc:
                raise CorruptStore(
                    "{}: checksum failure in record at byte {}".format(self.path, pos)
                )
            (record_id,) = RECORD_ID.unpack_from(body)
            self.records[record_id] = body[RECORD_ID.size :]
            pos = end

        if pos < len(data):
            warnings.warn(
                "{}: dropping {} bytes of an interrupted append".format(
                    self.path, len(data) - pos
                )
            )
            with open(self.path, "r+b") as f:
                f.truncate(pos)
        logger.debug("loaded %d records from %s", len(self.records), self.path)

    def append(self, record_id, payload):
        """Appends a record and flushes it to the file

        Args:
            record_id (int): the record id, must be unused
            payload (bytes): the row bytes
        """
        if record_id in self.records:
            raise ValueError("record id {} already exists".format(record_id))
        self._file.write(frame_record(record_id, payload))
        self._file.flush()
        if self.sync:
            os.fsync(self._file.fileno())
        self.records[record_id] = bytes(payload)

    def compact(self):
        """Rewrites the log with one frame per record, sorted by id"""
        tmp = self.path.with_name(self.path.name + ".tmp")
        with open(tmp, "wb") as f:
            f.write(HEADER.pack(MAGIC, VERSION))
            for record_id in sorted(self.records):
                f.write(frame_record(record_id, self.records[record_id]))
            f.flush()
            os.fsync(f.fileno())
        if self._file is not None:
            self._file.close()
        os.replace(tmp, self.path)
        self._file = open(self.path, "ab")

    def close(self):
        if self._file is not None:
            self._file.close()
            self._file = None
