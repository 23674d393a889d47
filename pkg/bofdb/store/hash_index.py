import logging
import struct
import zlib

from bofdb.errors import CorruptStore

logger = logging.getLogger(__name__)

MAGIC = b"BOFH"
VERSION = 1
# magic, version, descriptor row count, max descriptor id, entry count
HEADER = struct.Struct("<4sHQQI")
ENTRY = struct.Struct("<16sQ")
CRC = struct.Struct("<I")


class HashIndex:
    """Multimap from 16-byte comparative descriptor to descriptor ids

    Args:
        entries (iterable, optional): (digest, record_id) pairs. Defaults
            to None.
    """

    def __init__(self, entries=None) -> None:
        self._buckets = {}
        for digest, record_id in entries or ():
            self.add(digest, record_id)

    def add(self, digest, record_id):
        digest = bytes(digest)
        if len(digest) != 16:
            raise ValueError("digest must be 16 bytes")
        self._buckets.setdefault(digest, set()).add(record_id)

    def lookup(self, digest):
        """Ids of the rows whose comparative descriptor is digest

        Args:
            digest (bytes): the 16-byte digest

        Returns:
            set: the record ids, empty for an unknown digest
        """
        return set(self._buckets.get(bytes(digest), ()))

    def entries(self):
        """Sorted (digest, record_id) pairs"""
        return sorted((d, i) for d, ids in self._buckets.items() for i in ids)

    def __len__(self):
        return sum(len(ids) for ids in self._buckets.values())

    def __eq__(self, other):
        if not isinstance(other, HashIndex):
            return NotImplemented
        return self._buckets == other._buckets

    @classmethod
    def build(cls, descriptor_rows):
        """Builds the index from a full scan of the descriptors table

        Args:
            descriptor_rows (dict): record id -> bofdb.store.rows.DescriptorRow

        Returns:
            HashIndex: the index
        """
        return cls((row.comparative_descriptor, i) for i, row in descriptor_rows.items())

    def to_bytes(self, row_count, max_id):
        """Serialises the index together with the table state it reflects"""
        entries = self.entries()
        body = HEADER.pack(MAGIC, VERSION, row_count, max_id, len(entries))
        body += b"".join(ENTRY.pack(d, i) for d, i in entries)
        return body + CRC.pack(zlib.crc32(body))

    @classmethod
    def from_bytes(cls, data):
        """Inverse of to_bytes

        Raises:
            CorruptStore: on a bad magic, version, length or checksum

        Returns:
            tuple: (HashIndex, row_count, max_id)
        """
        if len(data) < HEADER.size + CRC.size:
            raise CorruptStore("truncated index file")
        body, (crc,) = data[: -CRC.size], CRC.unpack(data[-CRC.size :])
        if zlib.crc32(body) != crc:
            raise CorruptStore("index checksum failure")
        magic, version, row_count, max_id, count = HEADER.unpack_from(body)
        if magic != MAGIC or version != VERSION:
            raise CorruptStore("bad index header")
        if len(body) != HEADER.size + count * ENTRY.size:
            raise CorruptStore("index length doesn't match its entry count")
        index = cls(ENTRY.unpack_from(body, HEADER.size + k * ENTRY.size) for k in range(count))
        return index, row_count, max_id
