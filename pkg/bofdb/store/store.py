import logging
import os
import struct
import threading
import warnings
import zlib
from pathlib import Path

from bofdb.encode.histogram import hash_descriptor
from bofdb.errors import (
    CorruptStore,
    ForeignKeyViolation,
    MalformedRecord,
    UnknownRecord,
    UnknownTable,
)
from bofdb.features.descriptor_set import export_descriptors, import_descriptors
from bofdb.features.extractor import DescriptorExtractor
from bofdb.store.blob_store import BlobStore
from bofdb.store.codecs import (
    decode_descriptor_udt,
    decode_dictionary_udt,
    decode_svm_model_udt,
    encode_descriptor_udt,
    encode_dictionary_udt,
    encode_svm_model_udt,
)
from bofdb.store.hash_index import HashIndex
from bofdb.store.record_log import RecordLog
from bofdb.store.rows import (
    ROW_TYPES,
    TABLES,
    DescriptorRow,
    DictionaryRow,
    FileRow,
    ImageRow,
    SiftRow,
    StatsRecord,
    SvmConfigRow,
)

logger = logging.getLogger(__name__)

CATALOG_MAGIC = b"BOFS"
CATALOG_VERSION = 1
CATALOG_FILE = "catalog.bofs"
INDEX_FILE = Path("index") / "comparative_descriptor.idx"


def _write_atomic(path, data):
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as f:
        f.write(data)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def encode_catalog(next_ids):
    """Catalog manifest: magic, version, then (name, next id) per table and
    a trailing CRC32 of everything before it

    Args:
        next_ids (dict): table name -> next record id

    Returns:
        bytes: the manifest
    """
    body = struct.pack("<4sHH", CATALOG_MAGIC, CATALOG_VERSION, len(next_ids))
    for name, next_id in next_ids.items():
        raw = name.encode("utf-8")
        body += struct.pack("<H", len(raw)) + raw + struct.pack("<Q", next_id)
    return body + struct.pack("<I", zlib.crc32(body))


def decode_catalog(data):
    """Inverse of encode_catalog

    Raises:
        CorruptStore: on a magic, version or checksum failure

    Returns:
        dict: table name -> next record id
    """
    if len(data) < 12:
        raise CorruptStore("truncated catalog")
    body, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
    if zlib.crc32(body) != crc:
        raise CorruptStore("catalog checksum failure")
    magic, version, count = struct.unpack_from("<4sHH", body)
    if magic != CATALOG_MAGIC:
        raise CorruptStore("bad catalog magic {!r}".format(magic))
    if version != CATALOG_VERSION:
        raise CorruptStore("unsupported catalog version {}".format(version))
    next_ids, pos = {}, 8
    try:
        for _ in range(count):
            (length,) = struct.unpack_from("<H", body, pos)
            name = body[pos + 2 : pos + 2 + length].decode("utf-8")
            (next_ids[name],) = struct.unpack_from("<Q", body, pos + 2 + length)
            pos += 2 + length + 8
    except (struct.error, UnicodeDecodeError) as err:
        raise CorruptStore("malformed catalog table list") from err
    if pos != len(body) or set(next_ids) != set(TABLES):
        raise CorruptStore("catalog doesn't list the expected tables")
    return next_ids


class Store:
    """Handle on a store directory

    The directory holds the catalog manifest, one append log per table
    under tables/, the image files under blobs/ and the cached hash index
    under index/. Use Store.open to obtain a handle.

    Mutations are serialised by a lock; read methods return snapshots
    taken under the same lock, so a handle can be shared between threads.

    Args:
        path (str or pathlib.Path): the store directory
        sync (bool, optional): fsync after every append. Defaults to False.

    Attributes:
        rows_visited (int): number of rows fetched or scanned so far
        index (HashIndex): comparative descriptor index
    """

    def __init__(self, path, sync=False) -> None:
        self.path = Path(path)
        self.sync = sync
        self.rows_visited = 0
        self._lock = threading.RLock()
        self._logs = {}
        self._rows = {}
        self._next_ids = {}
        self._closed = True
        self.index = HashIndex()

    @classmethod
    def open(cls, path, sync=False):
        """Opens (or initialises) the store in directory path

        Raises:
            CorruptStore: if the catalog or a table log fails its checks

        Returns:
            Store: the open handle
        """
        store = cls(path, sync=sync)
        store._open()
        return store

    def _open(self):
        self.path.mkdir(parents=True, exist_ok=True)
        (self.path / "tables").mkdir(exist_ok=True)
        (self.path / "index").mkdir(exist_ok=True)
        self.blobs = BlobStore(self.path / "blobs")

        catalog = self.path / CATALOG_FILE
        if catalog.exists():
            next_ids = decode_catalog(catalog.read_bytes())
        else:
            if any((self.path / "tables").glob("*.log")):
                raise CorruptStore("{}: table logs without a catalog".format(self.path))
            next_ids = {name: 1 for name in TABLES}
            logger.info("initialising empty store in %s", self.path)

        for name in TABLES:
            log = RecordLog(self.path / "tables" / "{}.log".format(name), sync=self.sync)
            self._logs[name] = log
            try:
                self._rows[name] = {
                    i: ROW_TYPES[name].from_bytes(payload) for i, payload in log.records.items()
                }
            except (MalformedRecord, ValueError) as err:
                raise CorruptStore("{}: undecodable record ({})".format(name, err)) from err
            self._next_ids[name] = max(next_ids[name], log.max_id + 1)

        self._closed = False
        self._write_catalog()
        self.index = self._load_index()

    def _load_index(self):
        path = self.path / INDEX_FILE
        descriptors = self._rows["descriptors"]
        if path.exists():
            try:
                index, row_count, max_id = HashIndex.from_bytes(path.read_bytes())
                if row_count == len(descriptors) and max_id == self._logs["descriptors"].max_id:
                    return index
                warnings.warn("stale hash index in {}, rebuilding".format(path))
            except CorruptStore as err:
                warnings.warn("unreadable hash index ({}), rebuilding".format(err))
        else:
            logger.info("no hash index in %s, rebuilding from descriptors", self.path)
        return HashIndex.build(descriptors)

    def _write_catalog(self):
        _write_atomic(self.path / CATALOG_FILE, encode_catalog(self._next_ids))

    def close(self):
        """Compacts the table logs and writes the catalog and index files"""
        with self._lock:
            if self._closed:
                return
            for log in self._logs.values():
                log.compact()
                log.close()
            self._write_catalog()
            index_bytes = self.index.to_bytes(
                len(self._rows["descriptors"]), self._logs["descriptors"].max_id
            )
            _write_atomic(self.path / INDEX_FILE, index_bytes)
            self._closed = True
            logger.info("closed store %s", self.path)

    @property
    def closed(self):
        return self._closed

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    def _require_open(self):
        if self._closed:
            raise ValueError("the store is closed")

    def _check_table(self, table):
        if table not in ROW_TYPES:
            raise UnknownTable("unknown table {}".format(table))

    def _require(self, table, record_id, what):
        if record_id not in self._rows[table]:
            raise ForeignKeyViolation("{} {} doesn't exist".format(what, record_id))

    def _insert(self, table, row):
        # caller holds the lock
        self._require_open()
        record_id = self._next_ids[table]
        self._logs[table].append(record_id, row.to_bytes())
        self._next_ids[table] = record_id + 1
        self._rows[table][record_id] = row
        return record_id

    # generic reads

    def count(self, table):
        self._check_table(table)
        with self._lock:
            return len(self._rows[table])

    def ids(self, table):
        """Sorted record ids of a table"""
        self._check_table(table)
        with self._lock:
            return sorted(self._rows[table])

    def latest_id(self, table):
        """Largest record id of a table, None if empty"""
        self._check_table(table)
        with self._lock:
            return max(self._rows[table], default=None)

    def fetch(self, table, record_id):
        """Decoded row of a table

        Raises:
            UnknownTable: if table isn't one of the seven tables
            UnknownRecord: if no row has this id

        Returns:
            the row dataclass of the table
        """
        self._check_table(table)
        with self._lock:
            try:
                row = self._rows[table][record_id]
            except KeyError:
                raise UnknownRecord("{} has no record {}".format(table, record_id))
            self.rows_visited += 1
            return row

    def scan(self, table):
        """Snapshot of every row of a table, sorted by id

        Returns:
            list: (record id, row) pairs
        """
        self._check_table(table)
        with self._lock:
            rows = sorted(self._rows[table].items())
            self.rows_visited += len(rows)
            return rows

    def table_bytes(self, table):
        """Snapshot of the serialised rows of a table (record id -> bytes)"""
        self._check_table(table)
        with self._lock:
            return dict(sorted(self._logs[table].records.items()))

    # images_ft

    def put_blob(self, data, name=""):
        """Stores an image file

        Args:
            data (bytes): the file contents
            name (str, optional): original file name. Defaults to "".

        Returns:
            int: the file_id
        """
        data = bytes(data)
        with self._lock:
            self._require_open()
            file_id = self._next_ids["images_ft"]
            # the blob lands before the row that references it
            self.blobs.write(file_id, data)
            self._insert("images_ft", FileRow(name, len(data)))
        return file_id

    def get_blob(self, file_id):
        """Raises UnknownFileId if file_id was never stored"""
        with self._lock:
            self._require_open()
            return self.blobs.read(file_id)

    def has_file(self, file_id):
        with self._lock:
            return file_id in self._rows["images_ft"]

    # images

    def put_image(self, image_id, class_label, source="train"):
        """Records the class of an image

        Raises:
            ForeignKeyViolation: if image_id is not a stored file

        Returns:
            int: the record id
        """
        row = ImageRow(image_id, class_label, source)
        with self._lock:
            self._require("images_ft", image_id, "file")
            return self._insert("images", row)

    # sifts

    def put_sifts(self, ds):
        """Stores the descriptor set of an image

        Args:
            ds (bofdb.DescriptorSet): the set, ds.image_id must be a stored
                file

        Returns:
            int: the sift_id
        """
        row = SiftRow(ds.image_id, export_descriptors(ds))
        with self._lock:
            self._require("images_ft", ds.image_id, "file")
            return self._insert("sifts", row)

    def get_sifts(self, sift_id):
        row = self.fetch("sifts", sift_id)
        return import_descriptors(row.descriptors, image_id=row.image_id)

    # dictionaries

    def put_dictionary(self, d):
        """Stores a dictionary and sets d.dictionary_id

        The grid step and patch size of d.extractor, when set, are stored
        alongside the centres.

        Returns:
            int: the dictionary_id
        """
        params = (0, 0) if d.extractor is None else (d.extractor.grid_step, d.extractor.patch_size)
        row = DictionaryRow(encode_dictionary_udt(d), *params)
        with self._lock:
            dictionary_id = self._insert("dictionaries", row)
        d.dictionary_id = dictionary_id
        return dictionary_id

    def get_dictionary(self, dictionary_id):
        row = self.fetch("dictionaries", dictionary_id)
        d = decode_dictionary_udt(row.udt)
        d.dictionary_id = dictionary_id
        if row.grid_step and row.patch_size:
            d.extractor = DescriptorExtractor(row.grid_step, row.patch_size)
        return d

    # descriptors

    def insert_descriptor_row(self, h, image_id, dictionary_id):
        """Stores a histogram and indexes its comparative descriptor

        Raises:
            ForeignKeyViolation: if the image or dictionary doesn't exist

        Returns:
            int: the descriptor record id
        """
        digest = hash_descriptor(h)
        row = DescriptorRow(image_id, dictionary_id, encode_descriptor_udt(h), digest)
        with self._lock:
            self._require("images_ft", image_id, "file")
            self._require("dictionaries", dictionary_id, "dictionary")
            record_id = self._insert("descriptors", row)
            self.index.add(digest, record_id)
        return record_id

    def get_histogram(self, descriptor_id):
        row = self.fetch("descriptors", descriptor_id)
        h = decode_descriptor_udt(row.udt)
        h.image_id = row.image_id
        return h

    def lookup_by_hash(self, digest):
        """Descriptor ids whose comparative descriptor equals digest

        Returns:
            set: the ids, empty for an unknown digest
        """
        with self._lock:
            return self.index.lookup(digest)

    def verify_index(self):
        """True if the live index equals one rebuilt from a full scan"""
        with self._lock:
            return self.index == HashIndex.build(self._rows["descriptors"])

    # svm_configs

    def put_svm_model(self, model):
        """Stores a trained model

        Raises:
            ForeignKeyViolation: if model.dictionary_id is not stored

        Returns:
            int: the model_id
        """
        row = SvmConfigRow(model.dictionary_id, encode_svm_model_udt(model))
        with self._lock:
            if model.dictionary_id is not None:
                self._require("dictionaries", model.dictionary_id, "dictionary")
            return self._insert("svm_configs", row)

    def get_svm_model(self, model_id):
        return decode_svm_model_udt(self.fetch("svm_configs", model_id).udt)

    # stats

    def record_stat(self, s):
        """Appends a StatsRecord

        Raises:
            ForeignKeyViolation: if s.image_id is set and not a stored file

        Returns:
            int: the stat_id
        """
        if not isinstance(s, StatsRecord):
            raise TypeError("s must be of type bofdb.StatsRecord")
        with self._lock:
            if s.image_id is not None:
                self._require("images_ft", s.image_id, "file")
            return self._insert("stats", s)
