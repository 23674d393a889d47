import numpy as np
import pytest

from bofdb import (
    BofHistogram,
    CorruptStore,
    DescriptorExtractor,
    DescriptorSet,
    Dictionary,
    ForeignKeyViolation,
    Keypoint,
    StatsRecord,
    Store,
    UnknownFileId,
    UnknownRecord,
    UnknownTable,
    train_one_vs_rest,
)
from bofdb.store.rows import TABLES
from bofdb.store.store import CATALOG_FILE, INDEX_FILE


@pytest.fixture
def store(tmp_path):
    handle = Store.open(tmp_path / "db")
    yield handle
    handle.close()


@pytest.fixture
def dictionary_id(store):
    return store.put_dictionary(Dictionary(np.eye(3)))


def test_fresh_store_is_empty(store):
    assert all(store.count(table) == 0 for table in TABLES)
    assert (store.path / CATALOG_FILE).exists()


def test_reopen_keeps_catalog(tmp_path):
    with Store.open(tmp_path) as store:
        store.put_blob(b"abc")
    first = (tmp_path / CATALOG_FILE).read_bytes()
    with Store.open(tmp_path) as store:
        assert store.count("images_ft") == 1

    assert (tmp_path / CATALOG_FILE).read_bytes() == first


def test_blob_round_trip(store):
    file_id = store.put_blob(b"\x00\x01binary", name="x.pgm")

    assert store.get_blob(file_id) == b"\x00\x01binary"
    assert store.fetch("images_ft", file_id).name == "x.pgm"
    assert store.fetch("images_ft", file_id).size == 8


def test_random_blobs(store):
    rng = np.random.default_rng(0)
    blobs = [rng.integers(0, 256, size=int(rng.integers(0, 200)), dtype=np.uint8).tobytes() for _ in range(1000)]
    ids = [store.put_blob(b) for b in blobs]

    assert all(store.get_blob(i) == b for i, b in zip(ids, blobs))


def test_unknown_blob(store):
    with pytest.raises(UnknownFileId):
        store.get_blob(42)


def test_ids_are_sequential(store):
    assert [store.put_blob(b"x") for _ in range(3)] == [1, 2, 3]


def test_sifts_round_trip(store):
    file_id = store.put_blob(b"img")
    vectors = np.zeros((2, 128))
    vectors[:, 0] = 1.0
    ds = DescriptorSet([Keypoint(1, 2, 3), Keypoint(4, 5, 6)], vectors, image_id=file_id)
    sift_id = store.put_sifts(ds)

    assert store.get_sifts(sift_id) == ds


def test_dictionary_round_trip(store):
    d = Dictionary(np.arange(6.0).reshape(2, 3))
    dictionary_id = store.put_dictionary(d)

    assert d.dictionary_id == dictionary_id
    assert store.get_dictionary(dictionary_id) == d
    assert store.get_dictionary(dictionary_id).extractor is None


def test_dictionary_keeps_extractor(store):
    d = Dictionary(np.eye(2), extractor=DescriptorExtractor(grid_step=4, patch_size=8))
    back = store.get_dictionary(store.put_dictionary(d))

    assert back == d
    assert (back.extractor.grid_step, back.extractor.patch_size) == (4, 8)


def test_insert_then_lookup(store, dictionary_id):
    file_id = store.put_blob(b"img")
    h = BofHistogram([1, 2, 0])
    record_id = store.insert_descriptor_row(h, file_id, dictionary_id)

    assert record_id in store.lookup_by_hash(h.comparative_hash)
    assert store.get_histogram(record_id) == h
    assert store.get_histogram(record_id).image_id == file_id


def test_same_histogram_two_images(store, dictionary_id):
    h = BofHistogram([1, 2, 0])
    ids = {store.insert_descriptor_row(h, store.put_blob(b"a"), dictionary_id) for _ in range(2)}

    assert store.lookup_by_hash(h.comparative_hash) == ids


def test_lookup_unknown_digest(store):
    assert store.lookup_by_hash(bytes(16)) == set()


def test_lookup_matches_scan(store, dictionary_id):
    rng = np.random.default_rng(1)
    for _ in range(60):
        counts = rng.integers(0, 3, size=3)
        store.insert_descriptor_row(BofHistogram(counts), store.put_blob(b"i"), dictionary_id)
    for _, row in store.scan("descriptors"):
        digest = row.comparative_descriptor
        expected = {i for i, r in store.scan("descriptors") if r.comparative_descriptor == digest}
        assert store.lookup_by_hash(digest) == expected


def test_foreign_keys(store, dictionary_id):
    with pytest.raises(ForeignKeyViolation):
        store.put_image(9, "a")
    with pytest.raises(ForeignKeyViolation):
        store.insert_descriptor_row(BofHistogram([1, 0, 0]), 9, dictionary_id)
    file_id = store.put_blob(b"x")
    with pytest.raises(ForeignKeyViolation):
        store.insert_descriptor_row(BofHistogram([1, 0, 0]), file_id, 99)
    with pytest.raises(ForeignKeyViolation):
        store.record_stat(StatsRecord(9, "total", 1.0))


def test_record_stat(store):
    store.record_stat(StatsRecord(None, "total", 1.0))

    assert store.count("stats") == 1


def test_record_stat_type(store):
    with pytest.raises(TypeError, match="bofdb.StatsRecord"):
        store.record_stat("total")


def test_svm_model_round_trip(store):
    d = Dictionary(np.eye(2))
    store.put_dictionary(d)
    X = np.array([[1.0, 0.0], [0.9, 0.1], [0.0, 1.0], [0.1, 0.9]])
    model = train_one_vs_rest(X, ["a", "a", "b", "b"], dictionary_id=d.dictionary_id)
    model_id = store.put_svm_model(model)
    back = store.get_svm_model(model_id)

    assert back.dictionary_id == d.dictionary_id
    assert np.array_equal(back.decision_values([0.5, 0.5]), model.decision_values([0.5, 0.5]))


def test_unknown_table(store):
    with pytest.raises(UnknownTable):
        store.scan("tables")


def test_unknown_record(store):
    with pytest.raises(UnknownRecord):
        store.fetch("images", 1)


def test_rows_visited(store):
    store.put_blob(b"a")
    store.put_blob(b"b")
    before = store.rows_visited
    store.scan("images_ft")
    store.fetch("images_ft", 1)

    assert store.rows_visited == before + 3


class TestIndexPersistence:
    def fill(self, path, n=20):
        with Store.open(path) as store:
            dictionary_id = store.put_dictionary(Dictionary(np.eye(3)))
            for i in range(n):
                store.insert_descriptor_row(BofHistogram([i % 4, 1, 0]), store.put_blob(b"x"), dictionary_id)
            return store.index

    def test_persisted_index_is_loaded(self, tmp_path):
        built = self.fill(tmp_path)
        with Store.open(tmp_path) as store:
            assert store.index == built
            assert store.verify_index()

    def test_missing_index_is_rebuilt(self, tmp_path):
        built = self.fill(tmp_path)
        (tmp_path / INDEX_FILE).unlink()
        with Store.open(tmp_path) as store:
            assert store.index == built

    def test_corrupt_index_is_rebuilt(self, tmp_path):
        built = self.fill(tmp_path)
        (tmp_path / INDEX_FILE).write_bytes(b"garbage" * 10)
        with pytest.warns(UserWarning, match="rebuilding"):
            store = Store.open(tmp_path)
        assert store.index == built
        store.close()

    def test_stale_index_is_rebuilt(self, tmp_path):
        self.fill(tmp_path)
        stale = (tmp_path / INDEX_FILE).read_bytes()
        self.fill(tmp_path, n=3)
        (tmp_path / INDEX_FILE).write_bytes(stale)
        with pytest.warns(UserWarning, match="stale"):
            store = Store.open(tmp_path)
        assert store.verify_index()
        assert store.count("descriptors") == 23
        store.close()

    def test_crash_without_close(self, tmp_path):
        store = Store.open(tmp_path)
        dictionary_id = store.put_dictionary(Dictionary(np.eye(3)))
        for i in range(500):
            store.insert_descriptor_row(BofHistogram([i % 7, i % 3, 1]), store.put_blob(b"x"), dictionary_id)
        incremental = store.index
        # simulate a crash: the logs are flushed but never compacted
        for log in store._logs.values():
            log.close()

        with Store.open(tmp_path) as reopened:
            assert reopened.index == incremental
            assert reopened.count("descriptors") == 500


def test_logs_without_catalog(tmp_path):
    Store.open(tmp_path).close()
    (tmp_path / CATALOG_FILE).unlink()

    with pytest.raises(CorruptStore):
        Store.open(tmp_path)
