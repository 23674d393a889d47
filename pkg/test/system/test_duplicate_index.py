import time

import numpy as np
import pytest

from bofdb import BofHistogram, Dictionary, Store, execute, parse


@pytest.fixture(scope="module")
def planted(tmp_path_factory):
    """1000 histograms, 50 of which repeat an earlier one"""
    store = Store.open(tmp_path_factory.mktemp("planted"))
    dictionary_id = store.put_dictionary(Dictionary(np.eye(16)))
    rng = np.random.default_rng(7)
    originals = [rng.integers(0, 40, size=16) for _ in range(950)]
    copies = [originals[i] for i in rng.choice(950, size=50, replace=False)]
    for counts in originals + copies:
        file_id = store.put_blob(counts.astype(np.uint8).tobytes())
        store.insert_descriptor_row(BofHistogram(counts), file_id, dictionary_id)
    yield store
    store.close()


def test_lookup_equals_linear_scan(planted):
    rows = planted.scan("descriptors")
    oracle = {}
    for record_id, row in rows:
        oracle.setdefault(row.comparative_descriptor, set()).add(record_id)

    assert len(rows) == 1000
    assert sum(len(ids) > 1 for ids in oracle.values()) >= 49
    for digest, ids in oracle.items():
        assert planted.lookup_by_hash(digest) == ids


def test_indexed_query_visits_only_matches(planted):
    digests = {row.comparative_descriptor for _, row in planted.scan("descriptors")}
    for digest in sorted(digests)[:100]:
        ast = parse("SELECT descriptor_id FROM descriptors WHERE comparative_descriptor = x'{}';".format(digest.hex()))
        before = planted.rows_visited
        result = execute(planted, ast)

        assert planted.rows_visited - before == len(result.rows)
        assert {row[0] for row in result.rows} == planted.lookup_by_hash(digest)


def test_median_lookup_time(planted):
    digests = [row.comparative_descriptor for _, row in planted.scan("descriptors")]
    elapsed = []
    for digest in digests:
        start = time.perf_counter()
        planted.lookup_by_hash(digest)
        elapsed.append(time.perf_counter() - start)

    assert np.median(elapsed) < 1e-3
