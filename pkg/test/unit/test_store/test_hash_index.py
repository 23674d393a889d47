import pytest

from bofdb import CorruptStore, HashIndex
from bofdb.store.rows import DescriptorRow

DIGEST_A = bytes(range(16))
DIGEST_B = bytes(range(1, 17))


def test_multimap():
    index = HashIndex()
    index.add(DIGEST_A, 1)
    index.add(DIGEST_A, 2)
    index.add(DIGEST_B, 3)

    assert index.lookup(DIGEST_A) == {1, 2}
    assert index.lookup(DIGEST_B) == {3}
    assert index.lookup(bytes(16)) == set()
    assert len(index) == 3


def test_lookup_returns_copy():
    index = HashIndex([(DIGEST_A, 1)])
    index.lookup(DIGEST_A).add(99)

    assert index.lookup(DIGEST_A) == {1}


def test_build_from_rows():
    rows = {
        1: DescriptorRow(1, 1, b"\x01", DIGEST_A),
        2: DescriptorRow(2, 1, b"\x01", DIGEST_A),
    }

    assert HashIndex.build(rows) == HashIndex([(DIGEST_A, 2), (DIGEST_A, 1)])


def test_serialisation():
    index = HashIndex([(DIGEST_A, 1), (DIGEST_B, 5)])
    back, row_count, max_id = HashIndex.from_bytes(index.to_bytes(2, 5))

    assert back == index
    assert (row_count, max_id) == (2, 5)


def test_corrupt_bytes():
    data = bytearray(HashIndex([(DIGEST_A, 1)]).to_bytes(1, 1))
    data[10] ^= 0x01

    with pytest.raises(CorruptStore):
        HashIndex.from_bytes(bytes(data))


def test_digest_length():
    with pytest.raises(ValueError, match="16 bytes"):
        HashIndex().add(b"short", 1)
