import pytest

from bofdb import CorruptStore
from bofdb.store.record_log import HEADER, RecordLog, frame_record


@pytest.fixture
def log_path(tmp_path):
    return tmp_path / "table.log"


def test_reload(log_path):
    log = RecordLog(log_path)
    log.append(1, b"one")
    log.append(2, b"two")
    log.close()

    assert RecordLog(log_path).records == {1: b"one", 2: b"two"}


def test_torn_tail_is_dropped(log_path):
    log = RecordLog(log_path)
    log.append(1, b"kept")
    log.close()
    intact = log_path.stat().st_size
    with open(log_path, "ab") as f:
        f.write(frame_record(2, b"lost in the crash")[:-4])

    with pytest.warns(UserWarning, match="interrupted append"):
        reloaded = RecordLog(log_path)

    assert reloaded.records == {1: b"kept"}
    assert log_path.stat().st_size == intact


def test_checksum_failure(log_path):
    log = RecordLog(log_path)
    log.append(1, b"payload")
    log.close()
    data = bytearray(log_path.read_bytes())
    data[-1] ^= 0xFF
    log_path.write_bytes(bytes(data))

    with pytest.raises(CorruptStore, match="checksum"):
        RecordLog(log_path)


def test_bad_magic(log_path):
    log_path.write_bytes(HEADER.pack(b"NOPE", 1))

    with pytest.raises(CorruptStore, match="magic"):
        RecordLog(log_path)


def test_duplicate_id(log_path):
    log = RecordLog(log_path)
    log.append(1, b"a")

    with pytest.raises(ValueError, match="already exists"):
        log.append(1, b"b")


def test_compact_sorts_by_id(log_path):
    log = RecordLog(log_path)
    log.append(3, b"c")
    log.append(1, b"a")
    log.compact()
    log.close()
    data = log_path.read_bytes()

    assert data == HEADER.pack(b"BOFL", 1) + frame_record(1, b"a") + frame_record(3, b"c")
    assert RecordLog(log_path).max_id == 3
