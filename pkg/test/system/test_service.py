import socket
import threading
import time

import pytest

from bofdb import LearnSpec, Store, learn, serve, synthetic_images


def _read_reply(stream):
    lines = []
    while True:
        line = stream.readline()
        assert line, "connection closed before the reply ended"
        if line == "\n":
            return lines
        lines.append(line.rstrip("\n"))


@pytest.fixture(scope="module")
def server(tmp_path_factory):
    store = Store.open(tmp_path_factory.mktemp("served"))
    images = synthetic_images(classes=2, per_class=4, seed=0)
    dictionary, model = learn(store, LearnSpec(images, words_count=8))
    running = serve(store, 0, dictionary=dictionary, model=model)
    yield running
    running.stop()
    store.close()


@pytest.fixture
def client(server):
    connection = socket.create_connection(("127.0.0.1", server.port), timeout=30)
    stream = connection.makefile("rw", encoding="utf-8", newline="\n")
    yield stream
    stream.close()
    connection.close()


def _ask(stream, statement):
    stream.write(statement + "\n")
    stream.flush()
    return _read_reply(stream)


def test_stats_table(client):
    lines = _ask(client, "SELECT * FROM stats;")

    assert lines[0] == "stat_id\timage_id\tstage\telapsed_us\ttimestamp"
    assert len(lines) == 1 + 16
    assert {line.split("\t")[2] for line in lines[1:]} == {"extract", "encode"}


def test_error_keeps_connection(client):
    error = _ask(client, "SELECT * FROM nowhere;")
    answer = _ask(client, "SELECT GetClassOfImage(1);")

    assert len(error) == 1
    assert error[0].startswith("ERR UnknownTable ")
    assert answer == ["GetClassOfImage(1)", "stripes"]


def test_statement_over_several_lines(client):
    lines = _ask(client, "SELECT image_id, class_label\nFROM images\nWHERE image_id IN (1, 5);")

    assert lines == ["image_id\tclass_label", "1\tstripes", "5\tcheckerboard"]


def test_semicolon_inside_string(client):
    lines = _ask(client, "SELECT image_id FROM images\nWHERE class_label = 'x;\ny';")

    assert lines == ["image_id"]


def test_no_duplicates(client):
    assert _ask(client, "SELECT FindDuplicates(2);") == ["FindDuplicates(2)", "NULL"]


def test_concurrent_clients(server):
    replies = {}

    def session(n):
        with socket.create_connection(("127.0.0.1", server.port), timeout=30) as connection:
            stream = connection.makefile("rw", encoding="utf-8", newline="\n")
            replies[n] = [_ask(stream, "SELECT GetClassOfImage({});".format(i)) for i in range(1, 9)]
            stream.close()

    threads = [threading.Thread(target=session, args=(n,)) for n in range(4)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()

    assert len(replies) == 4
    assert all(reply == replies[0] for reply in replies.values())
    assert [lines[1] for lines in replies[0]] == ["stripes"] * 4 + ["checkerboard"] * 4


def test_class_of_large_image_is_fast(tmp_path):
    """GetClassOfImage on a 256x256 image answers in under 250 ms"""
    big = synthetic_images(classes=2, per_class=1, seed=5, size=256)[0]
    with Store.open(tmp_path) as store:
        images = synthetic_images(classes=2, per_class=4, seed=0)
        dictionary, model = learn(store, LearnSpec(images, words_count=8))
        file_id = store.put_blob(big.data, big.name)
        running = serve(store, 0, dictionary=dictionary, model=model)
        try:
            with socket.create_connection(("127.0.0.1", running.port), timeout=30) as connection:
                stream = connection.makefile("rw", encoding="utf-8", newline="\n")
                start = time.perf_counter()
                lines = _ask(stream, "SELECT GetClassOfImage({});".format(file_id))
                elapsed = time.perf_counter() - start
                stream.close()
        finally:
            running.stop()

    assert lines[1] in ("stripes", "checkerboard")
    assert elapsed < 0.25
