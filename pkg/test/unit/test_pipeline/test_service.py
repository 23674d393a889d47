import pytest

from bofdb import QueryService, Store
from bofdb.pipeline.service import error_reply, statement_complete


@pytest.fixture
def service(tmp_path):
    store = Store.open(tmp_path)
    store.put_blob(b"abc", name="a.pgm")
    yield QueryService(store)
    store.close()


def test_reply_shape(service):
    assert service.reply("SELECT file_id, name FROM images_ft;") == "file_id\tname\n1\ta.pgm\n\n"


def test_empty_table(service):
    assert service.reply("SELECT * FROM stats;") == "stat_id\timage_id\tstage\telapsed_us\ttimestamp\n\n"


def test_syntax_error(service):
    reply = service.reply("SELEC * FROM images;")

    assert reply.startswith("ERR SyntaxError 1:1 ")
    assert reply.endswith("\n\n")
    assert reply.count("\n") == 2


def test_model_not_loaded(service):
    assert service.reply("SELECT GetClassOfImage(1);").startswith("ERR ModelNotLoaded ")


def test_unknown_file(service):
    assert service.reply("SELECT FindDuplicates(7);").startswith("ERR UnknownFileId ")


def test_error_reply_single_line():
    assert error_reply("X", "two\nlines") == "ERR X two lines\n\n"


def test_non_ascii_digit_is_syntax_error(service):
    assert service.reply("SELECT ²;").startswith("ERR SyntaxError 1:8 ")


@pytest.mark.parametrize(
    "text,complete",
    [
        ("SELECT * FROM images;", True),
        ("SELECT *\nFROM images;  ", True),
        ("SELECT * FROM images", False),
        ("SELECT * FROM images WHERE class_label = 'a;", False),
        ("SELECT * FROM images WHERE class_label = 'a;\nb';", True),
        ("SELECT * FROM images WHERE class_label = 'it''s;", False),
        ("SELECT * FROM images WHERE class_label = 'it''s';", True),
        ("SELECT * FROM descriptors WHERE comparative_descriptor = x'{}';".format("0" * 32), True),
        ("SELECT 1; -- it's done", True),
        ("SELECT 1 -- not yet;", False),
        ("SELECT 1 -- not yet;\n;", True),
    ],
)
def test_statement_complete(text, complete):
    assert statement_complete(text) == complete
