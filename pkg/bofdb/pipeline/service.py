"""Line-protocol query service.

A client sends statements terminated by ";" at the end of a line; a ";"
inside a quoted literal, which may span lines, or inside a "--" comment
doesn't end a statement.
For each statement the server answers with a tab-separated header line,
one line per row and a blank line, or with "ERR <code> <message>" and a
blank line. The connection stays open after an error.
"""

import logging
import socketserver
import threading

from bofdb.errors import BofdbError
from bofdb.query.executor import execute
from bofdb.query.parser import parse

logger = logging.getLogger(__name__)


def statement_complete(text):
    """True if the last character of text outside quoted literals and
    "--" comments, blanks aside, is a ";"

    Escaped quotes are doubled, which closes and reopens the literal.
    """
    in_string = False
    last = ""
    pos = 0
    while pos < len(text):
        char = text[pos]
        if in_string:
            in_string = char != "'"
        elif char == "'":
            in_string = True
            last = char
        elif text.startswith("--", pos):
            end = text.find("\n", pos)
            pos = len(text) if end < 0 else end
            continue
        elif not char.isspace():
            last = char
        pos += 1
    return not in_string and last == ";"



def error_reply(code, message):
    message = " ".join(str(message).split())
    return "ERR {} {}\n\n".format(code, message)


class QueryService:
    """Answers statements against a store with a loaded dictionary and model

    Args:
        store (bofdb.Store): the open store
        dictionary (bofdb.Dictionary, optional): Defaults to None.
        model (bofdb.SvmModel, optional): Defaults to None.
        extractor (bofdb.DescriptorExtractor, optional): Defaults to None.
    """

    def __init__(self, store, dictionary=None, model=None, extractor=None) -> None:
        self.store = store
        self.dictionary = dictionary
        self.model = model
        self.extractor = extractor

    def reply(self, statement):
        """Full reply text of one statement, never raising"""
        try:
            ast = parse(statement)
            result = execute(
                self.store,
                ast,
                model=self.model,
                dictionary=self.dictionary,
                extractor=self.extractor,
            )
        except BofdbError as err:
            return error_reply(err.code, err)
        except Exception as err:
            logger.exception("statement failed: %s", statement)
            return error_reply("InternalError", err)
        return "\n".join(result.to_lines()) + "\n\n"


class _SessionHandler(socketserver.StreamRequestHandler):
    def handle(self):
        service = self.server.service
        logger.info("session opened by %s", self.client_address)
        pending = []
        for raw in self.rfile:
            line = raw.decode("utf-8", errors="replace").rstrip("\r\n")
            if not pending and not line.strip():
                continue
            pending.append(line)
            statement = "\n".join(pending)
            if statement_complete(statement):
                reply = service.reply(statement)
                pending = []
                self.wfile.write(reply.encode("utf-8"))
                self.wfile.flush()
        logger.info("session closed by %s", self.client_address)


class QueryServer(socketserver.ThreadingTCPServer):
    """One thread per client session

    Args:
        address (tuple): (host, port); port 0 picks a free port
        service (QueryService): answers the statements
    """

    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address, service) -> None:
        self.service = service
        super().__init__(address, _SessionHandler)
        self._thread = None

    @property
    def port(self):
        return self.server_address[1]

    def start(self):
        """Serves in a background thread and returns self"""
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()
        logger.info("serving on %s:%d", *self.server_address[:2])
        return self

    def stop(self):
        self.shutdown()
        self.server_close()
        if self._thread is not None:
            self._thread.join()


def serve(store, port, host="127.0.0.1", dictionary=None, model=None, extractor=None):
    """Starts the query service in a background thread

    Args:
        store (bofdb.Store): the open store
        port (int): TCP port, 0 for any free port

    Returns:
        QueryServer: the running server, stop it with .stop()
    """
    service = QueryService(store, dictionary=dictionary, model=model, extractor=extractor)
    return QueryServer((host, port), service).start()
