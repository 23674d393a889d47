import os
from pathlib import Path

from bofdb.errors import UnknownFileId


class BlobStore:
    """Image files kept beside the catalog, one file per file_id

    Args:
        directory (pathlib.Path): the blob directory
    """

    def __init__(self, directory) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path(self, file_id):
        return self.directory / "{:016x}.blob".format(file_id)

    def write(self, file_id, data):
        target = self.path(file_id)
        tmp = target.with_suffix(".tmp")
        with open(tmp, "wb") as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, target)

    def read(self, file_id):
        """Raises UnknownFileId if no blob has this id"""
        try:
            return self.path(file_id).read_bytes()
        except FileNotFoundError:
            raise UnknownFileId(file_id)
