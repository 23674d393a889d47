"""Columns exposed by each table and signatures of the query functions."""

import struct

from bofdb.features.descriptor_set import FILE_HEADER
from bofdb.helpers import digest_to_hex
from bofdb.store.codecs import NULL, decode_svm_model_udt

# column name -> value type, in projection order
TABLE_COLUMNS = {
    "images_ft": {"file_id": "integer", "name": "string", "size": "integer"},
    "images": {"image_id": "integer", "class_label": "string", "source": "string"},
    "sifts": {"sift_id": "integer", "image_id": "integer", "keypoint_count": "integer"},
    "dictionaries": {
        "dictionary_id": "integer",
        "words_count": "integer",
        "single_word_size": "integer",
        "grid_step": "integer",
        "patch_size": "integer",
    },
    "descriptors": {
        "descriptor_id": "integer",
        "image_id": "integer",
        "dictionary_id": "integer",
        "words_count": "integer",
        "comparative_descriptor": "digest",
    },
    "svm_configs": {
        "model_id": "integer",
        "dictionary_id": "integer",
        "class_count": "integer",
        "kernel": "string",
        "c": "real",
    },
    "stats": {
        "stat_id": "integer",
        "image_id": "integer",
        "stage": "string",
        "elapsed_us": "real",
        "timestamp": "string",
    },
}

# column holding the images_ft id, for tables that have one
IMAGE_COLUMN = {
    "images_ft": "file_id",
    "images": "image_id",
    "sifts": "image_id",
    "descriptors": "image_id",
    "stats": "image_id",
}

# the record id column
ID_COLUMN = {
    "images_ft": "file_id",
    "sifts": "sift_id",
    "dictionaries": "dictionary_id",
    "descriptors": "descriptor_id",
    "svm_configs": "model_id",
    "stats": "stat_id",
}

# function name -> argument types
FUNCTIONS = {
    "GetClassOfImage": ("integer",),
    "FindDuplicates": ("integer",),
    "FindSimilar": ("integer", "integer"),
}

DEFAULT_SOURCE = "images_ft"


def _udt_ints(udt, count):
    if udt == NULL:
        return (None,) * count
    return struct.unpack_from("<" + "i" * count, udt, 1)


def row_values(table, record_id, row):
    """Column values of a stored row

    Args:
        table (str): the table name
        record_id (int): the record id
        row: the row dataclass of the table

    Returns:
        dict: column name -> value (int, float, str, bytes or None)
    """
    if table == "images_ft":
        return {"file_id": record_id, "name": row.name, "size": row.size}
    if table == "images":
        return {"image_id": row.image_id, "class_label": row.class_label, "source": row.source}
    if table == "sifts":
        count = FILE_HEADER.unpack_from(row.descriptors)[3]
        return {"sift_id": record_id, "image_id": row.image_id, "keypoint_count": count}
    if table == "dictionaries":
        words_count, word_size = _udt_ints(row.udt, 2)
        return {
            "dictionary_id": record_id,
            "words_count": words_count,
            "single_word_size": word_size,
            "grid_step": row.grid_step or None,
            "patch_size": row.patch_size or None,
        }
    if table == "descriptors":
        return {
            "descriptor_id": record_id,
            "image_id": row.image_id,
            "dictionary_id": row.dictionary_id,
            "words_count": _udt_ints(row.udt, 1)[0],
            "comparative_descriptor": row.comparative_descriptor,
        }
    if table == "svm_configs":
        model = decode_svm_model_udt(row.udt)
        return {
            "model_id": record_id,
            "dictionary_id": row.dictionary_id,
            "class_count": len(model.class_labels),
            "kernel": model.config.kernel,
            "c": model.config.c,
        }
    return {
        "stat_id": record_id,
        "image_id": row.image_id,
        "stage": row.stage,
        "elapsed_us": row.elapsed_us,
        "timestamp": row.timestamp.isoformat(),
    }


def render_value(value):
    """Text form of a result value: NULL, lowercase hex digests, repr-exact
    floats"""
    if value is None:
        return "NULL"
    if isinstance(value, (bytes, bytearray)):
        return digest_to_hex(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)
