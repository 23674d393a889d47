"""Bit-exact serialisation of the user-defined types.

A serialised value is a null flag byte (0 = present, 1 = null) followed
by a little-endian payload. A null value is the single byte 0x01.
"""

import struct

import numpy as np

from bofdb.encode.histogram import BofHistogram, canonical_payload
from bofdb.errors import MalformedRecord
from bofdb.svm.binary_svm import BinarySvm
from bofdb.svm.svm_config import KERNELS, SvmConfig
from bofdb.svm.svm_model import SvmModel
from bofdb.vocab.dictionary import Dictionary

PRESENT = b"\x00"
NULL = b"\x01"

_I32 = struct.Struct("<i")
_DICT_HEADER = struct.Struct("<ii")


def _split_null(data):
    data = bytes(data)
    if len(data) == 0:
        raise MalformedRecord("empty record")
    flag = data[0]
    if flag == 1:
        if len(data) != 1:
            raise MalformedRecord("null record with a payload")
        return None
    if flag != 0:
        raise MalformedRecord("invalid null flag {}".format(flag))
    return data[1:]


def encode_dictionary_udt(d):
    """DictionaryData: null_flag | words_count i32 | single_word_size i32 |
    values row-major f64

    Args:
        d (bofdb.Dictionary or None): the dictionary

    Returns:
        bytes: the serialised value
    """
    if d is None:
        return NULL
    header = _DICT_HEADER.pack(d.words_count, d.single_word_size)
    return PRESENT + header + np.ascontiguousarray(d.values, dtype="<f8").tobytes()


def decode_dictionary_udt(data):
    """Inverse of encode_dictionary_udt

    Raises:
        MalformedRecord: if the bytes don't describe a dictionary

    Returns:
        bofdb.Dictionary or None: the dictionary
    """
    payload = _split_null(data)
    if payload is None:
        return None
    if len(payload) < _DICT_HEADER.size:
        raise MalformedRecord("truncated DictionaryData header")
    words_count, word_size = _DICT_HEADER.unpack_from(payload)
    if words_count < 1 or word_size < 1:
        raise MalformedRecord("invalid DictionaryData shape")
    expected = _DICT_HEADER.size + 8 * words_count * word_size
    if len(payload) != expected:
        raise MalformedRecord(
            "DictionaryData payload has {} bytes, expected {}".format(len(payload), expected)
        )
    values = np.frombuffer(payload, dtype="<f8", offset=_DICT_HEADER.size)
    try:
        return Dictionary(values.reshape(words_count, word_size))
    except ValueError as err:
        raise MalformedRecord(str(err)) from err


def encode_descriptor_udt(h):
    """DescriptorData: null_flag | words_count i32 | values f64

    The payload after the null flag is exactly what hash_descriptor
    digests.

    Args:
        h (bofdb.BofHistogram or None): the histogram

    Returns:
        bytes: the serialised value
    """
    if h is None:
        return NULL
    return PRESENT + canonical_payload(h)


def decode_descriptor_udt(data):
    """Inverse of encode_descriptor_udt

    Raises:
        MalformedRecord: if the bytes don't describe a histogram

    Returns:
        bofdb.BofHistogram or None: the histogram
    """
    payload = _split_null(data)
    if payload is None:
        return None
    if len(payload) < _I32.size:
        raise MalformedRecord("truncated DescriptorData header")
    (words_count,) = _I32.unpack_from(payload)
    if words_count < 0 or len(payload) != _I32.size + 8 * words_count:
        raise MalformedRecord("DescriptorData length doesn't match words_count")
    values = np.frombuffer(payload, dtype="<f8", offset=_I32.size)
    try:
        return BofHistogram(values)
    except ValueError as err:
        raise MalformedRecord(str(err)) from err


class ByteWriter:
    """Accumulates little-endian fields"""

    def __init__(self):
        self.parts = []

    def pack(self, fmt, *values):
        self.parts.append(struct.pack("<" + fmt, *values))
        return self

    def text(self, value):
        raw = value.encode("utf-8")
        return self.pack("H", len(raw)).raw(raw)

    def blob(self, value):
        return self.pack("I", len(value)).raw(value)

    def array(self, values):
        self.parts.append(np.ascontiguousarray(values, dtype="<f8").tobytes())
        return self

    def raw(self, value):
        self.parts.append(bytes(value))
        return self

    def getvalue(self):
        return b"".join(self.parts)


class ByteReader:
    """Reads little-endian fields, raising MalformedRecord on truncation"""

    def __init__(self, data):
        self.data = bytes(data)
        self.pos = 0

    def take(self, size):
        if size < 0 or self.pos + size > len(self.data):
            raise MalformedRecord("truncated record")
        chunk = self.data[self.pos : self.pos + size]
        self.pos += size
        return chunk

    def unpack(self, fmt):
        s = struct.Struct("<" + fmt)
        values = s.unpack(self.take(s.size))
        return values[0] if len(values) == 1 else values

    def text(self):
        try:
            return self.take(self.unpack("H")).decode("utf-8")
        except UnicodeDecodeError as err:
            raise MalformedRecord("invalid utf-8 text") from err

    def blob(self):
        return self.take(self.unpack("I"))

    def array(self, count):
        return np.frombuffer(self.take(8 * count), dtype="<f8").astype(np.float64)

    def finish(self):
        if self.pos != len(self.data):
            raise MalformedRecord("{} trailing bytes".format(len(self.data) - self.pos))


def encode_svm_model_udt(model):
    """SVMConfigs record: the hyperparameters and every machine

    Layout after the null flag: dictionary_id i64 (-1 when unknown), c f64,
    kernel u8, gamma f64 (NaN when unused), tolerance f64, max_passes u32,
    machine count u32, then per machine: label (u16 length + utf-8), bias
    f64, n_sv u32, dim u32, alphas f64[n_sv], support vectors f64[n_sv*dim],
    has_weights u8, weights f64[dim] when present.

    Args:
        model (bofdb.SvmModel or None): the model

    Returns:
        bytes: the serialised value
    """
    if model is None:
        return NULL
    cfg = model.config if model.config is not None else SvmConfig()
    writer = ByteWriter().raw(PRESENT)
    dictionary_id = -1 if model.dictionary_id is None else model.dictionary_id
    gamma = float("nan") if cfg.gamma is None else cfg.gamma
    writer.pack("qdBddI", dictionary_id, cfg.c, KERNELS.index(cfg.kernel), gamma, cfg.tolerance, cfg.max_passes)
    writer.pack("I", len(model.machines))
    for label, machine in zip(model.class_labels, model.machines):
        if not isinstance(label, str):
            raise TypeError("class labels must be strings")
        n_sv, dim = machine.support_vectors.shape
        writer.text(label).pack("dII", machine.bias, n_sv, dim)
        writer.array(machine.alphas).array(machine.support_vectors)
        if machine.weights is None:
            writer.pack("B", 0)
        else:
            writer.pack("B", 1).array(machine.weights)
    return writer.getvalue()


def decode_svm_model_udt(data):
    """Inverse of encode_svm_model_udt

    Raises:
        MalformedRecord: if the bytes don't describe a model

    Returns:
        bofdb.SvmModel or None: the model
    """
    payload = _split_null(data)
    if payload is None:
        return None
    reader = ByteReader(payload)
    dictionary_id, c, kernel_code, gamma, tolerance, max_passes = reader.unpack("qdBddI")
    if kernel_code >= len(KERNELS):
        raise MalformedRecord("unknown kernel code {}".format(kernel_code))
    kernel = KERNELS[kernel_code]
    gamma = None if np.isnan(gamma) else gamma
    count = reader.unpack("I")
    labels, machines = [], []
    for _ in range(count):
        label = reader.text()
        bias, n_sv, dim = reader.unpack("dII")
        alphas = reader.array(n_sv)
        support_vectors = reader.array(n_sv * dim).reshape(n_sv, dim)
        weights = reader.array(dim) if reader.unpack("B") else None
        labels.append(label)
        machines.append(
            BinarySvm(
                support_vectors,
                alphas,
                bias,
                kernel=kernel,
                gamma=gamma,
                class_label=label,
                weights=weights,
            )
        )
    reader.finish()
    try:
        config = SvmConfig(c=c, kernel=kernel, gamma=gamma, tolerance=tolerance, max_passes=max_passes)
        return SvmModel(
            machines,
            labels,
            dictionary_id=None if dictionary_id < 0 else dictionary_id,
            config=config,
        )
    except (TypeError, ValueError) as err:
        raise MalformedRecord(str(err)) from err
