import hashlib

import numpy as np
import pytest

from bofdb import md5
from bofdb.encode.md5 import pad_message

REFERENCE_VECTORS = [
    (b"", "d41d8cd98f00b204e9800998ecf8427e"),
    (b"a", "0cc175b9c0f1b6a831c399e269772661"),
    (b"abc", "900150983cd24fb0d6963f7d28e17f72"),
    (b"message digest", "f96b697d7cb7938d525a2f31aaf161d0"),
    (b"abcdefghijklmnopqrstuvwxyz", "c3fcd3d76192e4007dfb496cca67e13b"),
    (
        b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789",
        "d174ab98d277d9f5a5611c2c9f419d9f",
    ),
    (
        b"1234567890" * 8,
        "57edf4a22be3c955ac49da2e2107b67a",
    ),
]


@pytest.mark.parametrize("message,expected", REFERENCE_VECTORS)
def test_reference_vectors(message, expected):
    assert md5(message).hex() == expected


@pytest.mark.parametrize("length", [55, 56, 63, 64, 65, 119, 120, 1000])
def test_block_boundaries(length):
    message = bytes(range(256)) * (length // 256 + 1)
    message = message[:length]

    assert md5(message) == hashlib.md5(message).digest()


def test_random_messages():
    rng = np.random.default_rng(0)
    for _ in range(50):
        message = rng.integers(0, 256, size=int(rng.integers(0, 300)), dtype=np.uint8).tobytes()
        assert md5(message) == hashlib.md5(message).digest()


def test_padding_length():
    for length in range(130):
        assert len(pad_message(b"x" * length)) % 64 == 0
