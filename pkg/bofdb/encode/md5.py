"""MD5 message digest (RFC 1321).

Used only as the equality key of the comparative descriptor index, never
for security.
"""

import math
import struct

INIT_STATE = (0x67452301, 0xEFCDAB89, 0x98BADCFE, 0x10325476)

# floor(abs(sin(i + 1)) * 2**32)
SINES = tuple(int(abs(math.sin(i + 1)) * 0x100000000) & 0xFFFFFFFF for i in range(64))

CHUNK_INDEXES = tuple(
    [i for i in range(16)]
    + [(5 * i + 1) % 16 for i in range(16)]
    + [(3 * i + 5) % 16 for i in range(16)]
    + [(7 * i) % 16 for i in range(16)]
)

SHIFTS = (
    (7, 12, 17, 22) * 4 + (5, 9, 14, 20) * 4 + (4, 11, 16, 23) * 4 + (6, 10, 15, 21) * 4
)

_CHUNK = struct.Struct("<16I")


def _rotate_left(n, count):
    return ((n << count) | (n >> (32 - count))) & 0xFFFFFFFF


def pad_message(message):
    """Appends the 0x80 marker, zero fill and the 64-bit bit length"""
    length = len(message)
    padding = b"\x80" + b"\x00" * ((55 - length) % 64)
    return message + padding + struct.pack("<Q", (length * 8) & 0xFFFFFFFFFFFFFFFF)


def hash_chunk(state, chunk):
    """Runs the 64 MD5 rounds over one 512-bit chunk

    Args:
        state (tuple): four 32-bit words
        chunk (tuple): sixteen 32-bit little-endian words

    Returns:
        tuple: the new state, initial state already added
    """
    a, b, c, d = state
    for r in range(64):
        if r < 16:
            t = d ^ (b & (c ^ d))
        elif r < 32:
            t = c ^ (d & (b ^ c))
        elif r < 48:
            t = b ^ c ^ d
        else:
            t = c ^ (b | (~d & 0xFFFFFFFF))
        t = (t + a + SINES[r] + chunk[CHUNK_INDEXES[r]]) & 0xFFFFFFFF
        a, d, c = d, c, b
        b = (b + _rotate_left(t, SHIFTS[r])) & 0xFFFFFFFF
    return tuple((s + i) & 0xFFFFFFFF for s, i in zip((a, b, c, d), state))


def md5(message):
    """Computes the MD5 digest of a byte string

    Args:
        message (bytes): the message, any length

    Returns:
        bytes: the 16-byte digest in standard order
    """
    padded = pad_message(bytes(message))
    state = INIT_STATE
    for offset in range(0, len(padded), 64):
        state = hash_chunk(state, _CHUNK.unpack_from(padded, offset))
    return struct.pack("<4I", *state)
