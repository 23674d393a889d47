import time

import numpy as np

MASK_64 = 0xFFFFFFFFFFFFFFFF


class SplitMix64:
    """Seeded 64-bit SplitMix pseudo random generator.

    The sequence is fully specified so that dictionaries trained with the
    same seed are byte-identical on every platform.

    Args:
        seed (int): the seed. Reduced modulo 2**64.

    Attributes:
        state (int): the current 64-bit state
    """

    def __init__(self, seed):
        if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
            raise TypeError("seed must be an int")
        self.state = int(seed) & MASK_64

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK_64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK_64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK_64
        return z ^ (z >> 31)

    def next_float(self):
        """Returns a uniform float in [0, 1) built from the top 53 bits"""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def next_below(self, n):
        """Returns a uniform integer in [0, n)

        Args:
            n (int): exclusive upper bound, must be positive

        Returns:
            int: the drawn integer
        """
        if n <= 0:
            raise ValueError("n must be positive")
        # rejection sampling keeps the draw unbiased
        limit = (MASK_64 + 1) - ((MASK_64 + 1) % n)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % n

    def permutation(self, n):
        """Fisher-Yates permutation of range(n)

        Args:
            n (int): the length

        Returns:
            list: a permutation of 0..n-1
        """
        order = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.next_below(i + 1)
            order[i], order[j] = order[j], order[i]
        return order


class Stopwatch:
    """Measures elapsed wall time of consecutive stages in microseconds.

    Attributes:
        timings (dict): stage name mapped to elapsed microseconds
    """

    def __init__(self):
        self.timings = {}
        self._start = time.perf_counter_ns()

    def elapsed_us(self):
        return (time.perf_counter_ns() - self._start) / 1e3

    def stage(self, name):
        return _Stage(self, name)


class _Stage:
    def __init__(self, watch, name):
        self.watch = watch
        self.name = name

    def __enter__(self):
        self._start = time.perf_counter_ns()
        return self

    def __exit__(self, *exc):
        elapsed = (time.perf_counter_ns() - self._start) / 1e3
        self.watch.timings[self.name] = self.watch.timings.get(self.name, 0.0) + elapsed
        return False


def digest_to_hex(digest):
    """Renders a 16-byte digest as lowercase hex

    Args:
        digest (bytes): the digest

    Returns:
        str: 32 hexadecimal characters
    """
    return bytes(digest).hex()


def hex_to_digest(text):
    """Parses 32 hex digits into a 16-byte digest

    Args:
        text (str): the hexadecimal representation

    Raises:
        ValueError: if text is not 32 hex digits

    Returns:
        bytes: the digest
    """
    if len(text) != 32:
        raise ValueError("a digest has exactly 32 hex digits")
    return bytes.fromhex(text)
