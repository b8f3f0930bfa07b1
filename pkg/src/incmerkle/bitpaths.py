"""Root-to-leaf paths encoded as bit sequences (0 = left, 1 = right).

Paths are stored top-down: ``path[0]`` is the bit taken at the root and
``path[-1]`` is the bit adjacent to the node at the end of the path.
"""
from __future__ import annotations

from typing import Sequence, Tuple

BitPath = Tuple[int, ...]


def validate_path(path: Sequence[int]) -> BitPath:
    bits = tuple(path)
    for b in bits:
        if b not in (0, 1) or isinstance(b, bool):
            raise ValueError(f"path bits must be 0 or 1, got {b!r}")
    return bits


def next_path(path: Sequence[int]) -> BitPath:
    """Successor path of the same width.

    A path of the form ``w.0.1^k`` maps to ``w.1.0^k``. The all-ones path
    (rightmost leaf) has no successor and raises ``ValueError``.
    """
    bits = validate_path(path)
    k = 0
    while k < len(bits) and bits[len(bits) - 1 - k] == 1:
        k += 1
    if k == len(bits):
        raise ValueError("the all-ones path has no successor")
    w = bits[: len(bits) - k - 1]
    return w + (1,) + (0,) * k


def nat_to_bits(k: int, h: int) -> BitPath:
    """Big-endian encoding of ``k`` over ``h`` bits."""
    if h < 0:
        raise ValueError("width must be non-negative")
    if not 0 <= k < (1 << h):
        raise ValueError(f"index {k} does not fit in {h} bits")
    return tuple((k >> (h - 1 - i)) & 1 for i in range(h))


def bits_to_nat(path: Sequence[int]) -> int:
    n = 0
    for b in validate_path(path):
        n = (n << 1) | b
    return n


def flip_last(path: Sequence[int]) -> BitPath:
    bits = validate_path(path)
    if not bits:
        raise ValueError("the empty path has no last bit")
    return bits[:-1] + (1 - bits[-1],)


def trailing_ones(k: int) -> int:
    """Number of trailing 1 bits of a non-negative integer."""
    n = 0
    while k & 1:
        k >>= 1
        n += 1
    return n
