"""Recursive root and left-sibling algorithms over a single path.

All sibling vectors here are top-down (index 0 is the child of the root),
so ``vec[-1]`` is the sibling nearest the leaf. Each step peels the last
bit off the path, consuming one level bottom-up.
"""
from __future__ import annotations

from typing import List, Sequence

from .bitpaths import validate_path
from .combiners import Combiner, NodeValue
from .oracle import SiblingVectors

__all__ = [
    "SiblingVectors",
    "compute_root_up",
    "insert_value",
    "compute_root_up_indexed",
    "insert_value_indexed",
    "build_zero_hashes",
    "empty_root",
]


def _check_lengths(n: int, sib: SiblingVectors) -> None:
    if len(sib.left) != n or len(sib.right) != n:
        raise ValueError(
            f"path length {n} does not match sibling vectors "
            f"({len(sib.left)}, {len(sib.right)})"
        )


def compute_root_up(
    p: Sequence[int], sib: SiblingVectors, seed: NodeValue, combiner: Combiner
) -> NodeValue:
    """Root value given the siblings along ``p`` and the value at its end."""
    bits = validate_path(p)
    _check_lengths(len(bits), sib)
    return _root_up(bits, sib.left, sib.right, seed, combiner)


def _root_up(p, left, right, seed, combiner):
    if not p:
        return seed
    if p[-1] == 0:
        seed = combiner.combine(seed, right[-1])
    else:
        seed = combiner.combine(left[-1], seed)
    return _root_up(p[:-1], left[:-1], right[:-1], seed, combiner)


def insert_value(
    p: Sequence[int], sib: SiblingVectors, seed: NodeValue, combiner: Combiner
) -> List[NodeValue]:
    """Left siblings of the successor of ``p`` once ``seed`` sits at the end of ``p``.

    Entries above the lowest 0 of ``p`` are copied from ``sib.left``; the
    entry at that 0 receives the value synthesised while climbing the
    trailing 1s. Entries below it are stale copies and carry no meaning.

    For a one-bit path equal to ``[1]`` the input ``left`` is returned as is.
    That case has no successor and is never reached from a valid caller.
    """
    bits = validate_path(p)
    if not bits:
        raise ValueError("insert_value needs a non-empty path")
    _check_lengths(len(bits), sib)
    return list(_insert(bits, tuple(sib.left), tuple(sib.right), seed, combiner))


def _insert(p, left, right, seed, combiner):
    if len(p) == 1:
        return (seed,) if p[0] == 0 else left
    if p[-1] == 0:
        return left[:-1] + (seed,)
    up = _insert(p[:-1], left[:-1], right[:-1], combiner.combine(left[-1], seed), combiner)
    return tuple(up) + (left[-1],)


def _check_index(h: int, k: int, limit: int) -> None:
    if h < 0:
        raise ValueError("height must be non-negative")
    if not 0 <= k < limit:
        raise ValueError(f"index {k} out of range for height {h}")


def compute_root_up_indexed(
    h: int, k: int, sib: SiblingVectors, seed: NodeValue, combiner: Combiner
) -> NodeValue:
    """Same as :func:`compute_root_up` on the ``h``-bit encoding of ``k``.

    The parity of ``k`` picks the side at each level instead of a path bit.
    """
    _check_lengths(h, sib)
    _check_index(h, k, 1 << h)
    return _root_up_indexed(h, k, tuple(sib.left), tuple(sib.right), seed, combiner)


def _root_up_indexed(h, k, left, right, seed, combiner):
    if h == 0:
        return seed
    if k % 2 == 0:
        seed = combiner.combine(seed, right[-1])
    else:
        seed = combiner.combine(left[-1], seed)
    return _root_up_indexed(h - 1, k // 2, left[:-1], right[:-1], seed, combiner)


def insert_value_indexed(
    h: int, k: int, sib: SiblingVectors, seed: NodeValue, combiner: Combiner
) -> List[NodeValue]:
    """Same as :func:`insert_value` on the ``h``-bit encoding of ``k``.

    ``k`` must not be the index of the last leaf.
    """
    if h < 1:
        raise ValueError("insert_value_indexed needs h >= 1")
    _check_lengths(h, sib)
    _check_index(h, k, (1 << h) - 1)
    return list(_insert_indexed(h, k, tuple(sib.left), tuple(sib.right), seed, combiner))


def _insert_indexed(h, k, left, right, seed, combiner):
    if h == 1:
        return (seed,) if k % 2 == 0 else left
    if k % 2 == 0:
        return left[:-1] + (seed,)
    up = _insert_indexed(
        h - 1, k // 2, left[:-1], right[:-1], combiner.combine(left[-1], seed), combiner
    )
    return tuple(up) + (left[-1],)


def build_zero_hashes(h: int, combiner: Combiner) -> List[NodeValue]:
    """Roots of all-default subtrees for levels ``0 .. h-1``.

    ``levels[0]`` is the default leaf and each level combines the previous
    one with itself.
    """
    if h < 1:
        raise ValueError("zero-hash table needs h >= 1")
    levels = [combiner.default_leaf]
    for _ in range(h - 1):
        levels.append(combiner.combine(levels[-1], levels[-1]))
    return levels


def empty_root(h: int, combiner: Combiner) -> NodeValue:
    """Root of the all-default tree of height ``h`` (``zero^h``)."""
    value = combiner.default_leaf
    for _ in range(h):
        value = combiner.combine(value, value)
    return value
