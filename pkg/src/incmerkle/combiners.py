"""Binary combiners ("hash" functions) used to decorate Merkle trees.

A combiner bundles the binary function with the default leaf used for
right-padding. Two instances are provided: an integer toy combiner
``x - y - 1`` that keeps worked examples readable, and a SHA-256 combiner
over 32-byte digests.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Union

NodeValue = Union[int, bytes]

DIGEST_SIZE = 32

TOY = "toy"
DIGEST = "sha256"


@dataclass(frozen=True)
class Combiner:
    """A binary function over node values plus the padding value."""

    name: str
    combine: Callable[[NodeValue, NodeValue], NodeValue]
    default_leaf: NodeValue

    def __call__(self, left: NodeValue, right: NodeValue) -> NodeValue:
        return self.combine(left, right)

    @property
    def is_digest(self) -> bool:
        return isinstance(self.default_leaf, bytes)

    def check_value(self, value: NodeValue) -> NodeValue:
        """Raise ``TypeError``/``ValueError`` if *value* is outside this combiner's domain."""
        if self.is_digest:
            if not isinstance(value, (bytes, bytearray)):
                raise TypeError(f"{self.name} combiner expects bytes, got {type(value).__name__}")
            if len(value) != DIGEST_SIZE:
                raise ValueError(f"digest values must be {DIGEST_SIZE} bytes, got {len(value)}")
            return bytes(value)
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"{self.name} combiner expects int, got {type(value).__name__}")
        return value


def _toy(x: int, y: int) -> int:
    return x - y - 1


def _sha256_pair(x: bytes, y: bytes) -> bytes:
    if len(x) != DIGEST_SIZE or len(y) != DIGEST_SIZE:
        raise ValueError(f"digest values must be {DIGEST_SIZE} bytes")
    return hashlib.sha256(x + y).digest()


def toy_combiner() -> Combiner:
    """``combine(x, y) = x - y - 1`` over Python ints, padding with 0."""
    return Combiner(TOY, _toy, 0)


def digest_combiner() -> Combiner:
    """SHA-256 of the 64-byte concatenation ``x || y``, padding with 32 zero bytes."""
    return Combiner(DIGEST, _sha256_pair, bytes(DIGEST_SIZE))


def combiner_by_id(combiner_id: str) -> Combiner:
    if combiner_id == TOY:
        return toy_combiner()
    if combiner_id == DIGEST:
        return digest_combiner()
    raise ValueError(f"unknown combiner id {combiner_id!r}")


@dataclass
class CountingCombiner:
    """Wraps a combiner and counts how many times it is invoked.

    Behaves like a :class:`Combiner` everywhere one is accepted.
    """

    inner: Combiner
    calls: int = field(default=0)

    @property
    def name(self) -> str:
        return self.inner.name

    @property
    def default_leaf(self) -> NodeValue:
        return self.inner.default_leaf

    @property
    def is_digest(self) -> bool:
        return self.inner.is_digest

    def check_value(self, value: NodeValue) -> NodeValue:
        return self.inner.check_value(value)

    def combine(self, left: NodeValue, right: NodeValue) -> NodeValue:
        self.calls += 1
        return self.inner.combine(left, right)

    __call__ = combine

    def reset(self) -> int:
        n, self.calls = self.calls, 0
        return n
