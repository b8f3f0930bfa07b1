"""Imperative deposit-contract accumulator.

State is O(height): a counter, the ``branch`` vector of left siblings on the
path to the next free leaf, and a table of zero hashes. Both vectors are
indexed by level, so ``branch[0]`` sits next to the leaves.
"""
from __future__ import annotations

import enum
import random
from typing import List, Optional, Sequence

from .combiners import Combiner, NodeValue
from .core import build_zero_hashes

MAX_HEIGHT = 32


class Variant(enum.Enum):
    OPTIMIZED = "optimized"
    ORIGINAL_GUARDED = "original-guarded"


class TreeFullError(Exception):
    """Raised when a deposit would fill the last leaf."""


class UnreachableCodeError(RuntimeError):
    """The guarded deposit loop ran past its last level."""


def random_branch(height: int, combiner: Combiner, rng: random.Random) -> List[NodeValue]:
    if combiner.is_digest:
        return [rng.randbytes(32) for _ in range(height)]
    return [rng.randint(-(10**9), 10**9) for _ in range(height)]


class DepositContract:
    """Append-only Merkle accumulator with deposit and root queries.

    ``branch`` may start with any contents; only entries written by
    ``deposit`` are ever read back. With ``audit=True`` every deposited value
    is kept so the state can be compared against a full tree.
    """

    def __init__(
        self,
        height: int,
        combiner: Combiner,
        audit: bool = False,
        branch: Optional[Sequence[NodeValue]] = None,
    ) -> None:
        if not isinstance(height, int) or not 1 <= height <= MAX_HEIGHT:
            raise ValueError(f"height must be in [1, {MAX_HEIGHT}], got {height!r}")
        self.height = height
        self.combiner = combiner
        self.count = 0
        self.zero_hashes = build_zero_hashes(height, combiner)
        if branch is None:
            self.branch = [combiner.default_leaf] * height
        else:
            if len(branch) != height:
                raise ValueError(f"branch must have {height} entries, got {len(branch)}")
            self.branch = [combiner.check_value(v) for v in branch]
        self.audit_values: Optional[List[NodeValue]] = [] if audit else None
        # instrumentation read by the test harness
        self.unreachable_hit = False
        self.guard_exits = 0
        self.last_write_index: Optional[int] = None
        self.max_write_index = -1

    @classmethod
    def from_snapshot(
        cls,
        height: int,
        combiner: Combiner,
        count: int,
        branch: Sequence[NodeValue],
        audit_values: Optional[Sequence[NodeValue]] = None,
    ) -> "DepositContract":
        """Rebuild a contract from persisted ``count`` and ``branch``."""
        c = cls(height, combiner, audit=audit_values is not None, branch=branch)
        if not 0 <= count < c.capacity:
            raise ValueError(f"count {count} out of range for height {height}")
        if audit_values is not None:
            if len(audit_values) != count:
                raise ValueError("audit log length does not match count")
            c.audit_values = [combiner.check_value(v) for v in audit_values]
        c.count = count
        return c

    @property
    def capacity(self) -> int:
        """Number of leaves, ``2^height``."""
        return 1 << self.height

    @property
    def remaining(self) -> int:
        """Deposits still accepted; the last leaf is never filled."""
        return self.capacity - 1 - self.count

    def deposit(self, value: NodeValue, variant: Variant = Variant.OPTIMIZED) -> None:
        value = self.combiner.check_value(value)
        if self.count >= self.capacity - 1:
            raise TreeFullError(
                f"tree of height {self.height} is full ({self.count} deposits)"
            )
        if variant is Variant.OPTIMIZED:
            i = self._deposit_optimized(value)
        elif variant is Variant.ORIGINAL_GUARDED:
            i = self._deposit_guarded(value)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        self.last_write_index = i
        self.max_write_index = max(self.max_write_index, i)
        self.count += 1
        if self.audit_values is not None:
            self.audit_values.append(value)

    def _deposit_optimized(self, value: NodeValue) -> int:
        size = self.count
        i = 0
        while size % 2 == 1:
            value = self.combiner.combine(self.branch[i], value)
            size //= 2
            i += 1
        self.branch[i] = value
        return i

    def _deposit_guarded(self, value: NodeValue) -> int:
        size = self.count
        level = 0
        while level < self.height:
            if size % 2 == 0:
                self.branch[level] = value
                self.guard_exits += 1
                return level
            value = self.combiner.combine(self.branch[level], value)
            size //= 2
            level += 1
        self.unreachable_hit = True
        raise UnreachableCodeError(
            f"deposit loop exhausted all {self.height} levels at count {self.count}"
        )

    def get_deposit_root(self) -> NodeValue:
        r = self.combiner.default_leaf
        size = self.count
        for level in range(self.height):
            if size % 2 == 1:
                r = self.combiner.combine(self.branch[level], r)
            else:
                r = self.combiner.combine(r, self.zero_hashes[level])
            size //= 2
        return r


def new_contract(
    height: int,
    combiner: Combiner,
    audit: bool = False,
    rng: Optional[random.Random] = None,
) -> DepositContract:
    """Fresh contract; with ``rng`` the branch starts with random garbage."""
    branch = None if rng is None else random_branch(height, combiner, rng)
    return DepositContract(height, combiner, audit=audit, branch=branch)
