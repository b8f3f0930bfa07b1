"""Differential property runner.

Each registered property drives the full-tree oracle, the functional
algorithms and the deposit contract side by side and reports a
:class:`Verdict`. Runs are deterministic for a given ``rng_seed``.

A *mutant* swaps the combiner used by the code under test (never the one
used by the oracle) so the suite can be shown to catch real defects.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .bitpaths import bits_to_nat, flip_last, nat_to_bits, next_path, trailing_ones
from .combiners import (
    DIGEST,
    TOY,
    Combiner,
    CountingCombiner,
    NodeValue,
    combiner_by_id,
    digest_combiner,
)
from .contract import DepositContract, TreeFullError, UnreachableCodeError, Variant, random_branch
from .core import (
    SiblingVectors,
    build_zero_hashes,
    compute_root_up,
    compute_root_up_indexed,
    insert_value,
    insert_value_indexed,
)
from .oracle import (
    build_merkle,
    is_complete,
    is_decorated_with,
    leaves,
    node_at,
    pad_values,
    sibling_at,
    siblings_of_path,
)

TOY_VALUE_RANGE = 10**6
SHA256_OF_64_ZERO_BYTES = bytes.fromhex(
    "f5a5fd42d16a20302798ef6ed309979b43003d2320d9f0e8ea9831a92759fb4b"
)
DEEP_HEIGHT = 32
INDEX_EQUIV_MAX_HEIGHT = 6
IRRELEVANCE_MAX_HEIGHT = 8
ZERO_TABLE_MAX_LEVEL = 8
BRANCH_INIT_HEIGHTS = (3, 8, 32)
BENCH_HEIGHT = 16
MAX_REPORTED_FAILURES = 20


# -- mutants ---------------------------------------------------------------

def _drop_decrement(c: Combiner) -> Combiner:
    if c.is_digest:
        raise ValueError("drop-decrement mutant only applies to the toy combiner")
    return Combiner(c.name, lambda x, y: x - y, c.default_leaf)


def _swap_operands(c: Combiner) -> Combiner:
    inner = c.combine
    return Combiner(c.name, lambda x, y: inner(y, x), c.default_leaf)


MUTANTS: Dict[str, Callable[[Combiner], Combiner]] = {
    "drop-decrement": _drop_decrement,
    "swap-operands": _swap_operands,
}


# -- records ---------------------------------------------------------------

@dataclass(frozen=True)
class TraceSpec:
    height: int
    values: Tuple[NodeValue, ...]
    combiner_id: str = TOY
    branch_seed: Optional[int] = None  # None: zero-filled branch
    variant: Variant = Variant.OPTIMIZED

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) >= 1 << self.height:
            raise ValueError("a trace must leave the last leaf free")

    def to_record(self) -> Dict[str, Any]:
        return {
            "height": self.height,
            "values": [_show(v) for v in self.values],
            "combiner": self.combiner_id,
            "branch_init": "zeros" if self.branch_seed is None else f"random({self.branch_seed})",
            "variant": self.variant.value,
        }


@dataclass
class Failure:
    property_name: str
    step: int
    expected: Any
    actual: Any
    trace: Optional[TraceSpec] = None
    mutant: Optional[str] = None
    detail: str = ""

    def to_record(self) -> Dict[str, Any]:
        rec: Dict[str, Any] = {
            "step": self.step,
            "expected": _show(self.expected),
            "actual": _show(self.actual),
        }
        if self.trace is not None:
            rec["trace"] = self.trace.to_record()
        if self.detail:
            rec["detail"] = self.detail
        return rec


@dataclass
class Verdict:
    property_name: str
    cases_run: int = 0
    failures: List[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_record(self) -> Dict[str, Any]:
        return {
            "property": self.property_name,
            "passed": self.passed,
            "cases_run": self.cases_run,
            "failure_count": len(self.failures),
            "failures": [f.to_record() for f in self.failures[:MAX_REPORTED_FAILURES]],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True)


@dataclass(frozen=True)
class HarnessConfig:
    """Knobs for a property run.

    ``num_random_cases`` is the number of value draws per enumerated
    (height, length) cell in sweep properties; ``deep_traces`` is the number
    of random cases for properties that are sampled rather than swept.
    """

    max_height: int = 5
    num_random_cases: int = 20
    rng_seed: int = 0
    deep_traces: int = 1000
    mutant: Optional[str] = None


def _show(v: Any) -> Any:
    if isinstance(v, bytes):
        return v.hex()
    if isinstance(v, (list, tuple)):
        return [_show(x) for x in v]
    return v


# -- helpers ---------------------------------------------------------------

class _Run:
    """Per-property context: rng, combiners, and a verdict being filled in."""

    def __init__(self, name: str, config: HarnessConfig) -> None:
        self.name = name
        self.config = config
        self.rng = random.Random(f"{name}:{config.rng_seed}")
        self.verdict = Verdict(name)

    def combiners(self, combiner_id: str = TOY) -> Tuple[Combiner, Combiner]:
        """(reference, under-test) combiners."""
        ref = combiner_by_id(combiner_id)
        return ref, sut_combiner(combiner_id, self.config.mutant)

    def value(self, combiner: Combiner) -> NodeValue:
        return random_value(self.rng, combiner)

    def case(self) -> None:
        self.verdict.cases_run += 1

    def fail(self, step: int, expected: Any, actual: Any, trace=None, detail="") -> None:
        self.verdict.failures.append(
            Failure(self.name, step, expected, actual, trace, self.config.mutant, detail)
        )

    def check(self, ok: bool, step: int, expected: Any, actual: Any, trace=None, detail="") -> bool:
        if not ok:
            self.fail(step, expected, actual, trace, detail)
        return ok

    def expect(self, expected: Any, actual: Any, step: int = 0, trace=None, detail="") -> bool:
        return self.check(expected == actual, step, expected, actual, trace, detail)


def sut_combiner(combiner_id: str, mutant: Optional[str]) -> Combiner:
    c = combiner_by_id(combiner_id)
    if mutant is None:
        return c
    if mutant not in MUTANTS:
        raise ValueError(f"unknown mutant {mutant!r}; known: {sorted(MUTANTS)}")
    return MUTANTS[mutant](c)


def random_value(rng: random.Random, combiner: Combiner) -> NodeValue:
    if combiner.is_digest:
        return rng.randbytes(32)
    return rng.randint(-TOY_VALUE_RANGE, TOY_VALUE_RANGE)


def _make_contract(trace: TraceSpec, combiner: Combiner, audit: bool = False) -> DepositContract:
    branch = None
    if trace.branch_seed is not None:
        branch = random_branch(trace.height, combiner, random.Random(trace.branch_seed))
    return DepositContract(trace.height, combiner, audit=audit, branch=branch)


def check_trace(trace: TraceSpec, mutant: Optional[str] = None) -> Optional[Failure]:
    """Replay ``trace`` on a contract and compare every root with the oracle.

    Returns the first mismatch, or ``None`` when the whole trace agrees.
    Step ``n`` is the root after ``n`` deposits.
    """
    ref = combiner_by_id(trace.combiner_id)
    sut = sut_combiner(trace.combiner_id, mutant)
    contract = _make_contract(trace, sut)
    name = "oracle_root_agreement"
    for step in range(len(trace.values) + 1):
        if step:
            try:
                contract.deposit(trace.values[step - 1], trace.variant)
            except (TreeFullError, UnreachableCodeError) as exc:
                return Failure(name, step, None, repr(exc), trace, mutant, "deposit raised")
        expected = build_merkle(trace.values[:step], trace.height, ref).value
        actual = contract.get_deposit_root()
        if expected != actual:
            return Failure(name, step, expected, actual, trace, mutant)
    return None


def _sweep(run: _Run, max_height: int, *, full: bool = True):
    """Yield (h, n, draw) over h in 1..max_height and n in 0..2^h-1."""
    for h in range(1, max_height + 1):
        for n in range(1 << h if full else (1 << h) - 1):
            for d in range(run.config.num_random_cases):
                yield h, n, d


# -- properties ------------------------------------------------------------

PropertyFn = Callable[[_Run], None]
PROPERTIES: Dict[str, PropertyFn] = {}
TRACE_PROPERTIES = {"oracle_root_agreement", "worked_example"}


def register(name: str) -> Callable[[PropertyFn], PropertyFn]:
    def deco(fn: PropertyFn) -> PropertyFn:
        PROPERTIES[name] = fn
        return fn

    return deco


WORKED_VALUES = (3, 6, 2, -2, 4)


@register("worked_example")
def _worked_example(run: _Run) -> None:
    trace = TraceSpec(3, WORKED_VALUES)
    run.case()
    failure = check_trace(trace, run.config.mutant)
    if failure is not None:
        failure.property_name = run.name
        run.verdict.failures.append(failure)
        return
    _, sut = run.combiners()
    c = _make_contract(trace, sut)
    for v in WORKED_VALUES:
        c.deposit(v)
    run.case()
    run.expect(-12, c.get_deposit_root(), step=5, trace=trace, detail="final root")
    run.case()
    run.expect([4, -4, -8], c.branch, step=5, trace=trace, detail="final branch")


@register("golden_examples")
def _golden_examples(run: _Run) -> None:
    ref, sut = run.combiners()
    tree = build_merkle(list(WORKED_VALUES), 3, ref)
    i0, i1 = run.rng.randint(-99, 99), run.rng.randint(-99, 99)
    cases: List[Tuple[str, Any, Callable[[], Any]]] = [
        ("combine(3,6)", -4, lambda: sut.combine(3, 6)),
        ("combine(0,0)", -1, lambda: sut.combine(0, 0)),
        ("combine(-8,3)", -12, lambda: sut.combine(-8, 3)),
        ("oracle root", -12, lambda: tree.value),
        ("node_at [0]", -8, lambda: node_at(tree, [0])),
        ("node_at [1,0,0]", 4, lambda: node_at(tree, [1, 0, 0])),
        ("sibling_at [1]", -8, lambda: sibling_at(tree, [1])),
        ("sibling_at [1,0]", -1, lambda: sibling_at(tree, [1, 0])),
        ("sibling_at [1,0,0]", 0, lambda: sibling_at(tree, [1, 0, 0])),
        ("next_path [1,0,0]", (1, 0, 1), lambda: next_path([1, 0, 0])),
        ("nat_to_bits(4,3)", (1, 0, 0), lambda: nat_to_bits(4, 3)),
        ("zero hashes h=3", [0, -1], lambda: build_zero_hashes(3, sut)[:2]),
        (
            "compute_root_up pi1",
            -12,
            lambda: compute_root_up(
                [1, 0, 0], SiblingVectors((-8, i1, i0), (-1, -1, 0)), 4, sut
            ),
        ),
        (
            "compute_root_up pi2 default seed",
            -12,
            lambda: compute_root_up(
                [1, 0, 1], SiblingVectors((-8, i1, 4), (-1, -1, 0)), 0, sut
            ),
        ),
        (
            "compute_root_up_indexed k=4",
            -12,
            lambda: compute_root_up_indexed(
                3, 4, SiblingVectors((-8, i1, i0), (-1, -1, 0)), 4, sut
            ),
        ),
        (
            "insert_value pi1",
            [-8, i1, 4],
            lambda: insert_value([1, 0, 0], SiblingVectors((-8, i1, i0), (-1, -1, 0)), 4, sut),
        ),
        (
            "insert_value_indexed k=4",
            [-8, i1, 4],
            lambda: insert_value_indexed(
                3, 4, SiblingVectors((-8, i1, i0), (-1, -1, 0)), 4, sut
            ),
        ),
        (
            "siblings of pi2 (left)",
            (-8, 0, 4),
            lambda: siblings_of_path(tree, [1, 0, 1]).left,
        ),
    ]
    for step, (label, expected, thunk) in enumerate(cases):
        run.case()
        run.expect(expected, thunk(), step=step, detail=label)


@register("oracle_tree_invariants")
def _oracle_tree_invariants(run: _Run) -> None:
    ref, _ = run.combiners()
    for h in range(0, min(run.config.max_height, 5) + 1):
        for n in range((1 << h) + 1):
            run.case()
            values = [run.value(ref) for _ in range(n)]
            tree = build_merkle(values, h, ref)
            run.check(is_complete(tree), n, True, False, detail=f"incomplete tree h={h}")
            run.check(is_decorated_with(ref, tree), n, True, False, detail=f"bad decoration h={h}")
            padded = pad_values(values, h, ref.default_leaf)
            run.expect(padded, [leaf.value for leaf in leaves(tree)], n, detail=f"leaves h={h}")
            run.expect(list(range(1 << h)), [leaf.index for leaf in leaves(tree)], n, detail="leaf indices")
            for k in range(1 << h):
                p = nat_to_bits(k, h)
                run.expect(padded[k], node_at(tree, p), n, detail=f"node_at h={h} k={k}")
                for d in range(1, h + 1):
                    run.expect(
                        node_at(tree, flip_last(p[:d])), sibling_at(tree, p[:d]), n,
                        detail=f"sibling_at h={h} k={k} depth={d}",
                    )


@register("bitpath_laws")
def _bitpath_laws(run: _Run) -> None:
    for h in range(0, 13):
        for k in range(1 << h):
            run.case()
            p = nat_to_bits(k, h)
            run.expect(k, bits_to_nat(p), k, detail=f"roundtrip h={h}")
            if k < (1 << h) - 1:
                q = next_path(p)
                run.expect(k + 1, bits_to_nat(q), k, detail=f"successor h={h}")
                t = trailing_ones(k)
                run.expect(p[: h - t - 1], q[: h - t - 1], k, detail="shared prefix")
                run.expect((0,) + (1,) * t, p[h - t - 1 :], k, detail="0.1^k suffix")
                run.expect((1,) + (0,) * t, q[h - t - 1 :], k, detail="1.0^k suffix")


@register("oracle_root_agreement")
def _oracle_root_agreement(run: _Run) -> None:
    ref, _ = run.combiners()
    for h, n, _d in _sweep(run, run.config.max_height):
        run.case()
        trace = TraceSpec(h, [run.value(ref) for _ in range(n)])
        failure = check_trace(trace, run.config.mutant)
        if failure is not None:
            failure.property_name = run.name
            run.verdict.failures.append(failure)


def _leaf_setup(run: _Run, ref: Combiner, h: int, k: int):
    """Random list with ``k + 1`` values, its tree, the path to leaf ``k`` and its siblings."""
    values = [run.value(ref) for _ in range(k + 1)]
    tree = build_merkle(values, h, ref)
    p = nat_to_bits(k, h)
    return values, tree, p, siblings_of_path(tree, p, filler=run.value(ref))


@register("path_root_agreement")
def _path_root_agreement(run: _Run) -> None:
    ref, sut = run.combiners()
    for h, k, _d in _sweep(run, run.config.max_height):
        run.case()
        values, tree, p, sib = _leaf_setup(run, ref, h, k)
        run.expect(tree.value, compute_root_up(p, sib, values[k], sut), k, detail=f"bit-path h={h}")
        run.expect(
            tree.value, compute_root_up_indexed(h, k, sib, values[k], sut), k,
            detail=f"indexed h={h}",
        )
        # leaf k left at its default: root from the default seed
        short = build_merkle(values[:k], h, ref)
        sib0 = siblings_of_path(short, p, filler=run.value(ref))
        run.expect(
            short.value, compute_root_up(p, sib0, ref.default_leaf, sut), k,
            detail=f"default seed h={h}",
        )


@register("sibling_update_agreement")
def _sibling_update_agreement(run: _Run) -> None:
    ref, sut = run.combiners()
    for h, k, _d in _sweep(run, run.config.max_height, full=False):
        run.case()
        values, tree, p, sib = _leaf_setup(run, ref, h, k)
        got = insert_value(p, sib, values[k], sut)
        got_indexed = insert_value_indexed(h, k, sib, values[k], sut)
        succ = next_path(p)
        for i, bit in enumerate(succ):
            if bit == 1:
                want = sibling_at(tree, succ[: i + 1])
                run.expect(want, got[i], k, detail=f"insert_value h={h} depth={i}")
                run.expect(want, got_indexed[i], k, detail=f"insert_value_indexed h={h} depth={i}")


@register("index_equivalence")
def _index_equivalence(run: _Run) -> None:
    ref, sut = run.combiners()
    for h in range(0, INDEX_EQUIV_MAX_HEIGHT + 1):
        for k in range(1 << h):
            for _ in range(run.config.num_random_cases):
                run.case()
                sib = SiblingVectors(
                    [run.value(ref) for _ in range(h)], [run.value(ref) for _ in range(h)]
                )
                seed = run.value(ref)
                p = nat_to_bits(k, h)
                run.expect(
                    compute_root_up(p, sib, seed, sut),
                    compute_root_up_indexed(h, k, sib, seed, sut),
                    k, detail=f"root h={h}",
                )
                if h >= 1 and k < (1 << h) - 1:
                    run.expect(
                        insert_value(p, sib, seed, sut),
                        insert_value_indexed(h, k, sib, seed, sut),
                        k, detail=f"insert h={h}",
                    )


@register("irrelevance")
def _irrelevance(run: _Run) -> None:
    ref, sut = run.combiners()
    for h in range(1, IRRELEVANCE_MAX_HEIGHT + 1):
        for _ in range(run.config.deep_traces):
            run.case()
            p = nat_to_bits(run.rng.randrange(1 << h), h)
            left = [run.value(ref) for _ in range(h)]
            right = [run.value(ref) for _ in range(h)]
            seed = run.value(ref)
            base = compute_root_up(p, SiblingVectors(left, right), seed, sut)
            left2 = [run.value(ref) if b == 0 else x for b, x in zip(p, left)]
            right2 = [run.value(ref) if b == 1 else x for b, x in zip(p, right)]
            run.expect(
                base, compute_root_up(p, SiblingVectors(left2, right2), seed, sut),
                h, detail=f"perturbed unused slots h={h} p={p}",
            )


@register("branch_init_irrelevance")
def _branch_init_irrelevance(run: _Run) -> None:
    ref, sut = run.combiners()
    for h in BRANCH_INIT_HEIGHTS:
        for _ in range(run.config.deep_traces):
            run.case()
            n = run.rng.randint(0, min((1 << h) - 1, 64))
            values = [run.value(ref) for _ in range(n)]
            zeroed = DepositContract(h, sut)
            garbage = DepositContract(h, sut, branch=random_branch(h, sut, run.rng))
            trace = TraceSpec(h, values)
            for step in range(n + 1):
                if step:
                    zeroed.deposit(values[step - 1])
                    garbage.deposit(values[step - 1])
                a, b = zeroed.get_deposit_root(), garbage.get_deposit_root()
                if not run.expect(a, b, step, trace=trace, detail=f"h={h}"):
                    break


def _compare_variants(run: _Run, opt, orig, v, step, trace, where=""):
    orig.deposit(v, Variant.ORIGINAL_GUARDED)
    opt.deposit(v, Variant.OPTIMIZED)
    ok = run.expect(opt.count, orig.count, step, trace=trace, detail=f"count{where}")
    ok &= run.expect(opt.branch, orig.branch, step, trace=trace, detail=f"branch{where}")
    ok &= run.expect(
        opt.get_deposit_root(), orig.get_deposit_root(), step, trace=trace, detail=f"root{where}"
    )
    ok &= run.check(
        opt.last_write_index < opt.height, step, f"< {opt.height}", opt.last_write_index,
        trace=trace, detail=f"write index out of range{where}",
    )
    return ok


def _guard_checks(run: _Run, orig: DepositContract, deposits: int, trace, where="") -> None:
    run.check(
        not orig.unreachable_hit, deposits, False, True, trace=trace,
        detail=f"unreachable marker hit{where}",
    )
    run.expect(deposits, orig.guard_exits, deposits, trace=trace, detail=f"exits via early return{where}")
    run.check(
        orig.max_write_index < orig.height, deposits, f"< {orig.height}", orig.max_write_index,
        trace=trace, detail=f"write index out of range{where}",
    )


@register("loop_guard")
def _loop_guard(run: _Run) -> None:
    ref, sut = run.combiners()
    for h, n, _d in _sweep(run, run.config.max_height):
        run.case()
        values = [run.value(ref) for _ in range(n)]
        trace = TraceSpec(h, values, variant=Variant.ORIGINAL_GUARDED)
        opt, orig = DepositContract(h, sut), DepositContract(h, sut)
        for step, v in enumerate(values, 1):
            try:
                if not _compare_variants(run, opt, orig, v, step, trace):
                    break
            except UnreachableCodeError as exc:
                run.fail(step, "early return", repr(exc), trace=trace, detail="unreachable")
                break
        _guard_checks(run, orig, orig.count, trace)
    # deep trees: resume from counts with long runs of trailing ones
    h = DEEP_HEIGHT
    for _ in range(run.config.deep_traces):
        run.case()
        ones = run.rng.randint(0, h - 1)
        prefix = run.rng.randrange(1 << (h - ones - 1))
        start = (prefix << (ones + 1)) | ((1 << ones) - 1)
        branch = random_branch(h, sut, run.rng)
        opt = DepositContract.from_snapshot(h, sut, start, branch)
        orig = DepositContract.from_snapshot(h, sut, start, branch)
        n = min(run.rng.randint(1, 8), opt.remaining)
        values = [run.value(ref) for _ in range(n)]
        # not replayable from a fresh contract; the start count goes in the detail
        trace = TraceSpec(h, values, variant=Variant.ORIGINAL_GUARDED)
        where = f" (resumed at count {start})"
        for step, v in enumerate(values, 1):
            try:
                if not _compare_variants(run, opt, orig, v, step, trace, where):
                    break
            except UnreachableCodeError as exc:
                run.fail(step, "early return", repr(exc), trace=trace, detail=f"unreachable{where}")
                break
        _guard_checks(run, orig, orig.count - start, trace, where)


@register("functional_imperative_agreement")
def _functional_imperative_agreement(run: _Run) -> None:
    ref, sut = run.combiners()
    for h in range(1, run.config.max_height + 1):
        for _ in range(run.config.num_random_cases):
            run.case()
            c = DepositContract(h, sut, branch=random_branch(h, sut, run.rng))
            zeros_td = list(reversed(c.zero_hashes))
            for step in range((1 << h) - 1):
                v = run.value(ref)
                sib = SiblingVectors(list(reversed(c.branch)), zeros_td)
                run.expect(
                    compute_root_up_indexed(h, c.count, sib, sut.default_leaf, sut),
                    c.get_deposit_root(), step, detail=f"root vs indexed h={h}",
                )
                expected = insert_value_indexed(h, c.count, sib, v, sut)
                succ = next_path(nat_to_bits(c.count, h))
                c.deposit(v)
                got = list(reversed(c.branch))
                for i, bit in enumerate(succ):
                    if bit == 1:
                        run.expect(expected[i], got[i], step, detail=f"branch h={h} depth={i}")


@register("sibling_invariant")
def _sibling_invariant(run: _Run) -> None:
    """In audit mode, branch and zero_hashes are the siblings of the next free leaf."""
    ref, sut = run.combiners()
    for h in range(1, run.config.max_height + 1):
        for _ in range(run.config.num_random_cases):
            run.case()
            c = DepositContract(h, sut, audit=True, branch=random_branch(h, sut, run.rng))
            for step in range(1 << h):
                if step:
                    c.deposit(run.value(ref))
                tree = build_merkle(c.audit_values, h, ref)
                p = nat_to_bits(c.count, h)
                for depth, bit in enumerate(p):
                    level = h - 1 - depth
                    want = sibling_at(tree, p[: depth + 1])
                    got = c.branch[level] if bit == 1 else c.zero_hashes[level]
                    run.expect(want, got, step, detail=f"h={h} level={level} bit={bit}")
                run.expect(tree.value, c.get_deposit_root(), step, detail=f"root h={h}")


@register("zero_table_soundness")
def _zero_table_soundness(run: _Run) -> None:
    for cid in (TOY, DIGEST):
        ref, sut = combiner_by_id(cid), sut_combiner(cid, _digest_safe(run.config.mutant, cid))
        table = build_zero_hashes(ZERO_TABLE_MAX_LEVEL + 1, sut)
        run.case()
        run.expect(ref.default_leaf, table[0], 0, detail=f"{cid} level 0")
        for level in range(1, ZERO_TABLE_MAX_LEVEL + 1):
            run.case()
            run.expect(
                sut.combine(table[level - 1], table[level - 1]), table[level], level,
                detail=f"{cid} recurrence",
            )
            run.expect(build_merkle([], level, ref).value, table[level], level, detail=f"{cid} vs oracle")
    run.case()
    table = build_zero_hashes(2, sut_combiner(DIGEST, _digest_safe(run.config.mutant, DIGEST)))
    run.expect(SHA256_OF_64_ZERO_BYTES, table[1], 1, detail="sha256 golden constant")


def _digest_safe(mutant: Optional[str], cid: str) -> Optional[str]:
    if mutant == "drop-decrement" and cid == DIGEST:
        return None
    return mutant


@register("digest_root_agreement")
def _digest_root_agreement(run: _Run) -> None:
    mutant = _digest_safe(run.config.mutant, DIGEST)
    ref = digest_combiner()
    for h in range(1, min(run.config.max_height, 4) + 1):
        for n in range(1 << h):
            run.case()
            trace = TraceSpec(h, [run.value(ref) for _ in range(n)], DIGEST)
            failure = check_trace(trace, mutant)
            if failure is not None:
                failure.property_name = run.name
                run.verdict.failures.append(failure)


@register("call_counts")
def _call_counts(run: _Run) -> None:
    ref, sut = run.combiners()
    h = BENCH_HEIGHT
    counting_ref = CountingCombiner(ref)
    build_merkle([run.value(ref) for _ in range(run.rng.randrange(1 << h))], h, counting_ref)
    run.case()
    run.expect((1 << h) - 1, counting_ref.calls, 0, detail="oracle rebuild calls")
    counting = CountingCombiner(sut)
    starts = [0, 1, 2, 3, 7, (1 << 15) - 1, (1 << h) - 2]
    starts += [run.rng.randrange((1 << h) - 1) for _ in range(run.config.num_random_cases)]
    for start in starts:
        run.case()
        c = DepositContract.from_snapshot(h, counting, start, random_branch(h, sut, run.rng))
        counting.reset()
        c.deposit(run.value(ref))
        calls = counting.reset()
        run.expect(trailing_ones(start), calls, start, detail="deposit calls")
        run.check(calls <= h, start, f"<= {h}", calls, detail="deposit calls bound")
        c.get_deposit_root()
        run.expect(h, counting.reset(), start, detail="root calls")


def run_property(name: str, config: Optional[HarnessConfig] = None) -> Verdict:
    if name not in PROPERTIES:
        raise KeyError(f"unknown property {name!r}; known: {sorted(PROPERTIES)}")
    config = config or HarnessConfig()
    if config.mutant is not None and config.mutant not in MUTANTS:
        raise ValueError(f"unknown mutant {config.mutant!r}")
    run = _Run(name, config)
    PROPERTIES[name](run)
    return run.verdict


def run_all(config: Optional[HarnessConfig] = None, names: Optional[Sequence[str]] = None) -> List[Verdict]:
    return [run_property(n, config) for n in (names or list(PROPERTIES))]


# -- shrinking ---------------------------------------------------------------

def _still_fails(trace: TraceSpec, mutant: Optional[str]) -> bool:
    return check_trace(trace, mutant) is not None


def _candidates(trace: TraceSpec):
    values = trace.values
    for h in range(1, trace.height):
        yield replace(trace, height=h, values=values[: (1 << h) - 1])
    n = len(values)
    if n:
        yield replace(trace, values=())
        yield replace(trace, values=values[: n // 2])
        yield replace(trace, values=values[n // 2 :])
        for i in range(n):
            yield replace(trace, values=values[:i] + values[i + 1 :])
    for i, v in enumerate(values):
        if isinstance(v, int) and v != 0:
            yield replace(trace, values=values[:i] + (v // 2 if v > 0 else -((-v) // 2),) + values[i + 1 :])


def _size(trace: TraceSpec) -> Tuple[int, int, int]:
    mag = sum(abs(v) for v in trace.values if isinstance(v, int))
    return trace.height, len(trace.values), mag


def shrink(failure: Failure) -> TraceSpec:
    """Greedily reduce a failing trace: lowest height first, then fewest values.

    Raises ``ValueError`` if the failure carries no trace or no longer fails.
    """
    if failure is None or failure.trace is None:
        raise ValueError("nothing to shrink: failure has no trace")
    trace, mutant = failure.trace, failure.mutant
    if not _still_fails(trace, mutant):
        raise ValueError("trace does not reproduce a failure")
    improved = True
    while improved:
        improved = False
        for cand in _candidates(trace):
            if _size(cand) < _size(trace) and _still_fails(cand, mutant):
                trace = cand
                improved = True
                break
    return trace
