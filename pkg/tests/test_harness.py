import pytest

from incmerkle import harness
from incmerkle.contract import Variant
from incmerkle.harness import (
    HarnessConfig,
    TraceSpec,
    check_trace,
    run_property,
    shrink,
)


def test_unknown_property():
    with pytest.raises(KeyError):
        run_property("no_such_property")


def test_unknown_mutant():
    with pytest.raises(ValueError):
        run_property("worked_example", HarnessConfig(mutant="bogus"))


def test_cases_run_counting_contract():
    v = run_property("oracle_root_agreement", HarnessConfig(max_height=4, num_random_cases=3))
    assert v.passed
    assert v.cases_run == sum(2**h for h in range(1, 5)) * 3


def test_worked_example_registered_and_passing():
    v = run_property("worked_example")
    assert v.passed and v.cases_run == 3


def test_all_golden_examples_pass():
    v = run_property("golden_examples")
    assert v.passed, [f.to_record() for f in v.failures]
    assert v.cases_run >= 15


@pytest.mark.parametrize("name", sorted(harness.PROPERTIES))
def test_every_property_passes_small(name):
    v = run_property(name, HarnessConfig(max_height=3, num_random_cases=2, deep_traces=20))
    assert v.passed, [f.to_record() for f in v.failures[:3]]
    assert v.cases_run > 0


def test_reproducible():
    cfg = HarnessConfig(max_height=3, num_random_cases=4, rng_seed=99, deep_traces=30)
    for name in ("oracle_root_agreement", "irrelevance", "loop_guard"):
        assert run_property(name, cfg).to_json() == run_property(name, cfg).to_json()
    bad = HarnessConfig(max_height=3, num_random_cases=2, rng_seed=5, mutant="drop-decrement")
    assert run_property("oracle_root_agreement", bad).to_json() == run_property(
        "oracle_root_agreement", bad
    ).to_json()


def test_seed_changes_draws():
    a = run_property("oracle_root_agreement", HarnessConfig(max_height=2, num_random_cases=2, rng_seed=1, mutant="drop-decrement"))
    b = run_property("oracle_root_agreement", HarnessConfig(max_height=2, num_random_cases=2, rng_seed=2, mutant="drop-decrement"))
    assert a.to_json() != b.to_json()


def test_mutated_combiner_is_detected():
    v = run_property(
        "oracle_root_agreement", HarnessConfig(max_height=5, num_random_cases=2, mutant="drop-decrement")
    )
    assert not v.passed
    f = v.failures[0]
    assert f.trace is not None and f.expected != f.actual
    rec = v.to_record()
    assert rec["failure_count"] == len(v.failures)
    assert rec["failures"][0]["trace"]["combiner"] == "toy"


def test_mutants_caught_by_functional_properties():
    for name in ("path_root_agreement", "sibling_update_agreement", "golden_examples"):
        assert not run_property(name, HarnessConfig(max_height=3, num_random_cases=2, mutant="drop-decrement")).passed


def test_shrink_mutant_to_tiny_trace():
    v = run_property(
        "oracle_root_agreement", HarnessConfig(max_height=5, num_random_cases=1, mutant="drop-decrement")
    )
    worst = max(v.failures, key=lambda f: (f.trace.height, len(f.trace.values)))
    assert worst.trace.height == 5
    small = shrink(worst)
    assert small.height <= worst.trace.height
    assert len(small.values) <= len(worst.trace.values)
    assert len(small.values) <= 2
    assert check_trace(small, "drop-decrement") is not None


def test_shrink_swap_operands():
    trace = TraceSpec(5, list(range(1, 20)))
    f = check_trace(trace, "swap-operands")
    assert f is not None
    small = shrink(f)
    assert small.height == 1
    assert len(small.values) == 1
    assert check_trace(small) is None
    assert check_trace(small, "swap-operands") is not None


def test_shrink_requires_failure():
    trace = TraceSpec(3, [1, 2, 3])
    assert check_trace(trace) is None
    with pytest.raises(ValueError):
        shrink(harness.Failure("x", 0, 1, 1, trace=trace))
    with pytest.raises(ValueError):
        shrink(harness.Failure("x", 0, 1, 2, trace=None))


def test_trace_spec_invariant():
    with pytest.raises(ValueError):
        TraceSpec(2, [1, 2, 3, 4])


def test_check_trace_variants_and_branch_seed():
    for variant in Variant:
        assert check_trace(TraceSpec(4, range(15), branch_seed=3, variant=variant)) is None
    assert check_trace(TraceSpec(2, [bytes(32), bytes([1]) * 32], "sha256")) is None


def test_run_all():
    verdicts = harness.run_all(
        HarnessConfig(max_height=2, num_random_cases=1, deep_traces=5),
        names=["worked_example", "bitpath_laws"],
    )
    assert [v.property_name for v in verdicts] == ["worked_example", "bitpath_laws"]
    assert all(v.passed for v in verdicts)
