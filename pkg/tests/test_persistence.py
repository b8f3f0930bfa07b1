import hashlib
import random

import pytest

from incmerkle.combiners import digest_combiner, toy_combiner
from incmerkle.contract import DepositContract, new_contract
from incmerkle.persistence import (
    StateFileError,
    dumps,
    format_value,
    load_state,
    loads,
    parse_value,
    save_state,
)

from conftest import WORKED_VALUES


def _worked_contract(audit=False):
    c = new_contract(3, toy_combiner(), audit=audit)
    for v in WORKED_VALUES:
        c.deposit(v)
    return c


def test_dump_layout():
    text = dumps(_worked_contract(audit=True))
    lines = text.split("\n")
    assert lines[:9] == [
        "version: incmerkle-state/1",
        "combiner_id: toy",
        "height: 3",
        "count: 5",
        "branch[0]: 4",
        "branch[1]: -4",
        "branch[2]: -8",
        "audit: 5",
        "audit[0]: 3",
    ]
    assert lines[-2].startswith("checksum: ")
    assert lines[-1] == ""
    assert "\r" not in text


def test_roundtrip_worked(tmp_path):
    path = tmp_path / "s.state"
    save_state(path, _worked_contract(audit=True))
    c = load_state(path)
    assert c.get_deposit_root() == -12
    assert c.audit_values == WORKED_VALUES
    assert c.zero_hashes == [0, -1, -1]


@pytest.mark.parametrize("cid", ["toy", "sha256"])
def test_roundtrip_random_traces(tmp_path, cid):
    rng = random.Random(cid)
    combiner = toy_combiner() if cid == "toy" else digest_combiner()
    for trial in range(50):
        h = rng.randint(1, 10)
        live = new_contract(h, combiner, audit=trial % 2 == 0, rng=rng)
        path = tmp_path / f"{trial}.state"
        n = rng.randint(0, min(20, live.remaining))
        for _ in range(n):
            live.deposit(rng.randbytes(32) if combiner.is_digest else rng.randint(-10**9, 10**9))
        save_state(path, live)
        loaded = load_state(path)
        assert dumps(loaded) == dumps(live)
        for _ in range(min(5, live.remaining)):
            v = rng.randbytes(32) if combiner.is_digest else rng.randint(-10**9, 10**9)
            live.deposit(v)
            loaded.deposit(v)
            assert loaded.get_deposit_root() == live.get_deposit_root()


def test_crash_between_write_and_rename_keeps_old_state(tmp_path):
    path = tmp_path / "s.state"
    old = _worked_contract()
    save_state(path, old)
    before = path.read_bytes()
    newer = load_state(path)
    newer.deposit(99)
    tmp = save_state(path, newer, rename=False)
    assert tmp.exists() and tmp != path
    assert path.read_bytes() == before
    assert load_state(path).get_deposit_root() == -12


def _corrupt(text, old, new):
    assert old in text
    return text.replace(old, new, 1)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: _corrupt(t, "branch[1]: -4", "branch[1]: -5"),
        lambda t: t[:-1],
        lambda t: t.replace("\n", "\r\n"),
        lambda t: "\n".join(t.split("\n")[:-2]) + "\n",
        lambda t: "",
    ],
    ids=["flipped-value", "no-final-newline", "crlf", "no-checksum", "empty"],
)
def test_corruption_detected(mutate):
    with pytest.raises(StateFileError):
        loads(mutate(dumps(_worked_contract())))


def _reseal(body):
    return body + f"checksum: {hashlib.sha256(body.encode()).hexdigest()}\n"


def _body():
    return dumps(_worked_contract()).rsplit("checksum: ", 1)[0]


@pytest.mark.parametrize(
    "old, new",
    [
        ("version: incmerkle-state/1", "version: incmerkle-state/9"),
        ("combiner_id: toy", "combiner_id: keccak"),
        ("height: 3", "height: 2"),
        ("height: 3", "height: 40"),
        ("count: 5", "count: 8"),
        ("branch[2]: -8", "branch[2]: x8"),
        ("branch[2]: -8\n", "branch[2]: -8\naudit: 2\naudit[0]: 1\n"),
        ("branch[2]: -8\n", ""),
    ],
)
def test_structural_errors(old, new):
    with pytest.raises(StateFileError):
        loads(_reseal(_corrupt(_body(), old, new)))


def test_branch_length_must_match_height():
    text = _reseal(_body() + "branch[3]: 1\n")
    with pytest.raises(StateFileError):
        loads(text)


@pytest.mark.parametrize("text, value", [("12", 12), ("-7", -7), (" 0 ", 0), ("-0", 0)])
def test_parse_toy(text, value):
    assert parse_value(text, toy_combiner()) == value


@pytest.mark.parametrize("text", ["", "-", "1.5", "+3", "0x10", "٣", "1e3"])
def test_parse_toy_rejects(text):
    with pytest.raises(ValueError):
        parse_value(text, toy_combiner())


def test_digest_hex_case_insensitive_in_lowercase_out():
    d = digest_combiner()
    raw = "AB" * 32
    v = parse_value(raw, d)
    assert v == bytes([0xAB]) * 32
    assert format_value(v) == "ab" * 32


@pytest.mark.parametrize("text", ["ab" * 31, "ab" * 33, "zz" * 32, "ab " * 21 + "a"])
def test_digest_rejects(text):
    with pytest.raises(ValueError):
        parse_value(text, digest_combiner())


def test_arbitrary_branch_is_preserved(tmp_path):
    c = DepositContract(4, toy_combiner(), branch=[9, -9, 99, -99])
    save_state(tmp_path / "s", c)
    assert load_state(tmp_path / "s").branch == [9, -9, 99, -99]
