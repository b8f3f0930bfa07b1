"""Text state file for a :class:`DepositContract`.

One ``key: value`` field per line, LF endings, fixed order::

    version: incmerkle-state/1
    combiner_id: toy
    height: 3
    count: 5
    branch[0]: 4
    branch[1]: -4
    branch[2]: -8
    audit: 5            (optional block: entry count, then audit[i] lines)
    audit[0]: 3
    ...
    checksum: <sha256 hex of every preceding byte>

Zero hashes are recomputed on load and never stored.
"""
from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

from .combiners import DIGEST_SIZE, Combiner, NodeValue, combiner_by_id
from .contract import MAX_HEIGHT, DepositContract

FORMAT_VERSION = "incmerkle-state/1"


class StateFileError(ValueError):
    """The state file is missing fields, has a bad checksum, or is otherwise corrupt."""


def parse_value(text: str, combiner: Combiner) -> NodeValue:
    """Decimal (optional leading minus) in toy mode, 64 hex chars in digest mode."""
    s = text.strip()
    if combiner.is_digest:
        if len(s) != 2 * DIGEST_SIZE:
            raise ValueError(f"expected {2 * DIGEST_SIZE} hex characters, got {len(s)}: {text!r}")
        try:
            value = bytes.fromhex(s)
        except ValueError:
            value = b""
        if len(value) != DIGEST_SIZE:
            raise ValueError(f"not a hex digest: {text!r}")
        return value
    body = s[1:] if s.startswith("-") else s
    if not body or not body.isascii() or not body.isdigit():
        raise ValueError(f"not a decimal integer: {text!r}")
    return int(s)


def format_value(value: NodeValue) -> str:
    if isinstance(value, bytes):
        return value.hex()
    return str(value)


def dumps(contract: DepositContract) -> str:
    lines = [
        f"version: {FORMAT_VERSION}",
        f"combiner_id: {contract.combiner.name}",
        f"height: {contract.height}",
        f"count: {contract.count}",
    ]
    lines += [f"branch[{i}]: {format_value(v)}" for i, v in enumerate(contract.branch)]
    if contract.audit_values is not None:
        lines.append(f"audit: {len(contract.audit_values)}")
        lines += [f"audit[{i}]: {format_value(v)}" for i, v in enumerate(contract.audit_values)]
    body = "".join(line + "\n" for line in lines)
    return body + f"checksum: {hashlib.sha256(body.encode('ascii')).hexdigest()}\n"


def _fields(body: str) -> Iterator[Tuple[str, str]]:
    for n, line in enumerate(body.split("\n")[:-1], 1):
        key, sep, value = line.partition(": ")
        if not sep:
            raise StateFileError(f"line {n}: expected 'key: value', got {line!r}")
        yield key, value


def _expect(it: Iterator[Tuple[str, str]], key: str) -> str:
    try:
        k, v = next(it)
    except StopIteration:
        raise StateFileError(f"missing field {key!r}") from None
    if k != key:
        raise StateFileError(f"expected field {key!r}, found {k!r}")
    return v


def _int_field(it, key: str) -> int:
    raw = _expect(it, key)
    if not raw.isascii() or not raw.isdigit():
        raise StateFileError(f"field {key!r} is not a natural number: {raw!r}")
    return int(raw)


def loads(text: str) -> DepositContract:
    if not text.endswith("\n"):
        raise StateFileError("state file is truncated")
    body, sep, last = text[:-1].rpartition("\n")
    if not sep or not last.startswith("checksum: "):
        raise StateFileError("missing checksum line")
    body += "\n"
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if last[len("checksum: "):] != digest:
        raise StateFileError("checksum mismatch")

    it = _fields(body)
    version = _expect(it, "version")
    if version != FORMAT_VERSION:
        raise StateFileError(f"unsupported state version {version!r}")
    try:
        combiner = combiner_by_id(_expect(it, "combiner_id"))
    except ValueError as exc:
        raise StateFileError(str(exc)) from None
    height = _int_field(it, "height")
    if not 1 <= height <= MAX_HEIGHT:
        raise StateFileError(f"height {height} out of range")
    count = _int_field(it, "count")
    try:
        branch = [parse_value(_expect(it, f"branch[{i}]"), combiner) for i in range(height)]
        audit: Optional[List[NodeValue]] = None
        rest = list(it)
        if rest:
            key, raw = rest[0]
            if key != "audit" or not raw.isdigit():
                raise StateFileError(f"unexpected field {key!r}")
            n = int(raw)
            if len(rest) != n + 1:
                raise StateFileError("audit block length mismatch")
            audit = []
            for i, (k, v) in enumerate(rest[1:]):
                if k != f"audit[{i}]":
                    raise StateFileError(f"expected field 'audit[{i}]', found {k!r}")
                audit.append(parse_value(v, combiner))
        return DepositContract.from_snapshot(height, combiner, count, branch, audit)
    except StateFileError:
        raise
    except ValueError as exc:
        raise StateFileError(str(exc)) from None


def load_state(path: Union[str, os.PathLike]) -> DepositContract:
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError:
        raise StateFileError("state file is not ASCII text") from None
    return loads(text)


def save_state(
    path: Union[str, os.PathLike], contract: DepositContract, *, rename: bool = True
) -> Path:
    """Write atomically: a temp file in the same directory, then ``os.replace``.

    With ``rename=False`` the temp file is left in place and its path is
    returned; the target is untouched (used to simulate a crash).
    """
    target = Path(path)
    data = dumps(contract).encode("ascii")
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent or ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        if not rename:
            return Path(tmp)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp) and rename:
            os.unlink(tmp)
        raise
    return target
