"""Incremental Merkle tree accumulator in the style of the Eth2 deposit contract."""
from .bitpaths import bits_to_nat, nat_to_bits, next_path
from .combiners import Combiner, CountingCombiner, digest_combiner, toy_combiner
from .contract import (
    DepositContract,
    TreeFullError,
    UnreachableCodeError,
    Variant,
    new_contract,
)
from .core import (
    SiblingVectors,
    build_zero_hashes,
    compute_root_up,
    compute_root_up_indexed,
    insert_value,
    insert_value_indexed,
)
from .oracle import build_merkle, node_at, sibling_at, siblings_of_path

__version__ = "0.1.0"

__all__ = [
    "Combiner",
    "CountingCombiner",
    "DepositContract",
    "SiblingVectors",
    "TreeFullError",
    "UnreachableCodeError",
    "Variant",
    "bits_to_nat",
    "build_merkle",
    "build_zero_hashes",
    "compute_root_up",
    "compute_root_up_indexed",
    "digest_combiner",
    "insert_value",
    "insert_value_indexed",
    "nat_to_bits",
    "new_contract",
    "next_path",
    "node_at",
    "sibling_at",
    "siblings_of_path",
    "toy_combiner",
]
