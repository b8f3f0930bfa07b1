"""Explicit full-tree Merkle construction.

This is the slow, obviously-correct reference: it materialises all
``2^(h+1) - 1`` nodes. Everything incremental is tested against it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from .bitpaths import flip_last, validate_path
from .combiners import Combiner, NodeValue

MAX_ORACLE_HEIGHT = 16


@dataclass(frozen=True)
class Leaf:
    value: NodeValue
    index: int

    @property
    def height(self) -> int:
        return 0


@dataclass(frozen=True)
class Node:
    value: NodeValue
    left: "MerkleTree"
    right: "MerkleTree"
    height: int


MerkleTree = Union[Leaf, Node]


@dataclass(frozen=True)
class SiblingVectors:
    """Top-down left/right sibling values along a path.

    At depth ``i`` only one of ``left[i]``/``right[i]`` is meaningful: the
    right one when the path goes left there, the left one otherwise.
    """

    left: Tuple[NodeValue, ...]
    right: Tuple[NodeValue, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        if len(self.left) != len(self.right):
            raise ValueError(
                f"sibling vectors differ in length: {len(self.left)} != {len(self.right)}"
            )

    def __len__(self) -> int:
        return len(self.left)


def pad_values(values: Sequence[NodeValue], height: int, default: NodeValue) -> List[NodeValue]:
    capacity = 1 << height
    if len(values) > capacity:
        raise ValueError(f"{len(values)} values do not fit in a tree of height {height}")
    return list(values) + [default] * (capacity - len(values))


def build_merkle(
    values: Sequence[NodeValue], height: int, combiner: Combiner
) -> MerkleTree:
    """Build the complete tree of ``height`` over ``values`` right-padded with defaults."""
    if height < 0:
        raise ValueError("height must be non-negative")
    if height > MAX_ORACLE_HEIGHT:
        raise ValueError(f"oracle is limited to height <= {MAX_ORACLE_HEIGHT}, got {height}")
    level: List[MerkleTree] = [
        Leaf(v, i) for i, v in enumerate(pad_values(values, height, combiner.default_leaf))
    ]
    for h in range(1, height + 1):
        level = [
            Node(combiner.combine(a.value, b.value), a, b, h)
            for a, b in zip(level[::2], level[1::2])
        ]
    return level[0]


def root_value(values: Sequence[NodeValue], height: int, combiner: Combiner) -> NodeValue:
    return build_merkle(values, height, combiner).value


def _descend(tree: MerkleTree, path: Sequence[int]) -> MerkleTree:
    bits = validate_path(path)
    if len(bits) > tree.height:
        raise ValueError(f"path of length {len(bits)} exceeds tree height {tree.height}")
    node = tree
    for b in bits:
        assert isinstance(node, Node)
        node = node.right if b else node.left
    return node


def node_at(tree: MerkleTree, path: Sequence[int]) -> NodeValue:
    return _descend(tree, path).value


def sibling_at(tree: MerkleTree, path: Sequence[int]) -> NodeValue:
    """Value of the node reached by ``path`` with its last bit flipped."""
    if not path:
        raise ValueError("the root has no sibling")
    return node_at(tree, flip_last(path))


def siblings_of_path(
    tree: MerkleTree, path: Sequence[int], filler: Optional[NodeValue] = None
) -> SiblingVectors:
    """Left and right sibling values for every prefix of a root-to-leaf path.

    Unused slots hold ``filler`` (the tree's default leaf is a sensible choice
    and is what callers get if they pass ``None``).
    """
    bits = validate_path(path)
    if len(bits) != tree.height:
        raise ValueError(f"path length {len(bits)} != tree height {tree.height}")
    if filler is None:
        filler = _leftmost_default(tree)
    left: List[NodeValue] = []
    right: List[NodeValue] = []
    node = tree
    for b in bits:
        assert isinstance(node, Node)
        if b == 0:
            left.append(filler)
            right.append(node.right.value)
            node = node.left
        else:
            left.append(node.left.value)
            right.append(filler)
            node = node.right
    return SiblingVectors(tuple(left), tuple(right))


def _leftmost_default(tree: MerkleTree) -> NodeValue:
    # trees do not carry their combiner; both built-in combiners pad with
    # the all-zero value of the leaf type
    node = tree
    while isinstance(node, Node):
        node = node.left
    return bytes(len(node.value)) if isinstance(node.value, bytes) else 0


def leaves(tree: MerkleTree) -> List[Leaf]:
    return [n for n in iter_nodes(tree) if isinstance(n, Leaf)]


def iter_nodes(tree: MerkleTree) -> Iterator[MerkleTree]:
    """Pre-order traversal."""
    stack: List[MerkleTree] = [tree]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, Node):
            stack.append(n.right)
            stack.append(n.left)


def is_complete(tree: MerkleTree) -> bool:
    for n in iter_nodes(tree):
        if isinstance(n, Node):
            if not (n.left.height == n.right.height == n.height - 1):
                return False
    return True


def is_decorated_with(combiner: Combiner, tree: MerkleTree) -> bool:
    return all(
        n.value == combiner.combine(n.left.value, n.right.value)
        for n in iter_nodes(tree)
        if isinstance(n, Node)
    )

