"""Access policies: boolean/threshold trees, parsing, satisfaction, and sharing.

A policy is a tree whose leaves are attribute names and whose internal nodes
are k-of-n threshold gates (AND = n-of-n, OR = 1-of-n).  Secrets are shared
down the tree Shamir-style: each gate carries a random polynomial of degree
k-1 whose constant term is the value inherited from its parent, and child i
inherits the evaluation at x = i (children are numbered from 1).  Any
satisfying subset of leaves reconstructs the root secret through Lagrange
coefficients at x = 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Union

from .groups import GroupContext, Scalar


class PolicyError(Exception):
    """Base class for policy errors."""


class PolicySyntaxError(PolicyError):
    """Policy text does not parse; carries position and expectation."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ThresholdOutOfRange(PolicyError):
    """Gate threshold k outside 1..num_children."""


class IndexNotInSet(PolicyError):
    """Lagrange coefficient requested for an index outside the set."""


@dataclass(frozen=True)
class Leaf:
    attribute: str


@dataclass(frozen=True)
class Gate:
    threshold: int
    children: tuple["Node", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 1:
            raise ThresholdOutOfRange("gate must have at least one child")
        if not 1 <= self.threshold <= len(self.children):
            raise ThresholdOutOfRange(
                f"threshold {self.threshold} out of range for {len(self.children)} children")


Node = Union[Leaf, Gate]

# Path from the root: tuple of 1-based child indices.  The root itself is ().
Path = tuple[int, ...]

ShareMap = dict[Path, Scalar]


@dataclass(frozen=True)
class AccessTree:
    root: Node

    def leaves(self) -> list[tuple[Path, Leaf]]:
        """All leaves in depth-first order with their paths."""
        out: list[tuple[Path, Leaf]] = []

        def walk(node: Node, path: Path) -> None:
            if isinstance(node, Leaf):
                out.append((path, node))
                return
            for i, child in enumerate(node.children, start=1):
                walk(child, path + (i,))

        walk(self.root, ())
        return out

    def attributes(self) -> set[str]:
        return {leaf.attribute for _, leaf in self.leaves()}


def leaf_key(path: Path) -> str:
    """Stable string form of a leaf path ('/' for the root leaf)."""
    return "/" + "/".join(str(i) for i in path)


def parse_leaf_key(text: str) -> Path:
    if not text.startswith("/"):
        raise ValueError(f"bad leaf key {text!r}")
    body = text[1:]
    return () if body == "" else tuple(int(part) for part in body.split("/"))


_TOKEN_RE = re.compile(r'\s*(?:(?P<lp>\()|(?P<rp>\))|(?P<comma>,)|(?P<quoted>"[^"]*")|(?P<ident>[A-Za-z0-9_-]+))')

_BARE_RE = re.compile(r"[A-Za-z0-9_-]+\Z")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []  # (kind, value, position)
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                stripped = text[pos:].lstrip()
                at = len(text) - len(stripped)
                raise PolicySyntaxError(f"unexpected character {text[at]!r}", at)
            for kind in ("lp", "rp", "comma", "quoted", "ident"):
                v = m.group(kind)
                if v is not None:
                    self.toks.append((kind, v, m.start(kind)))
                    break
            pos = m.end()
        self.i = 0

    def peek(self, ahead: int = 0):
        j = self.i + ahead
        return self.toks[j] if j < len(self.toks) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind: str, what: str):
        k, v, at = self.next()
        if k != kind:
            raise PolicySyntaxError(f"expected {what}, found {v!r}" if k else f"expected {what}, found end of input", at)
        return v, at


def _is_keyword(tok, word: str) -> bool:
    kind, value, _ = tok
    return kind == "ident" and value.lower() == word


def parse_policy(text: str) -> AccessTree:
    """Parse policy text into an access tree.

    Grammar::

        policy   := or_expr
        or_expr  := and_expr { "or" and_expr }
        and_expr := atom { "and" atom }
        atom     := ATTR | "(" policy ")" | INT "of" "(" policy { "," policy } ")"
        ATTR     := [A-Za-z0-9_-]+ | double-quoted string

    "and" binds tighter than "or"; both keywords are case-insensitive.
    Chains fold into a single gate, so ``A and B and C`` is one 3-of-3 gate.
    """
    if not text or not text.strip():
        raise PolicySyntaxError("empty policy", 0)
    toks = _Tokens(text)
    root = _parse_or(toks)
    k, v, at = toks.peek()
    if k is not None:
        raise PolicySyntaxError(f"trailing input {v!r}", at)
    return AccessTree(root)


def _parse_or(toks: _Tokens) -> Node:
    parts = [_parse_and(toks)]
    while _is_keyword(toks.peek(), "or"):
        toks.next()
        parts.append(_parse_and(toks))
    return parts[0] if len(parts) == 1 else Gate(1, tuple(parts))


def _parse_and(toks: _Tokens) -> Node:
    parts = [_parse_atom(toks)]
    while _is_keyword(toks.peek(), "and"):
        toks.next()
        parts.append(_parse_atom(toks))
    return parts[0] if len(parts) == 1 else Gate(len(parts), tuple(parts))


def _parse_atom(toks: _Tokens) -> Node:
    kind, value, at = toks.peek()
    if kind == "lp":
        toks.next()
        inner = _parse_or(toks)
        toks.expect("rp", "')'")
        return inner
    if kind == "quoted":
        toks.next()
        return Leaf(value[1:-1])
    if kind == "ident":
        # "3 of (...)" — an all-digit identifier followed by "of" starts a gate
        if value.isdigit() and _is_keyword(toks.peek(1), "of"):
            toks.next()
            toks.next()
            toks.expect("lp", "'('")
            children = [_parse_or(toks)]
            while toks.peek()[0] == "comma":
                toks.next()
                children.append(_parse_or(toks))
            toks.expect("rp", "')' or ','")
            return Gate(int(value), tuple(children))
        if value.lower() in ("and", "or"):
            raise PolicySyntaxError(f"expected attribute or '(', found keyword {value!r}", at)
        toks.next()
        return Leaf(value)
    raise PolicySyntaxError(
        f"expected attribute, '(' or threshold gate, found {value!r}" if kind else
        "expected attribute, '(' or threshold gate, found end of input", at)


def format_policy(tree: AccessTree) -> str:
    """Canonical text form; reparses to a structurally identical tree."""
    return _format_node(tree.root, top=True)


def _format_attr(attribute: str) -> str:
    if _BARE_RE.match(attribute) and attribute.lower() not in ("and", "or"):
        return attribute
    return f'"{attribute}"'


def _format_node(node: Node, top: bool = False) -> str:
    if isinstance(node, Leaf):
        return _format_attr(node.attribute)
    n = len(node.children)
    if node.threshold == n and n > 1:
        body = " and ".join(_format_node(c) for c in node.children)
        return body if top else f"({body})"
    if node.threshold == 1 and n > 1:
        body = " or ".join(_format_node(c) for c in node.children)
        return body if top else f"({body})"
    inner = ", ".join(_format_node(c, top=True) for c in node.children)
    return f"{node.threshold} of ({inner})"


@dataclass(frozen=True)
class DecryptionPlan:
    """Which gate subsets and leaves a satisfying attribute set uses."""

    satisfied: bool
    gates: dict[Path, tuple[int, ...]] = field(default_factory=dict)
    leaves: tuple[tuple[Path, str], ...] = ()


def satisfies(tree: AccessTree, attrs: Iterable[str]) -> DecryptionPlan:
    """Evaluate the tree against an attribute set.

    When several child subsets meet a gate's threshold the lexicographically
    smallest index subset is chosen, which makes runs deterministic.
    """
    have = set(attrs)
    gates: dict[Path, tuple[int, ...]] = {}
    leaves: list[tuple[Path, str]] = []

    def ok(node: Node) -> bool:
        if isinstance(node, Leaf):
            return node.attribute in have
        return sum(ok(c) for c in node.children) >= node.threshold

    def collect(node: Node, path: Path) -> None:
        if isinstance(node, Leaf):
            leaves.append((path, node.attribute))
            return
        good = [i for i, c in enumerate(node.children, start=1) if ok(c)]
        chosen = tuple(good[: node.threshold])
        gates[path] = chosen
        for i in chosen:
            collect(node.children[i - 1], path + (i,))

    if not ok(tree.root):
        return DecryptionPlan(satisfied=False)
    collect(tree.root, ())
    return DecryptionPlan(satisfied=True, gates=gates, leaves=tuple(leaves))


def share_secret(ctx: GroupContext, tree: AccessTree, secret: Scalar, rng) -> ShareMap:
    """Share a secret over the tree; returns the per-leaf values q_leaf(0).

    Each gate draws threshold-1 uniform coefficients (in depth-first order,
    which pins the rng consumption for reproducible runs).
    """
    shares: ShareMap = {}

    def assign(node: Node, path: Path, value: Scalar) -> None:
        if isinstance(node, Leaf):
            shares[path] = value
            return
        coeffs = [value] + [ctx.random_scalar(rng) for _ in range(node.threshold - 1)]
        for i, child in enumerate(node.children, start=1):
            y = ctx.scalar(0)
            for j, c in enumerate(coeffs):
                y = y + c * pow(i, j, ctx.p)
            assign(child, path + (i,), y)

    assign(tree.root, (), secret)
    return shares


def lagrange_coeff(ctx: GroupContext, i: int, index_set: Iterable[int]) -> Scalar:
    """Lagrange interpolation coefficient at x = 0 for share index i within the set."""
    materialized = list(index_set)
    indices = sorted(set(materialized))
    if len(indices) != len(materialized):
        raise ValueError("share indices must be distinct")
    if i not in indices:
        raise IndexNotInSet(f"index {i} not in {indices}")
    if any(j % ctx.p == 0 for j in indices):
        raise ValueError("share indices must be nonzero mod p")
    num, den = 1, 1
    for j in indices:
        if j == i:
            continue
        num = num * (-j) % ctx.p
        den = den * (i - j) % ctx.p
    return ctx.scalar(num) / ctx.scalar(den)
