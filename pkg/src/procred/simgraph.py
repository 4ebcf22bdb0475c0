"""Self-product, similarity graphs, transition classification and gain."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .automata import Sra, signatures

SG1 = "SG1"
SG2 = "SG2"
SG3 = "SG3"
SG4 = "SG4"
DISJOINTNESS = "disjointness"
LINEARITY = "linearity"
EDGE_SUBSET = "edge-subset-of-self-product"
TERMINALS = "vertex-excludes-terminals"


class InvalidSimilarityGraph(ValueError):
    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("invalid similarity graph: " + ", ".join(self.violations))


@dataclass(frozen=True)
class SelfProduct:
    vertices: frozenset
    edges: frozenset

    def successors(self, v) -> list:
        return sorted(t for s, t in self.edges if s == v)


def plain_symbols(a: Sra) -> dict:
    """(src, dst) -> symbols of the register-preserving (BOT/BOT, STAR/STAR) transitions."""
    index = defaultdict(set)
    for t in a.transitions:
        if t.is_plain:
            index[t.src, t.dst].add(t.symbol)
    return dict(index)


def self_product(a: Sra) -> SelfProduct:
    inner = sorted(a.states - (a.initial | a.final))
    inner_set = set(inner)
    by_symbol = defaultdict(list)
    for t in a.transitions:
        if t.is_plain and t.src in inner_set and t.dst in inner_set:
            by_symbol[t.symbol].append(t)
    edges = set()
    for ts in by_symbol.values():
        for t1 in ts:
            for t2 in ts:
                edges.add(((t1.src, t2.src), (t1.dst, t2.dst)))
    vertices = frozenset((p, q) for p in inner for q in inner)
    return SelfProduct(vertices, frozenset(edges))


@dataclass(frozen=True)
class SimilarityGraph:
    """Pairs of similar states; ``path`` is the spanning path, ``path[0]`` the root."""

    path: tuple
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(tuple(v) for v in self.path))
        object.__setattr__(self, "edges", frozenset((tuple(u), tuple(v)) for u, v in self.edges))

    @classmethod
    def induced(cls, a: Sra, path: Iterable) -> "SimilarityGraph":
        """Build the graph whose edges are all self-product edges among ``path``."""
        path = tuple(tuple(v) for v in path)
        index = plain_symbols(a)
        edges = set()
        for u in path:
            for v in path:
                if index.get((u[0], v[0]), set()) & index.get((u[1], v[1]), set()):
                    edges.add((u, v))
        return cls(path, frozenset(edges))

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.path)

    @property
    def root(self):
        return self.path[0]

    @property
    def first(self) -> frozenset:
        return frozenset(v[0] for v in self.path)

    @property
    def second(self) -> frozenset:
        return frozenset(v[1] for v in self.path)

    @property
    def states(self) -> frozenset:
        return self.first | self.second

    def partner(self) -> dict:
        out = {}
        for p, q in self.path:
            out[p] = q
            out[q] = p
        return out


def validate_simgraph(a: Sra, g: SimilarityGraph) -> tuple:
    """Return the violated conditions (an empty tuple means the graph is valid)."""
    bad = []
    if not g.path:
        return (SG1,)
    vertices = g.vertices
    terminals = a.initial | a.final
    if any(p not in a.states or q not in a.states for p, q in vertices):
        bad.append(TERMINALS)
    elif any(p in terminals or q in terminals for p, q in vertices):
        bad.append(TERMINALS)

    # SG1: every vertex reachable from the root
    adj = defaultdict(list)
    for u, v in g.edges:
        adj[u].append(v)
    seen, stack = {g.root}, [g.root]
    while stack:
        for v in adj[stack.pop()]:
            if v in vertices and v not in seen:
                seen.add(v)
                stack.append(v)
    if seen != vertices:
        bad.append(SG1)

    firsts = [p for p, _ in vertices]
    seconds = [q for _, q in vertices]
    if len(set(firsts)) != len(firsts) or len(set(seconds)) != len(seconds):
        bad.append(SG2)

    if set(firsts) & set(seconds) or any(p == q for p, q in vertices):
        bad.append(DISJOINTNESS)

    if TERMINALS not in bad:
        sig = signatures(a)
        s1 = {sig[p] for p in firsts}
        s2 = {sig[q] for q in seconds}
        if len(s1) > 1 or len(s2) > 1:
            bad.append(SG3)
        if any(x & y for x in s1 for y in s2):
            bad.append(SG4)

    if len(set(g.path)) != len(g.path) or any(
        (u, v) not in g.edges for u, v in zip(g.path, g.path[1:])
    ):
        bad.append(LINEARITY)

    index = plain_symbols(a)
    for u, v in g.edges:
        if u not in vertices or v not in vertices:
            bad.append(EDGE_SUBSET)
            break
        if u[0] in terminals or u[1] in terminals or v[0] in terminals or v[1] in terminals:
            bad.append(EDGE_SUBSET)
            break
        if not index.get((u[0], v[0]), set()) & index.get((u[1], v[1]), set()):
            bad.append(EDGE_SUBSET)
            break
    return tuple(bad)


@dataclass(frozen=True)
class TransitionPartition:
    entry: frozenset
    exit: frozenset
    common: frozenset
    unique: frozenset
    switch: frozenset
    untouched: frozenset

    def classes(self) -> dict:
        return {
            "entry": self.entry,
            "exit": self.exit,
            "common": self.common,
            "unique": self.unique,
            "switch": self.switch,
            "untouched": self.untouched,
        }


def classify_transitions(a: Sra, g: SimilarityGraph) -> TransitionPartition:
    violations = validate_simgraph(a, g)
    if violations:
        raise InvalidSimilarityGraph(violations)
    first, second = g.first, g.second
    partner = g.partner()
    plain = defaultdict(set)
    for t in a.transitions:
        if t.is_plain:
            plain[t.src, t.dst].add(t.symbol)

    def side(q):
        return 1 if q in first else 2 if q in second else 0

    buckets = {k: set() for k in ("entry", "exit", "common", "unique", "switch", "untouched")}
    for t in a.transitions:
        i, j = side(t.src), side(t.dst)
        if i == 0 and j == 0:
            buckets["untouched"].add(t)
        elif i == 0:
            buckets["entry"].add(t)
        elif j == 0:
            buckets["exit"].add(t)
        elif i != j:
            buckets["switch"].add(t)
        elif t.is_plain and _matched(t, i, partner, plain, g.edges):
            buckets["common"].add(t)
        else:
            buckets["unique"].add(t)
    return TransitionPartition(**{k: frozenset(v) for k, v in buckets.items()})


def _matched(t, side, partner, plain, edges) -> bool:
    r2, s2 = partner[t.src], partner[t.dst]
    if t.symbol not in plain.get((r2, s2), ()):
        return False
    if side == 1:
        return ((t.src, r2), (t.dst, s2)) in edges
    return ((r2, t.src), (s2, t.dst)) in edges


def id_size(sig: frozenset) -> int:
    """Number of guard copies a wildcard expands into: fresh invocations get one symbol."""
    return max(len(sig), 1)


def gain(a: Sra, g: SimilarityGraph) -> int:
    """Transitions saved by turning ``g`` into a procedure.

    Common transitions collapse pairwise into one wildcard transition; every
    wildcard among the unique and exit transitions is expanded into one guard
    per invocation symbol.
    """
    part = classify_transitions(a, g)
    slot = {}
    for k, (p, q) in enumerate(g.path):
        slot[p] = slot[q] = k
    merged = {(slot[t.src], t.symbol, slot[t.dst]) for t in part.common}
    gain_common = len(part.common) - len(merged)
    sig = signatures(a)
    loss = sum(
        id_size(sig[t.src]) - 1 for t in part.unique | part.exit if t.is_star
    )
    return gain_common - loss
