"""Greedy similarity-graph search and the main reduction loop."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernel
from ._kernel_py import PathState
from .automata import Automaton, Sra, as_sra, normalize_terminals, signatures, trim
from .procedure import create_procedure
from .simgraph import SelfProduct, SimilarityGraph, gain

log = logging.getLogger(__name__)


@dataclass
class SearchConfig:
    depth: int = 10
    max_iterations: Optional[int] = None
    enable_postprocess: bool = True
    # node expansions allowed per Gain^d root before settling for the partial maximum
    budget: int = 100_000
    # expansions allowed for one full scoring pass; large automata get a
    # smaller per-root budget so the first pass stays bounded
    total_budget: int = 50_000_000
    # roots tried per iteration before giving up
    retries: int = 5
    backend: Optional[str] = None
    # rescore only the roots a change can reach; False rescores everything
    incremental: bool = True

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.budget < 1 or self.retries < 1 or self.total_budget < 1:
            raise ValueError("budget, total_budget and retries must be positive")


@dataclass
class IterationRecord:
    root: tuple
    vertices: int
    gain: int
    transitions_before: int
    transitions_after: int


@dataclass
class ReductionReport:
    iterations: list = field(default_factory=list)
    states_before: int = 0
    transitions_before: int = 0
    registers_before: int = 0
    states: int = 0
    transitions: int = 0
    registers_before_merge: int = 0
    registers: int = 0
    duration: float = 0.0
    truncated: bool = False
    normalized: bool = False
    exhausted_roots: int = 0

    @property
    def total_gain(self) -> int:
        return sum(r.gain for r in self.iterations)

    def as_dict(self) -> dict:
        return {
            "iterations": [vars(r) | {"root": list(r.root)} for r in self.iterations],
            "before": {
                "states": self.states_before,
                "transitions": self.transitions_before,
                "registers": self.registers_before,
            },
            "after": {
                "states": self.states,
                "transitions": self.transitions,
                "registers_before_merge": self.registers_before_merge,
                "registers": self.registers,
            },
            "total_gain": self.total_gain,
            "duration": self.duration,
            "truncated": self.truncated,
            "normalized": self.normalized,
            "exhausted_roots": self.exhausted_roots,
        }


def gain_d(a: Sra, p: Optional[SelfProduct], n: tuple, d: int, budget: int = 100_000, backend=None) -> int:
    """Best gain over simple self-product paths of at most ``d`` edges starting at ``n``.

    ``p`` is accepted for interface symmetry; the kernel walks the product
    implicitly.  Vertices that cannot root a valid graph score
    :data:`procred.kernel.INVALID`.
    """
    k = kernel.prepare(a)
    best, hit = kernel.gain_d_one(k, (k.index(n[0]), k.index(n[1])), d, budget, backend)
    if hit:
        log.info("Gain^d enumeration for %s stopped after %d expansions", n, budget)
    return best


MIN_ROOT_BUDGET = 64


class ScoreTable:
    """Gain^d of every ordered pair of state ids, kept across reduction iterations.

    After an automaton change only the roots that can see a changed state
    within their exploration horizon are rescored; every other score is
    provably the same as a fresh computation would give.
    """

    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.m = np.full((0, 0), kernel.INVALID, dtype=np.int64)
        self.hit = np.zeros((0, 0), dtype=bool)
        self.rescored = 0
        self.root_budget = None

    def _grow(self, size: int):
        old = self.m.shape[0]
        if size <= old:
            return
        size = max(size, old + 1024)
        m = np.full((size, size), kernel.INVALID, dtype=np.int64)
        hit = np.zeros((size, size), dtype=bool)
        m[:old, :old] = self.m
        hit[:old, :old] = self.hit
        self.m, self.hit = m, hit

    def drop(self, states):
        idx = [q for q in states if q < self.m.shape[0]]
        if idx:
            self.m[idx, :] = kernel.INVALID
            self.m[:, idx] = kernel.INVALID
            self.hit[idx, :] = False
            self.hit[:, idx] = False

    def refresh(self, k, affected=None) -> int:
        """Rescore all roots (``affected=None``) or those touching ``affected`` ids.

        Returns the number of scored roots that hit the expansion budget.
        """
        n = k.n
        ids = np.asarray(k.ids, dtype=np.int64)
        self._grow(int(ids.max()) + 1 if n else 0)
        if affected is None:
            roots = np.stack(np.triu_indices(n, 1), axis=1) if n > 1 else np.zeros((0, 2), np.int64)
        else:
            pos = np.flatnonzero(np.isin(ids, np.fromiter(affected, dtype=np.int64)))
            others = np.arange(n, dtype=np.int64)
            lo = np.minimum(pos[:, None], others[None, :]).ravel()
            hi = np.maximum(pos[:, None], others[None, :]).ravel()
            keys = np.unique((lo * n + hi)[lo != hi])
            roots = np.stack([keys // n, keys % n], axis=1)
        if self.root_budget is None:
            # fixed for the table's lifetime so cached scores stay comparable
            pairs = max(1, n * (n - 1) // 2)
            self.root_budget = min(self.cfg.budget, max(MIN_ROOT_BUDGET, self.cfg.total_budget // pairs))
            if self.root_budget < self.cfg.budget:
                log.info("%d roots: per-root budget lowered to %d", pairs, self.root_budget)
        if not len(roots):
            return 0
        scores, hits = kernel.score_roots(k, roots, self.cfg.depth, self.root_budget, self.cfg.backend)
        scores = np.asarray(scores, dtype=np.int64)
        hits = np.asarray(hits, dtype=bool)
        a, b = ids[roots[:, 0]], ids[roots[:, 1]]
        # only the upper triangle is stored: (q, p) scores the same as (p, q)
        self.m[a, b] = scores
        self.hit[a, b] = hits
        self.rescored += len(roots)
        exhausted = int(hits.sum())
        if exhausted:
            log.info("%d Gain^d roots hit the expansion budget (%d)", exhausted, self.root_budget)
        return exhausted

    def score(self, p: int, q: int) -> int:
        return int(self.m[min(p, q), max(p, q)])

    def best_roots(self, count: int) -> list:
        """Highest-scoring valid roots, ties broken by the smaller id pair."""
        if not self.m.size:
            return []
        flat = self.m.reshape(-1)
        size = self.m.shape[0]
        taken = []
        for _ in range(count):
            v = int(np.argmax(flat))
            if flat[v] == kernel.INVALID:
                break
            taken.append((v, flat[v]))
            flat[v] = kernel.INVALID
        for v, score in taken:
            flat[v] = score
        return [(v // size, v % size) for v, _ in taken]


def affected_states(old: Sra, new: Sra, depth: int) -> set:
    """Ids of states whose roots may score differently on ``new`` than on ``old``.

    A root's search reads only states at most ``depth`` plain steps ahead of
    its components, plus their neighbours; so any root outside the backward
    ``depth``-neighbourhood of the changed states' neighbourhood is unaffected.
    """
    changed = set(old.states ^ new.states)
    for t in old.transitions ^ new.transitions:
        changed.update((t.src, t.dst))
    sig_old, sig_new = signatures(old), signatures(new)
    changed.update(q for q in old.states & new.states if sig_old[q] != sig_new[q])
    changed.update((old.initial | old.final) ^ (new.initial | new.final))
    near = set(changed)
    for t in old.transitions | new.transitions:
        if t.src in changed:
            near.add(t.dst)
        if t.dst in changed:
            near.add(t.src)
    back = {}
    for t in old.transitions | new.transitions:
        if t.is_plain:
            back.setdefault(t.dst, set()).add(t.src)
    seen, frontier = set(near), set(near)
    for _ in range(depth):
        frontier = {p for q in frontier for p in back.get(q, ())} - seen
        if not frontier:
            break
        seen |= frontier
    return seen & new.states


class _Search:
    def __init__(self, a: Sra, cfg: SearchConfig, table: Optional[ScoreTable] = None, affected=None):
        self.a = a
        self.cfg = cfg
        self.k = kernel.prepare(a)
        self.table = table or ScoreTable(cfg)
        self.exhausted = self.table.refresh(self.k, None if table is None else affected)

    def grow(self, root) -> tuple:
        """Greedy forward extension from ``root`` (index pair); returns (index path, gain)."""
        st = PathState(self.k)
        ids = self.k.ids
        c1, c2 = st.sigclass[root[0]], st.sigclass[root[1]]
        cur = st.add(*root)
        path = [root]
        while True:
            best = None
            for v in st.successors(*path[-1], c1, c2):
                delta = st.add(*v)
                st.remove(*v)
                if delta <= 0:
                    continue
                key = (-self.table.score(ids[v[0]], ids[v[1]]), ids[v[0]], ids[v[1]])
                if best is None or key < best[0]:
                    best = (key, v, delta)
            if best is None:
                return path, cur
            _, v, delta = best
            st.add(*v)
            cur += delta
            path.append(v)

    def find(self) -> Optional[tuple]:
        ids = self.k.ids
        for p, q in self.table.best_roots(self.cfg.retries):
            path, g = self.grow((self.k.index(p), self.k.index(q)))
            if g > 0:
                vertices = [(ids[x], ids[y]) for x, y in path]
                return SimilarityGraph.induced(self.a, vertices), g
        return None


def find_sim_graph(a: Sra, d: int = 10, cfg: Optional[SearchConfig] = None) -> Optional[SimilarityGraph]:
    """Greedily grow a positive-gain linear similarity graph, or return None."""
    cfg = cfg or SearchConfig(depth=d)
    if cfg.depth != d:
        cfg = SearchConfig(**{**vars(cfg), "depth": d})
    found = _Search(a, cfg).find()
    return found[0] if found else None


def reduce(
    a: Automaton,
    cfg: Optional[SearchConfig] = None,
    on_iteration: Optional[Callable[[Sra, SimilarityGraph], None]] = None,
) -> tuple:
    """Repeatedly fold similar sub-graphs into procedures; returns ``(sra, report)``.

    ``on_iteration`` is called with the automaton after every procedure
    creation.
    """
    from .postprocess import postprocess

    cfg = cfg or SearchConfig()
    started = time.perf_counter()
    a = as_sra(a)
    report = ReductionReport(
        states_before=len(a.states),
        transitions_before=len(a.transitions),
        registers_before=len(a.registers),
    )
    if len(a.initial | a.final) > 2:
        a = normalize_terminals(a)
        report.normalized = True
    a = trim(a)
    table = ScoreTable(cfg)
    affected = None
    while True:
        search = _Search(a, cfg, table, affected)
        report.exhausted_roots += search.exhausted
        found = search.find()
        if found is None:
            break
        if cfg.max_iterations is not None and len(report.iterations) >= cfg.max_iterations:
            report.truncated = True
            break
        g, expected = found
        before = len(a.transitions)
        reduced = create_procedure(a, g)
        realised = before - len(reduced.transitions)
        if realised != expected:
            # the incremental count and the partition-based count must agree
            raise AssertionError(f"gain mismatch: predicted {expected}, realised {realised} (graph {g.path})")
        trimmed = trim(reduced)
        if trimmed is not reduced:
            log.warning("procedure creation left unreachable states; trimmed %d", len(reduced.states - trimmed.states))
        report.iterations.append(IterationRecord(g.root, len(g.path), realised, before, len(reduced.transitions)))
        table.drop(a.states - trimmed.states)
        affected = affected_states(a, trimmed, cfg.depth) if cfg.incremental else None
        a = trimmed
        if on_iteration is not None:
            on_iteration(a, g)
    report.registers_before_merge = len(a.registers)
    if cfg.enable_postprocess:
        a = postprocess(a)
    report.states = len(a.states)
    report.transitions = len(a.transitions)
    report.registers = len(a.registers)
    report.duration = time.perf_counter() - started
    return a, report


__all__ = [
    "SearchConfig",
    "IterationRecord",
    "ReductionReport",
    "gain_d",
    "find_sim_graph",
    "reduce",
    "gain",
]
