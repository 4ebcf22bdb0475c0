"""Flat-array view of an SRA for the search kernels, and backend selection.

The compiled backend (``procred._kernel``) is used when it was built and
``PROCRED_PURE_PYTHON`` is not set; otherwise the pure-Python fallback in
:mod:`procred._kernel_py` runs the same algorithm on the same arrays.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _kernel_py
from .automata import Sra, signatures
from .simgraph import id_size

try:
    if os.environ.get("PROCRED_PURE_PYTHON"):
        raise ImportError("pure Python backend requested")
    from . import _kernel as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

BACKENDS = {"python": _kernel_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled
DEFAULT_BACKEND = "compiled" if _compiled is not None else "python"

INVALID = _kernel_py.INVALID


def backend(name: str | None = None):
    return BACKENDS[name or DEFAULT_BACKEND]


def _csr(n, rows):
    """rows: list of (row, *cols) tuples, already sorted by row then key."""
    ptr = np.zeros(n + 1, dtype=np.int64)
    for r, *_ in rows:
        ptr[r + 1] += 1
    np.cumsum(ptr, out=ptr)
    cols = list(zip(*rows))[1:] if rows else []
    return ptr, [np.asarray(c, dtype=np.int64) for c in cols]


@dataclass
class KernelInput:
    """Index-based arrays; state index order equals state-id order."""

    ids: list
    n: int
    excluded: np.ndarray
    sigclass: np.ndarray
    disjoint: np.ndarray
    n_classes: int
    weight: np.ndarray
    po_ptr: np.ndarray
    po_sym: np.ndarray
    po_dst: np.ndarray
    po_cnt: np.ndarray
    po_key: np.ndarray
    pi_ptr: np.ndarray
    pi_sym: np.ndarray
    pi_src: np.ndarray
    pi_cnt: np.ndarray
    so_ptr: np.ndarray
    so_sym: np.ndarray
    so_dst: np.ndarray
    si_ptr: np.ndarray
    si_sym: np.ndarray
    si_src: np.ndarray

    def index(self, q: int) -> int:
        return self._pos[q]

    def __post_init__(self):
        self._pos = {q: k for k, q in enumerate(self.ids)}
        self._lists = None

    def as_lists(self) -> dict:
        """Plain-list copy of every array (the fallback is faster on lists)."""
        if self._lists is None:
            self._lists = {
                k: (v.tolist() if isinstance(v, np.ndarray) else v)
                for k, v in vars(self).items()
                if not k.startswith("_")
            }
        return self._lists


def prepare(a: Sra) -> KernelInput:
    ids = sorted(a.states)
    pos = {q: k for k, q in enumerate(ids)}
    n = len(ids)
    symbols = {s: k for k, s in enumerate(sorted(a.alphabet))}
    sig = signatures(a)
    classes = {}
    sigclass = np.array([classes.setdefault(sig[q], len(classes)) for q in ids], dtype=np.int64)
    by_class = sorted(classes, key=classes.get)
    nc = len(by_class)
    disjoint = np.zeros(nc * nc, dtype=np.int64)
    for i, x in enumerate(by_class):
        for j, y in enumerate(by_class):
            disjoint[i * nc + j] = not (x & y)
    terminals = a.initial | a.final
    excluded = np.array([q in terminals for q in ids], dtype=np.int64)
    weight = np.array([id_size(sig[q]) - 1 for q in ids], dtype=np.int64)

    plain = {}
    stars = set()
    for t in a.transitions:
        key = (pos[t.src], symbols[t.symbol], pos[t.dst])
        if t.is_plain:
            plain[key] = plain.get(key, 0) + 1
        if t.is_star:
            stars.add(key)
    po_rows = sorted((r, a_, s, c) for (r, a_, s), c in plain.items())
    pi_rows = sorted((s, a_, r, c) for (r, a_, s), c in plain.items())
    so_rows = sorted((r, a_, s) for r, a_, s in stars)
    si_rows = sorted((s, a_, r) for r, a_, s in stars)
    po_ptr, po_cols = _csr(n, po_rows)
    pi_ptr, pi_cols = _csr(n, pi_rows)
    so_ptr, so_cols = _csr(n, so_rows)
    si_ptr, si_cols = _csr(n, si_rows)
    empty = np.zeros(0, dtype=np.int64)
    po_sym, po_dst, po_cnt = po_cols or (empty, empty, empty)
    pi_sym, pi_src, pi_cnt = pi_cols or (empty, empty, empty)
    so_sym, so_dst = so_cols or (empty, empty)
    si_sym, si_src = si_cols or (empty, empty)
    return KernelInput(
        ids=ids,
        n=n,
        excluded=excluded,
        sigclass=sigclass,
        disjoint=disjoint,
        n_classes=nc,
        weight=weight,
        po_ptr=po_ptr,
        po_sym=po_sym,
        po_dst=po_dst,
        po_cnt=po_cnt,
        po_key=po_sym * max(n, 1) + po_dst,
        pi_ptr=pi_ptr,
        pi_sym=pi_sym,
        pi_src=pi_src,
        pi_cnt=pi_cnt,
        so_ptr=so_ptr,
        so_sym=so_sym,
        so_dst=so_dst,
        si_ptr=si_ptr,
        si_sym=si_sym,
        si_src=si_src,
    )


def gain_d_all(k: KernelInput, depth: int, budget: int, backend_name: str | None = None):
    """Depth-limited best gain for every vertex, as an ``n * n`` array.

    Returns ``(scores, exhausted)`` where invalid roots score ``INVALID`` and
    ``exhausted`` counts roots whose enumeration hit ``budget``.
    """
    return backend(backend_name).gain_d_all(k, depth, budget)


def gain_d_one(k: KernelInput, root: tuple, depth: int, budget: int, backend_name: str | None = None):
    return backend(backend_name).gain_d_one(k, root[0], root[1], depth, budget)


def score_roots(k: KernelInput, roots, depth: int, budget: int, backend_name: str | None = None):
    """Gain^d for each ``(s1, s2)`` index pair of ``roots``: ``(scores, exhausted flags)``."""
    return backend(backend_name).score_roots(k, roots, depth, budget)
