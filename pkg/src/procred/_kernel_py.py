"""Pure-Python search kernel over the arrays built by :func:`procred.kernel.prepare`.

A :class:`PathState` holds a partial similarity graph (one flag per state
telling which invocation it belongs to, plus its partner) and updates its
gain incrementally: adding a vertex only changes the role of transitions
incident to the two new states.
"""
from __future__ import annotations

from bisect import bisect_left

INVALID = -(1 << 60)


class PathState:
    def __init__(self, k):
        L = k.as_lists()
        self.n = L["n"]
        self.L = L
        self.inv = [0] * self.n
        self.partner = [-1] * self.n
        self.sigclass = L["sigclass"]
        self.excluded = L["excluded"]

    def pcount(self, src, sym, dst):
        L = self.L
        lo, hi = L["po_ptr"][src], L["po_ptr"][src + 1]
        if lo == hi:
            return 0
        key = sym * self.n + dst
        keys = L["po_key"]
        i = bisect_left(keys, key, lo, hi)
        if i < hi and keys[i] == key:
            return L["po_cnt"][i]
        return 0

    def _loss(self, r, sym, s):
        inv = self.inv
        ir = inv[r]
        if not ir:
            return 0
        is_ = inv[s]
        if is_ == 0:
            return self.L["weight"][r]
        if is_ != ir:
            return 0
        if self.pcount(self.partner[r], sym, self.partner[s]):
            return 0
        return self.L["weight"][r]

    def add(self, s1, s2):
        """Put ``(s1, s2)`` into the graph and return the change in gain."""
        L = self.L
        inv, partner = self.inv, self.partner
        inv[s1], inv[s2] = 1, 2
        partner[s1], partner[s2] = s2, s1
        d = 0
        po_dst, po_sym, po_cnt = L["po_dst"], L["po_sym"], L["po_cnt"]
        for e in range(L["po_ptr"][s1], L["po_ptr"][s1 + 1]):
            x = po_dst[e]
            if inv[x] == 1:
                c = self.pcount(s2, po_sym[e], partner[x])
                if c:
                    d += po_cnt[e] + c - 1
        pi_src, pi_sym, pi_cnt = L["pi_src"], L["pi_sym"], L["pi_cnt"]
        for e in range(L["pi_ptr"][s1], L["pi_ptr"][s1 + 1]):
            x = pi_src[e]
            if x != s1 and inv[x] == 1:
                c = self.pcount(partner[x], pi_sym[e], s2)
                if c:
                    d += pi_cnt[e] + c - 1
        w = L["weight"]
        so_ptr, so_sym, so_dst = L["so_ptr"], L["so_sym"], L["so_dst"]
        si_ptr, si_sym, si_src = L["si_ptr"], L["si_sym"], L["si_src"]
        for s in (s1, s2):
            for e in range(so_ptr[s], so_ptr[s + 1]):
                d -= self._loss(s, so_sym[e], so_dst[e])
            for e in range(si_ptr[s], si_ptr[s + 1]):
                r = si_src[e]
                if r == s1 or r == s2:
                    continue
                if inv[r]:
                    d += w[r]  # was an exit transition
                d -= self._loss(r, si_sym[e], s)
        return d

    def remove(self, s1, s2):
        self.inv[s1] = self.inv[s2] = 0
        self.partner[s1] = self.partner[s2] = -1

    def successors(self, u1, u2, c1, c2):
        """Unused vertices reachable from ``(u1, u2)`` in the self-product.

        Order: by symbol, then first component, then second; duplicates keep
        their first position.
        """
        L = self.L
        po_sym, po_dst = L["po_sym"], L["po_dst"]
        inv, sigclass, excluded = self.inv, self.sigclass, self.excluded
        i, i_end = L["po_ptr"][u1], L["po_ptr"][u1 + 1]
        j0, j_end = L["po_ptr"][u2], L["po_ptr"][u2 + 1]
        out = {}
        j = j0
        while i < i_end and j < j_end:
            a, b = po_sym[i], po_sym[j]
            if a < b:
                i += 1
            elif b < a:
                j += 1
            else:
                i2 = i
                while i2 < i_end and po_sym[i2] == a:
                    i2 += 1
                j2 = j
                while j2 < j_end and po_sym[j2] == a:
                    j2 += 1
                for x in range(i, i2):
                    x1 = po_dst[x]
                    if inv[x1] or excluded[x1] or sigclass[x1] != c1:
                        continue
                    for y in range(j, j2):
                        x2 = po_dst[y]
                        if x1 == x2 or inv[x2] or excluded[x2] or sigclass[x2] != c2:
                            continue
                        out.setdefault((x1, x2), None)
                i, j = i2, j2
        return list(out)


def valid_root(k, s1, s2) -> bool:
    L = k.as_lists()
    if s1 == s2 or L["excluded"][s1] or L["excluded"][s2]:
        return False
    nc = L["n_classes"]
    return bool(L["disjoint"][L["sigclass"][s1] * nc + L["sigclass"][s2]])


def _dfs(st, s1, s2, depth, budget):
    c1, c2 = st.sigclass[s1], st.sigclass[s2]
    g = st.add(s1, s2)
    best = g
    expansions = 0
    exhausted = False
    stack = [((s1, s2), iter(st.successors(s1, s2, c1, c2) if depth > 0 else ()), g)]
    while stack:
        v, it, cur = stack[-1]
        nxt = next(it, None)
        if nxt is None or exhausted:
            stack.pop()
            st.remove(*v)
            continue
        expansions += 1
        ng = cur + st.add(*nxt)
        if ng > best:
            best = ng
        if expansions >= budget:
            exhausted = True
        if len(stack) < depth:
            succ = st.successors(nxt[0], nxt[1], c1, c2)
        else:
            succ = ()
        stack.append((nxt, iter(succ), ng))
    return best, exhausted


def gain_d_one(k, s1, s2, depth, budget):
    if not valid_root(k, s1, s2):
        return INVALID, False
    return _dfs(PathState(k), s1, s2, depth, budget)


def score_roots(k, roots, depth, budget):
    """Gain^d of each ``(s1, s2)`` index pair in ``roots``; returns (scores, exhausted flags)."""
    st = PathState(k)
    scores, hits = [], []
    for s1, s2 in roots:
        s1, s2 = int(s1), int(s2)
        if valid_root(k, s1, s2):
            best, hit = _dfs(st, s1, s2, depth, budget)
        else:
            best, hit = INVALID, False
        scores.append(best)
        hits.append(hit)
    return scores, hits


def gain_d_all(k, depth, budget):
    """Scores for every ordered pair; ``(s2, s1)`` mirrors ``(s1, s2)``."""
    n = k.n
    roots = [(s1, s2) for s1 in range(n) for s2 in range(s1 + 1, n)]
    found, hits = score_roots(k, roots, depth, budget)
    scores = [INVALID] * (n * n)
    for (s1, s2), best in zip(roots, found):
        scores[s1 * n + s2] = scores[s2 * n + s1] = best
    return scores, sum(hits)
