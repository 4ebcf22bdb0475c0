# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernel; same algorithm and visiting order as ``_kernel_py``."""
from libc.stdlib cimport malloc, realloc, free

import numpy as np
cimport numpy as cnp

ctypedef long long i64

INVALID = -(1 << 60)


cdef class _Kernel:
    cdef i64 n, nc
    cdef i64[::1] excluded, sigclass, disjoint, weight
    cdef i64[::1] po_ptr, po_sym, po_dst, po_cnt, po_key
    cdef i64[::1] pi_ptr, pi_sym, pi_src, pi_cnt
    cdef i64[::1] so_ptr, so_sym, so_dst, si_ptr, si_sym, si_src
    cdef i64[::1] inv, partner, stamp
    cdef i64 stamp_now
    cdef i64* buf
    cdef i64 buf_cap

    def __cinit__(self, k):
        self.n = k.n
        self.nc = k.n_classes
        self.excluded = np.ascontiguousarray(k.excluded, dtype=np.int64)
        self.sigclass = np.ascontiguousarray(k.sigclass, dtype=np.int64)
        self.disjoint = np.ascontiguousarray(k.disjoint, dtype=np.int64)
        self.weight = np.ascontiguousarray(k.weight, dtype=np.int64)
        self.po_ptr = np.ascontiguousarray(k.po_ptr, dtype=np.int64)
        self.po_sym = np.ascontiguousarray(k.po_sym, dtype=np.int64)
        self.po_dst = np.ascontiguousarray(k.po_dst, dtype=np.int64)
        self.po_cnt = np.ascontiguousarray(k.po_cnt, dtype=np.int64)
        self.po_key = np.ascontiguousarray(k.po_key, dtype=np.int64)
        self.pi_ptr = np.ascontiguousarray(k.pi_ptr, dtype=np.int64)
        self.pi_sym = np.ascontiguousarray(k.pi_sym, dtype=np.int64)
        self.pi_src = np.ascontiguousarray(k.pi_src, dtype=np.int64)
        self.pi_cnt = np.ascontiguousarray(k.pi_cnt, dtype=np.int64)
        self.so_ptr = np.ascontiguousarray(k.so_ptr, dtype=np.int64)
        self.so_sym = np.ascontiguousarray(k.so_sym, dtype=np.int64)
        self.so_dst = np.ascontiguousarray(k.so_dst, dtype=np.int64)
        self.si_ptr = np.ascontiguousarray(k.si_ptr, dtype=np.int64)
        self.si_sym = np.ascontiguousarray(k.si_sym, dtype=np.int64)
        self.si_src = np.ascontiguousarray(k.si_src, dtype=np.int64)
        self.inv = np.zeros(self.n, dtype=np.int64)
        self.partner = np.full(self.n, -1, dtype=np.int64)
        self.stamp = np.zeros(max(self.n * self.n, 1), dtype=np.int64)
        self.stamp_now = 0
        self.buf_cap = 1024
        self.buf = <i64*>malloc(self.buf_cap * sizeof(i64))
        if self.buf == NULL:
            raise MemoryError()

    def __dealloc__(self):
        if self.buf != NULL:
            free(self.buf)

    cdef i64 pcount(self, i64 src, i64 sym, i64 dst) noexcept nogil:
        cdef i64 lo = self.po_ptr[src], hi = self.po_ptr[src + 1], mid
        cdef i64 key = sym * self.n + dst
        while lo < hi:
            mid = (lo + hi) >> 1
            if self.po_key[mid] < key:
                lo = mid + 1
            else:
                hi = mid
        if lo < self.po_ptr[src + 1] and self.po_key[lo] == key:
            return self.po_cnt[lo]
        return 0

    cdef i64 loss(self, i64 r, i64 sym, i64 s) noexcept nogil:
        cdef i64 ir = self.inv[r], is_
        if ir == 0:
            return 0
        is_ = self.inv[s]
        if is_ == 0:
            return self.weight[r]
        if is_ != ir:
            return 0
        if self.pcount(self.partner[r], sym, self.partner[s]):
            return 0
        return self.weight[r]

    cdef i64 add(self, i64 s1, i64 s2) noexcept nogil:
        cdef i64 d = 0, e, x, c, r, s, k
        self.inv[s1] = 1
        self.inv[s2] = 2
        self.partner[s1] = s2
        self.partner[s2] = s1
        for e in range(self.po_ptr[s1], self.po_ptr[s1 + 1]):
            x = self.po_dst[e]
            if self.inv[x] == 1:
                c = self.pcount(s2, self.po_sym[e], self.partner[x])
                if c:
                    d += self.po_cnt[e] + c - 1
        for e in range(self.pi_ptr[s1], self.pi_ptr[s1 + 1]):
            x = self.pi_src[e]
            if x != s1 and self.inv[x] == 1:
                c = self.pcount(self.partner[x], self.pi_sym[e], s2)
                if c:
                    d += self.pi_cnt[e] + c - 1
        for k in range(2):
            s = s1 if k == 0 else s2
            for e in range(self.so_ptr[s], self.so_ptr[s + 1]):
                d -= self.loss(s, self.so_sym[e], self.so_dst[e])
            for e in range(self.si_ptr[s], self.si_ptr[s + 1]):
                r = self.si_src[e]
                if r == s1 or r == s2:
                    continue
                if self.inv[r]:
                    d += self.weight[r]
                d -= self.loss(r, self.si_sym[e], s)
        return d

    cdef inline void remove(self, i64 s1, i64 s2) noexcept nogil:
        self.inv[s1] = 0
        self.inv[s2] = 0
        self.partner[s1] = -1
        self.partner[s2] = -1

    cdef int reserve(self, i64 need) except -1:
        cdef i64 cap = self.buf_cap
        cdef i64* p
        if need <= cap:
            return 0
        while cap < need:
            cap *= 2
        p = <i64*>realloc(self.buf, cap * sizeof(i64))
        if p == NULL:
            raise MemoryError()
        self.buf = p
        self.buf_cap = cap
        return 0

    cdef i64 successors(self, i64 u1, i64 u2, i64 c1, i64 c2, i64 at) except -1:
        """Write successor keys ``x1 * n + x2`` at ``buf[at:]`` in product order; return the count."""
        cdef i64 i = self.po_ptr[u1], i_end = self.po_ptr[u1 + 1]
        cdef i64 j = self.po_ptr[u2], j_end = self.po_ptr[u2 + 1]
        cdef i64 a, b, i2, j2, x, y, x1, x2, key, count = 0
        self.stamp_now += 1
        while i < i_end and j < j_end:
            a = self.po_sym[i]
            b = self.po_sym[j]
            if a < b:
                i += 1
            elif b < a:
                j += 1
            else:
                i2 = i
                while i2 < i_end and self.po_sym[i2] == a:
                    i2 += 1
                j2 = j
                while j2 < j_end and self.po_sym[j2] == a:
                    j2 += 1
                for x in range(i, i2):
                    x1 = self.po_dst[x]
                    if self.inv[x1] or self.excluded[x1] or self.sigclass[x1] != c1:
                        continue
                    for y in range(j, j2):
                        x2 = self.po_dst[y]
                        if x1 == x2 or self.inv[x2] or self.excluded[x2] or self.sigclass[x2] != c2:
                            continue
                        key = x1 * self.n + x2
                        if self.stamp[key] == self.stamp_now:
                            continue
                        self.stamp[key] = self.stamp_now
                        self.reserve(at + count + 1)
                        self.buf[at + count] = key
                        count += 1
                i = i2
                j = j2
        return count

    cdef bint valid_root(self, i64 s1, i64 s2):
        if s1 == s2 or self.excluded[s1] or self.excluded[s2]:
            return False
        return self.disjoint[self.sigclass[s1] * self.nc + self.sigclass[s2]] != 0

    cdef i64 dfs(self, i64 s1, i64 s2, i64 depth, i64 budget,
                 i64[::1] fv1, i64[::1] fv2, i64[::1] fg, i64[::1] fpos, i64[::1] fend,
                 bint* exhausted) except? -1:
        cdef i64 c1 = self.sigclass[s1], c2 = self.sigclass[s2]
        cdef i64 n = self.n
        cdef i64 g = self.add(s1, s2)
        cdef i64 best = g, expansions = 0, top, key, v1, v2, ng, cnt
        exhausted[0] = False
        fv1[0] = s1
        fv2[0] = s2
        fg[0] = g
        fpos[0] = 0
        cnt = self.successors(s1, s2, c1, c2, 0) if depth > 0 else 0
        fend[0] = cnt
        top = 0
        while top >= 0:
            if exhausted[0] or fpos[top] >= fend[top]:
                self.remove(fv1[top], fv2[top])
                top -= 1
                continue
            key = self.buf[fpos[top]]
            fpos[top] += 1
            v1 = key // n
            v2 = key - v1 * n
            expansions += 1
            ng = fg[top] + self.add(v1, v2)
            if ng > best:
                best = ng
            if expansions >= budget:
                exhausted[0] = True
            top += 1
            fv1[top] = v1
            fv2[top] = v2
            fg[top] = ng
            fpos[top] = fend[top - 1]
            if top < depth:
                cnt = self.successors(v1, v2, c1, c2, fpos[top])
            else:
                cnt = 0
            fend[top] = fpos[top] + cnt
        return best

    def score_roots(self, roots, i64 depth, i64 budget):
        cdef i64[:, ::1] r = np.ascontiguousarray(np.asarray(roots, dtype=np.int64).reshape(-1, 2))
        cdef i64 m = r.shape[0], i
        cdef i64[::1] fv1 = np.empty(depth + 1, dtype=np.int64)
        cdef i64[::1] fv2 = np.empty(depth + 1, dtype=np.int64)
        cdef i64[::1] fg = np.empty(depth + 1, dtype=np.int64)
        cdef i64[::1] fpos = np.empty(depth + 1, dtype=np.int64)
        cdef i64[::1] fend = np.empty(depth + 1, dtype=np.int64)
        scores_arr = np.full(m, INVALID, dtype=np.int64)
        hits_arr = np.zeros(m, dtype=np.bool_)
        cdef i64[::1] scores = scores_arr
        cdef cnp.npy_bool[::1] hits = hits_arr
        cdef bint hit = False
        for i in range(m):
            if not self.valid_root(r[i, 0], r[i, 1]):
                continue
            scores[i] = self.dfs(r[i, 0], r[i, 1], depth, budget, fv1, fv2, fg, fpos, fend, &hit)
            hits[i] = hit
        return scores_arr, hits_arr


def gain_d_one(k, s1, s2, depth, budget):
    scores, hits = _Kernel(k).score_roots([(s1, s2)], depth, budget)
    return int(scores[0]), bool(hits[0])


def score_roots(k, roots, depth, budget):
    """Gain^d of each ``(s1, s2)`` index pair in ``roots``; returns (scores, exhausted flags)."""
    return _Kernel(k).score_roots(roots, depth, budget)


def gain_d_all(k, depth, budget):
    """Scores for every ordered pair; ``(s2, s1)`` mirrors ``(s1, s2)``."""
    cdef i64 n = k.n
    iu = np.triu_indices(n, 1)
    roots = np.stack(iu, axis=1) if n > 1 else np.zeros((0, 2), dtype=np.int64)
    found, hits = score_roots(k, roots, depth, budget)
    scores = np.full(n * n, INVALID, dtype=np.int64)
    scores[iu[0] * n + iu[1]] = found
    scores[iu[1] * n + iu[0]] = found
    return scores.tolist(), int(hits.sum())
