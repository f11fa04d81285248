# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels; semantics identical to ``_pykernels``."""
import numpy as np

cimport numpy as cnp
from libc.stdint cimport int8_t, int32_t, uint8_t

cnp.import_array()

cdef int32_t DIST_INF = 1 << 30

cdef enum:
    OP_FALSE = 0
    OP_TRUE = 1
    OP_EDGE = 2
    OP_EQ = 3
    OP_COLOR = 4
    OP_DIST = 5
    OP_NOT = 6
    OP_AND = 7
    OP_OR = 8
    OP_XOR = 9
    OP_IMPL = 10
    OP_EXISTS = 11
    OP_FORALL = 12


def all_pairs_bfs(int n, indptr, indices):
    cdef const int32_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int32)
    cdef const int32_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    out_arr = np.full((n, n), DIST_INF, dtype=np.int32)
    cdef int32_t[:, ::1] out = out_arr
    cdef int32_t[::1] queue = np.empty(max(n, 1), dtype=np.int32)
    cdef int s, head, tail, w, u, k, d
    with nogil:
        for s in range(n):
            out[s, s] = 0
            queue[0] = s
            head = 0
            tail = 1
            while head < tail:
                w = queue[head]
                head += 1
                d = out[s, w] + 1
                for k in range(ip[w], ip[w + 1]):
                    u = ix[k]
                    if out[s, u] == DIST_INF:
                        out[s, u] = d
                        queue[tail] = u
                        tail += 1
    return out_arr


cdef class Evaluator:
    """Evaluate a compiled :class:`~flipmc.logic.compile.Program`."""

    cdef const int32_t[::1] op, a0, a1, a2, kids, memo_row, memo_slot
    cdef int32_t[::1] assign
    cdef int8_t[:, ::1] memo
    cdef const uint8_t[:, ::1] adj, colors
    cdef const int32_t[:, ::1] dist
    cdef int n, root

    def __init__(self, prog):
        self.n = prog.n
        self.root = prog.root
        self.op = np.ascontiguousarray(prog.op, dtype=np.int32)
        self.a0 = np.ascontiguousarray(prog.a0, dtype=np.int32)
        self.a1 = np.ascontiguousarray(prog.a1, dtype=np.int32)
        self.a2 = np.ascontiguousarray(prog.a2, dtype=np.int32)
        self.kids = np.ascontiguousarray(prog.kids, dtype=np.int32)
        self.memo_row = np.ascontiguousarray(prog.memo_row, dtype=np.int32)
        self.memo_slot = np.ascontiguousarray(prog.memo_slot, dtype=np.int32)
        self.memo = np.full((max(prog.n_memo, 1), max(self.n, 1)), -1, dtype=np.int8)
        self.assign = np.array(prog.init, dtype=np.int32)
        self.adj = np.ascontiguousarray(prog.adj, dtype=np.uint8)
        self.colors = np.ascontiguousarray(prog.colors, dtype=np.uint8)
        self.dist = np.ascontiguousarray(prog.dist, dtype=np.int32)

    cdef int ev(self, int node) noexcept nogil:
        cdef int row = self.memo_row[node]
        cdef int slot, idx = 0
        cdef int res
        if row >= 0:
            slot = self.memo_slot[node]
            if slot >= 0:
                idx = self.assign[slot]
            res = self.memo[row, idx]
            if res >= 0:
                return res
        res = self.compute(node)
        if row >= 0:
            self.memo[row, idx] = <int8_t>res
        return res

    cdef int compute(self, int node) noexcept nogil:
        cdef int o = self.op[node]
        cdef int i, v, slot, body, want, saved, res
        if o == OP_EDGE:
            return self.adj[self.assign[self.a0[node]], self.assign[self.a1[node]]] != 0
        if o == OP_EQ:
            return self.assign[self.a0[node]] == self.assign[self.a1[node]]
        if o == OP_COLOR:
            return self.colors[self.a0[node], self.assign[self.a1[node]]] != 0
        if o == OP_DIST:
            return self.dist[self.assign[self.a1[node]], self.assign[self.a2[node]]] <= self.a0[node]
        if o == OP_NOT:
            return 1 - self.ev(self.a0[node])
        if o == OP_AND:
            for i in range(self.a0[node], self.a1[node]):
                if not self.ev(self.kids[i]):
                    return 0
            return 1
        if o == OP_OR:
            for i in range(self.a0[node], self.a1[node]):
                if self.ev(self.kids[i]):
                    return 1
            return 0
        if o == OP_XOR:
            return self.ev(self.a0[node]) ^ self.ev(self.a1[node])
        if o == OP_IMPL:
            if not self.ev(self.a0[node]):
                return 1
            return self.ev(self.a1[node])
        if o == OP_EXISTS or o == OP_FORALL:
            want = 1 if o == OP_EXISTS else 0
            slot = self.a0[node]
            body = self.a1[node]
            saved = self.assign[slot]
            res = 1 - want
            for v in range(self.n):
                self.assign[slot] = v
                if self.ev(body) == want:
                    res = want
                    break
            self.assign[slot] = saved
            return res
        return 1 if o == OP_TRUE else 0

    def holds(self, values=()):
        for i, v in enumerate(values):
            self.assign[i] = int(v)
        return bool(self.ev(self.root))

    def vector(self, int sx=0):
        out_arr = np.zeros(self.n, dtype=np.uint8)
        cdef uint8_t[::1] out = out_arr
        cdef int u
        with nogil:
            for u in range(self.n):
                self.assign[sx] = u
                out[u] = <uint8_t>self.ev(self.root)
        return out_arr

    def pairs(self, int sx=0, int sy=1):
        out_arr = np.zeros((self.n, self.n), dtype=np.uint8)
        cdef uint8_t[:, ::1] out = out_arr
        cdef int u, v
        with nogil:
            for u in range(self.n):
                self.assign[sx] = u
                for v in range(self.n):
                    self.assign[sy] = v
                    out[u, v] = <uint8_t>self.ev(self.root)
        return out_arr
