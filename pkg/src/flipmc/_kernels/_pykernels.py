"""Pure-Python kernels; semantics identical to ``_ckernels.pyx``."""
from __future__ import annotations

import sys

import numpy as np

DIST_INF = 2**30

(OP_FALSE, OP_TRUE, OP_EDGE, OP_EQ, OP_COLOR, OP_DIST,
 OP_NOT, OP_AND, OP_OR, OP_XOR, OP_IMPL, OP_EXISTS, OP_FORALL) = range(13)


def all_pairs_bfs(n, indptr, indices):
    indptr = np.asarray(indptr).tolist()
    indices = np.asarray(indices).tolist()
    out = np.full((n, n), DIST_INF, dtype=np.int32)
    for s in range(n):
        row = [DIST_INF] * n
        row[s] = 0
        queue = [s]
        head = 0
        while head < len(queue):
            w = queue[head]
            head += 1
            d = row[w] + 1
            for k in range(indptr[w], indptr[w + 1]):
                u = indices[k]
                if row[u] == DIST_INF:
                    row[u] = d
                    queue.append(u)
        out[s] = row
    return out


class Evaluator:
    """Evaluate a compiled :class:`~flipmc.logic.compile.Program`."""

    def __init__(self, prog):
        self.n = prog.n
        self.root = prog.root
        self.op = prog.op.tolist()
        self.a0 = prog.a0.tolist()
        self.a1 = prog.a1.tolist()
        self.a2 = prog.a2.tolist()
        self.kids = prog.kids.tolist()
        self.memo_row = prog.memo_row.tolist()
        self.memo_slot = prog.memo_slot.tolist()
        self.memo = [[-1] * max(self.n, 1) for _ in range(prog.n_memo)]
        self.assign = prog.init.tolist()
        self.adj = prog.adj.astype(bool).tolist()
        self.colors = prog.colors.astype(bool).tolist()
        self.dist = prog.dist.tolist()
        depth = 4 * len(self.op) + 1000
        if sys.getrecursionlimit() < depth:
            sys.setrecursionlimit(depth)

    def _ev(self, node):
        row = self.memo_row[node]
        if row >= 0:
            slot = self.memo_slot[node]
            idx = self.assign[slot] if slot >= 0 else 0
            hit = self.memo[row][idx]
            if hit >= 0:
                return hit
        res = self._compute(node)
        if row >= 0:
            self.memo[row][idx] = res
        return res

    def _compute(self, node):
        o = self.op[node]
        a = self.assign
        if o == OP_EDGE:
            return int(self.adj[a[self.a0[node]]][a[self.a1[node]]])
        if o == OP_EQ:
            return int(a[self.a0[node]] == a[self.a1[node]])
        if o == OP_COLOR:
            return int(self.colors[self.a0[node]][a[self.a1[node]]])
        if o == OP_DIST:
            return int(self.dist[a[self.a1[node]]][a[self.a2[node]]] <= self.a0[node])
        if o == OP_NOT:
            return 1 - self._ev(self.a0[node])
        if o == OP_AND:
            for i in range(self.a0[node], self.a1[node]):
                if not self._ev(self.kids[i]):
                    return 0
            return 1
        if o == OP_OR:
            for i in range(self.a0[node], self.a1[node]):
                if self._ev(self.kids[i]):
                    return 1
            return 0
        if o == OP_XOR:
            return self._ev(self.a0[node]) ^ self._ev(self.a1[node])
        if o == OP_IMPL:
            return int(not self._ev(self.a0[node]) or self._ev(self.a1[node]))
        if o == OP_EXISTS or o == OP_FORALL:
            want = 1 if o == OP_EXISTS else 0
            slot, body = self.a0[node], self.a1[node]
            saved = a[slot]
            res = 1 - want
            for v in range(self.n):
                a[slot] = v
                if self._ev(body) == want:
                    res = want
                    break
            a[slot] = saved
            return res
        return 1 if o == OP_TRUE else 0

    def holds(self, values=()):
        for i, v in enumerate(values):
            self.assign[i] = int(v)
        return bool(self._ev(self.root))

    def vector(self, sx=0):
        out = np.zeros(self.n, dtype=np.uint8)
        for u in range(self.n):
            self.assign[sx] = u
            out[u] = self._ev(self.root)
        return out

    def pairs(self, sx=0, sy=1):
        out = np.zeros((self.n, self.n), dtype=np.uint8)
        for u in range(self.n):
            self.assign[sx] = u
            for v in range(self.n):
                self.assign[sy] = v
                out[u, v] = self._ev(self.root)
        return out
