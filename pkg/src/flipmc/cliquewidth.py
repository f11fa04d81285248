"""k-expressions, exact cliquewidth of small graphs, and local cliquewidth.

The exact search works on modules first: cliquewidth is the maximum over the
quotient graphs of the modular decomposition, so only prime quotients reach
the subset dynamic program.  There, a sub-expression building ``G[X]`` is
summarized by ``X`` alone: its labels can always be merged down to the classes
of vertices with equal neighbourhoods outside ``X``.
"""
from __future__ import annotations

import itertools
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from flipmc.graph import Graph, _bits, ball, induced_subgraph

BALL_BUDGET = 10
PRIME_LIMIT = 12


# expressions


@dataclass(frozen=True)
class Create:
    label: int
    vertex: int | None = None


@dataclass(frozen=True)
class Union:
    left: "KExpr"
    right: "KExpr"


@dataclass(frozen=True)
class Join:
    i: int
    j: int
    body: "KExpr"


@dataclass(frozen=True)
class Relabel:
    i: int
    j: int
    body: "KExpr"


KExpr = Create | Union | Join | Relabel


class KExprError(ValueError):
    pass


def to_text(e: KExpr) -> str:
    if isinstance(e, Create):
        return f"v({e.label})"
    if isinstance(e, Union):
        return f"u({to_text(e.left)},{to_text(e.right)})"
    if isinstance(e, Join):
        return f"j({e.i},{e.j},{to_text(e.body)})"
    return f"r({e.i},{e.j},{to_text(e.body)})"


_KTOKEN = re.compile(r"\s*(?:(\d+)|([vujr])|([(),]))")


def parse_kexpr(text: str) -> KExpr:
    toks: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _KTOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise KExprError(f"unexpected character {text[pos]!r} at offset {pos}")
        kind = "int" if m.group(1) else "op" if m.group(2) else "punct"
        toks.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    i = 0

    def expect(s: str):
        nonlocal i
        if toks[i][1] != s or toks[i][0] == "eof":
            raise KExprError(f"expected {s!r} at offset {toks[i][2]}")
        i += 1

    def number() -> int:
        nonlocal i
        if toks[i][0] != "int":
            raise KExprError(f"expected a label at offset {toks[i][2]}")
        i += 1
        return int(toks[i - 1][1])

    def expr() -> KExpr:
        nonlocal i
        kind, op, at = toks[i]
        if kind != "op":
            raise KExprError(f"expected v, u, j or r at offset {at}")
        i += 1
        expect("(")
        if op == "v":
            out: KExpr = Create(number())
        elif op == "u":
            left = expr()
            expect(",")
            out = Union(left, expr())
        else:
            a = number()
            expect(",")
            b = number()
            expect(",")
            body = expr()
            out = Join(a, b, body) if op == "j" else Relabel(a, b, body)
        expect(")")
        return out

    e = expr()
    if toks[i][0] != "eof":
        raise KExprError(f"trailing input at offset {toks[i][2]}")
    return e


def leaves(e: KExpr) -> Iterator[Create]:
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Create):
            yield node
        elif isinstance(node, Union):
            stack.append(node.right)
            stack.append(node.left)
        else:
            stack.append(node.body)


def labels_used(e: KExpr) -> set[int]:
    out: set[int] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Create):
            out.add(node.label)
        elif isinstance(node, Union):
            stack += [node.left, node.right]
        else:
            out |= {node.i, node.j}
            stack.append(node.body)
    return out


def width(e: KExpr) -> int:
    """Number of distinct labels the expression mentions."""
    return len(labels_used(e))


def eval_kexpression(e: KExpr, k: int | None = None) -> Graph:
    """The graph built by ``e``; vertex ``i`` is the ``i``-th leaf from the left."""
    if k is not None:
        bad = sorted(lab for lab in labels_used(e) if not 1 <= lab <= k)
        if bad:
            raise KExprError(f"labels {bad} outside 1..{k}")
    # iterative post-order; each frame yields (label per vertex, edges) over leaf positions
    counter = itertools.count()
    results: list[tuple[dict[int, int], set[tuple[int, int]]]] = []
    stack: list[tuple[KExpr, bool]] = [(e, False)]
    while stack:
        node, done = stack.pop()
        if isinstance(node, Create):
            if node.label < 1:
                raise KExprError(f"label {node.label} must be positive")
            results.append(({next(counter): node.label}, set()))
        elif not done:
            stack.append((node, True))
            if isinstance(node, Union):
                stack.append((node.right, False))
                stack.append((node.left, False))
            else:
                stack.append((node.body, False))
        elif isinstance(node, Union):
            lab2, e2 = results.pop()
            lab1, e1 = results.pop()
            results.append(({**lab1, **lab2}, e1 | e2))
        elif isinstance(node, Join):
            if node.i == node.j:
                raise KExprError(f"join({node.i},{node.i}) is not allowed")
            lab, edges = results.pop()
            a = [v for v, x in lab.items() if x == node.i]
            b = [v for v, x in lab.items() if x == node.j]
            edges = edges | {(min(u, v), max(u, v)) for u in a for v in b}
            results.append((lab, edges))
        else:
            lab, edges = results.pop()
            results.append(({v: (node.j if x == node.i else x) for v, x in lab.items()}, edges))
    lab, edges = results.pop()
    return Graph.from_edges(len(lab), sorted(edges))


def realizes(e: KExpr, G: Graph) -> bool:
    """Does ``e`` build ``G`` exactly, with leaf vertex tags as the identification?"""
    order = [leaf.vertex for leaf in leaves(e)]
    if sorted(order) != list(range(G.n)):
        return False
    built = eval_kexpression(e)
    return all(
        built.has_edge(i, j) == G.has_edge(order[i], order[j])
        for i in range(built.n) for j in range(i + 1, built.n)
    )


# exact cliquewidth


@dataclass(frozen=True)
class Exceeds:
    cap: int

    def __str__(self):
        return f">{self.cap}"

    def to_json(self):
        return f">{self.cap}"


@dataclass
class CWResult:
    value: int
    expr: KExpr


class BudgetError(ValueError):
    pass


def _components(adj: Sequence[int], X: int) -> list[int]:
    comps = []
    rest = X
    while rest:
        seed = rest & -rest
        comp = frontier = seed
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= adj[v]
            frontier = nxt & X & ~comp
            comp |= frontier
        comps.append(comp)
        rest &= ~comp
    return comps


def _module_closure(adj: Sequence[int], X: int, seed: int) -> int:
    """Smallest module of ``G[X]`` containing ``seed``."""
    M = seed
    while True:
        grow = 0
        for v in _bits(X & ~M):
            seen = adj[v] & M
            if seen and seen != M:
                grow |= 1 << v
        if not grow:
            return M
        M |= grow


def _prime_dp(adj: Sequence[int], verts: list[int]) -> CWResult:
    """Exact cliquewidth of ``G[verts]`` by dynamic programming over vertex subsets."""
    n = len(verts)
    local = [0] * n
    pos = {v: i for i, v in enumerate(verts)}
    for i, v in enumerate(verts):
        for u in _bits(adj[v]):
            if u in pos:
                local[i] |= 1 << pos[u]
    full = (1 << n) - 1
    masks = _Masks(local)

    def classes(X: int) -> list[int]:
        out: dict[int, int] = {}
        outside = full & ~X
        for v in _bits(X):
            key = local[v] & outside
            out[key] = out.get(key, 0) | (1 << v)
        return list(out.values())

    cls = {}
    best: dict[int, tuple[int, tuple | None]] = {}
    for v in range(n):
        best[1 << v] = (1, None)
    for X in sorted(range(1, full + 1), key=int.bit_count):
        if X.bit_count() < 2:
            continue
        cx = cls[X] = classes(X)
        has_edge = any(local[v] & X for v in _bits(X))
        floor = max(len(cx), 2 if has_edge else 1)
        low = X & -X
        rest = X & ~low
        top = (None, None)
        value = None
        # Y contains the lowest vertex of X; enumerate submasks of the rest
        sub = rest
        while True:
            Y = low | sub
            Z = X & ~Y
            if Z:
                fy, fz = best[Y][0], best[Z][0]
                bound = max(fy, fz)
                if value is None or bound < value:
                    cy = cls.get(Y) or classes(Y)
                    cz = cls.get(Z) or classes(Z)
                    if value is not None and max(len(cy), len(cz)) >= value:
                        bound = value
                if value is None or bound < value:
                    width, sigma = _best_union(masks, cx, cy, cz, Y, Z)
                    cand = max(bound, width)
                    if value is None or cand < value:
                        value, top = cand, (Y, Z, sigma)
            if sub == 0 or value == floor:
                break
            sub = (sub - 1) & rest
        best[X] = (value, top)
    for v in range(n):
        cls.setdefault(1 << v, [1 << v])

    def build(X: int, want: dict[int, int], k: int) -> KExpr:
        """Expression for ``G[X]`` ending with class ``c`` of ``X`` carrying label ``want[c]``."""
        if X.bit_count() == 1:
            return Create(want[X], verts[X.bit_length() - 1])
        Y, Z, sigma = best[X][1]
        cy, cz = cls[Y], cls[Z]
        groups = _union_groups(cy, cz, sigma)
        # union-time labels: each X-class keeps its wanted label on one group
        xcls = cls[X]
        owner = {g: next(c for c in xcls if g & c == g) for g in groups}
        label: dict[int, int] = {}
        used = set(want.values())
        free = (lab for lab in range(1, k + 1) if lab not in used)
        taken_rep: set[int] = set()
        for g in groups:
            c = owner[g]
            if c not in taken_rep:
                label[g] = want[c]
                taken_rep.add(c)
            else:
                label[g] = next(free)
        want_y = {c: label[next(g for g in groups if c & g == c)] for c in cy}
        want_z = {c: label[next(g for g in groups if c & g == c)] for c in cz}
        e: KExpr = Union(build(Y, want_y, k), build(Z, want_z, k))
        for a, b in _needed_joins(masks, groups, Y, Z):
            e = Join(label[a], label[b], e)
        for g in groups:
            target = want[owner[g]]
            if label[g] != target:
                e = Relabel(label[g], target, e)
        return e

    value = best[full][0]
    root_classes = cls[full] if n > 1 else [full]
    expr = build(full, {c: 1 for c in root_classes}, value)
    return CWResult(value, expr)


def _union_groups(cy: list[int], cz: list[int], sigma: tuple[tuple[int, int], ...]) -> list[int]:
    paired_y = {a for a, _ in sigma}
    paired_z = {b for _, b in sigma}
    groups = [a | b for a, b in sigma]
    groups += [a for a in cy if a not in paired_y]
    groups += [b for b in cz if b not in paired_z]
    return groups


class _Masks:
    """Neighbourhood unions and intersections of vertex sets, cached."""

    def __init__(self, local: Sequence[int]):
        self.local = local
        self._any: dict[int, int] = {}
        self._all: dict[int, int] = {}

    def any(self, S: int) -> int:
        out = self._any.get(S)
        if out is None:
            out = 0
            for v in _bits(S):
                out |= self.local[v]
            self._any[S] = out
        return out

    def all(self, S: int) -> int:
        out = self._all.get(S)
        if out is None:
            out = -1
            for v in _bits(S):
                out &= self.local[v] | (1 << v)
            self._all[S] = out
        return out


def _needed_joins(m: _Masks, groups: list[int], Y: int, Z: int) -> list[tuple[int, int]]:
    out = []
    for a, b in itertools.combinations(groups, 2):
        if m.any(a & Y) & b & Z or m.any(a & Z) & b & Y:
            out.append((a, b))
    return out


def _union_valid(m: _Masks, groups: list[int], Y: int, Z: int) -> bool:
    for g in groups:
        # one label cannot be joined with itself
        if m.any(g & Y) & g & Z:
            return False
    for a, b in _needed_joins(m, groups, Y, Z):
        if m.all(a) & b != b:
            return False
    return True


def _best_union(m: _Masks, cx, cy, cz, Y, Z) -> tuple[int, tuple]:
    """Fewest labels needed at the union of ``G[Y]`` and ``G[Z]``, with the identification used.

    Only classes that end up in the same class of ``X`` may share a label.
    """
    owner_y = [next(i for i, c in enumerate(cx) if a & c) for a in cy]
    owner_z = [next(i for i, c in enumerate(cx) if b & c) for b in cz]
    options = [
        (i, j) for i in range(len(cy)) for j in range(len(cz))
        if owner_y[i] == owner_z[j] and not m.any(cy[i]) & cz[j]
    ]
    base = len(cy) + len(cz)
    # search matchings, larger first, stopping at the first valid one
    for size in range(min(len(cy), len(cz), len(options)), 0, -1):
        for combo in itertools.combinations(options, size):
            if len({i for i, _ in combo}) < size or len({j for _, j in combo}) < size:
                continue
            sigma = tuple((cy[i], cz[j]) for i, j in combo)
            if _union_valid(m, _union_groups(cy, cz, sigma), Y, Z):
                return base - size, sigma
    return base, ()


def _greedy_linear(adj: Sequence[int], verts: list[int]) -> CWResult:
    """Upper bound: add vertices one by one, keeping one label per outside-neighbourhood class."""
    X = sum(1 << v for v in verts)
    done = 0
    key: dict[int, int] = {}  # label -> neighbourhood among unprocessed vertices
    expr: KExpr | None = None
    best = 1

    def cost(v: int) -> int:
        R = X & ~done & ~(1 << v)
        return len({adj[u] & R for u in _bits(done | 1 << v)})

    rest = sorted(verts)
    while rest:
        v = min(rest, key=lambda u: (cost(u), u))
        rest.remove(v)
        new = 1
        while new in key:
            new += 1
        best = max(best, len(key) + 1)
        leaf = Create(new, v)
        expr = leaf if expr is None else Union(expr, leaf)
        for lab, nb in sorted(key.items()):
            if nb >> v & 1:
                expr = Join(new, lab, expr)
        done |= 1 << v
        key = {lab: nb & ~(1 << v) for lab, nb in key.items()}
        key[new] = adj[v] & X & ~done
        merged: dict[int, int] = {}
        for lab in sorted(key):
            target = merged.setdefault(key[lab], lab)
            if target != lab:
                expr = Relabel(lab, target, expr)
        key = {lab: nb for nb, lab in merged.items()}
    (last,) = key
    if last != 1:
        expr = Relabel(last, 1, expr)
    return CWResult(best, expr)


def _cw(adj: Sequence[int], X: int, prime_limit: int, heuristic: bool = False) -> CWResult:
    """Cliquewidth of ``G[X]`` with an expression ending in the single label 1.

    With ``heuristic``, prime quotients above ``prime_limit`` get a greedy
    linear expression, so the value is only an upper bound.
    """
    if X.bit_count() == 1:
        return CWResult(1, Create(1, X.bit_length() - 1))
    comps = _components(adj, X)
    if len(comps) > 1:
        parts = [_cw(adj, c, prime_limit, heuristic) for c in comps]
        e = parts[0].expr
        for p in parts[1:]:
            e = Union(e, p.expr)
        return CWResult(max(p.value for p in parts), e)
    co = [0] * len(adj)
    for v in _bits(X):
        co[v] = X & ~adj[v] & ~(1 << v)
    cocomps = _components(co, X)
    if len(cocomps) > 1:
        parts = [_cw(adj, c, prime_limit, heuristic) for c in cocomps]
        e = parts[0].expr
        for p in parts[1:]:
            e = Relabel(2, 1, Join(1, 2, Union(e, Relabel(1, 2, p.expr))))
        return CWResult(max(2, *(p.value for p in parts)), e)
    # G[X] and its complement are connected: maximal strong modules partition X
    verts = list(_bits(X))
    modules: list[int] = []
    for v in verts:
        if any(m >> v & 1 for m in modules):
            continue
        M = 1 << v
        for u in verts:
            if u != v and not M >> u & 1:
                closure = _module_closure(adj, X, (1 << v) | (1 << u))
                if closure != X:
                    M |= closure
        modules.append(M)
    reps = [m & -m for m in modules]
    rep_ids = [r.bit_length() - 1 for r in reps]
    if len(rep_ids) <= prime_limit:
        quotient = _prime_dp(adj, rep_ids)
    elif heuristic:
        quotient = _greedy_linear(adj, rep_ids)
    else:
        raise BudgetError(f"prime quotient on {len(rep_ids)} vertices exceeds limit {prime_limit}")
    inner = {rep_ids[i]: _cw(adj, m, prime_limit, heuristic) for i, m in enumerate(modules)}

    def substitute(e: KExpr) -> KExpr:
        if isinstance(e, Create):
            sub = inner[e.vertex]
            return sub.expr if e.label == 1 else Relabel(1, e.label, sub.expr)
        if isinstance(e, Union):
            return Union(substitute(e.left), substitute(e.right))
        return type(e)(e.i, e.j, substitute(e.body))

    value = max(quotient.value, *(r.value for r in inner.values()))
    return CWResult(value, substitute(quotient.expr))


def cliquewidth(G: Graph, prime_limit: int = PRIME_LIMIT) -> CWResult:
    """Exact cliquewidth with a witness expression whose leaves carry vertex ids."""
    if G.n == 0:
        raise ValueError("cliquewidth of the empty graph is undefined")
    return _cw(G.adj, (1 << G.n) - 1, prime_limit)


def cliquewidth_upper(G: Graph, prime_limit: int = PRIME_LIMIT) -> CWResult:
    """Upper bound from the modular decomposition, exact on prime quotients up to ``prime_limit``."""
    if G.n == 0:
        raise ValueError("cliquewidth of the empty graph is undefined")
    return _cw(G.adj, (1 << G.n) - 1, prime_limit, heuristic=True)


def cliquewidth_exact(G: Graph, k_cap: int, prime_limit: int = PRIME_LIMIT) -> int | Exceeds:
    if G.n == 0:
        return 0
    value = cliquewidth(G, prime_limit).value
    return value if value <= k_cap else Exceeds(k_cap)


# local cliquewidth


@dataclass
class LocalCW:
    value: int | Exceeds
    per_vertex: list[int | Exceeds | None]
    ball_sizes: list[int]
    upper_bounds: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        enc = lambda x: x.to_json() if isinstance(x, Exceeds) else x  # noqa: E731
        out = {
            "value": enc(self.value),
            "per_vertex": [enc(x) for x in self.per_vertex],
            "max_ball": max(self.ball_sizes, default=0),
        }
        if self.upper_bounds:
            # heuristic values for oversized balls; not part of ``value``
            out["upper_bounds"] = {str(v): b for v, b in sorted(self.upper_bounds.items())}
        return out


def local_cliquewidth(G: Graph, r: int, k_cap: int, budget: int = BALL_BUDGET,
                      workers: int = 1, heuristic: bool = False) -> LocalCW:
    """``max`` over ``v`` of the cliquewidth of the radius-``r`` ball around ``v``.

    Balls above ``budget`` raise :class:`BudgetError`, unless ``heuristic`` is
    set: then they get a greedy upper bound in ``upper_bounds`` and are left
    out of ``value``.
    """
    balls = [ball(G, v, r) for v in range(G.n)]
    oversized = [v for v, B in enumerate(balls) if len(B) > budget]
    if oversized and not heuristic:
        v = oversized[0]
        raise BudgetError(f"ball of radius {r} around vertex {v} has {len(balls[v])} > {budget} vertices")
    cache: dict[tuple, int | Exceeds] = {}

    def one(B) -> int | Exceeds | None:
        if len(B) > budget:
            return None
        sub = induced_subgraph(G, B)
        key = _cheap_key(sub)
        if key not in cache:
            cache[key] = cliquewidth_exact(sub, k_cap)
        return cache[key]

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            per = list(pool.map(one, balls))
    else:
        per = [one(B) for B in balls]
    exact = [p for p in per if p is not None]
    finite = [p for p in exact if not isinstance(p, Exceeds)]
    value: int | Exceeds = Exceeds(k_cap) if len(finite) < len(exact) else max(finite, default=0)
    upper = {v: cliquewidth_upper(induced_subgraph(G, balls[v]), budget).value for v in oversized}
    return LocalCW(value, per, [len(B) for B in balls], upper)


def _cheap_key(G: Graph) -> tuple:
    """Exact-identity cache key (no isomorphism reduction)."""
    return (G.n, G.adj)
