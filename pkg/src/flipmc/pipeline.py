"""Model checking on interpreted graphs through guarded flips.

Every candidate ``(S, R)`` yields a colored graph ``H_{S,R}`` (vertices
colored by their trace on ``S``, adjacency flipped per ``R``) and a sentence
``rho_{S,R}`` that undoes the flip inside the formula, so
``H |= rho`` iff ``H_{S,R} |= rho_{S,R}`` for every candidate.
"""
from __future__ import annotations

import functools
import itertools
import math
import random
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from flipmc.cliquewidth import BudgetError, local_cliquewidth
from flipmc.flipdecomp import decompose
from flipmc.graph import FlipSpec, Graph, apply_flip, traces
from flipmc.interpret import Interpretation, apply_interpretation, get_interpretation
from flipmc.logic import (
    And, Color, Formula, Or, Var, check, evaluate, free_vars, neq, rewrite_edges, to_text,
)

EXHAUSTIVE_MAX_S = 2


class PipelineError(ValueError):
    pass


class CandidateDisagreement(AssertionError):
    pass


def lam(mask: int) -> str:
    """Color name of trace label ``mask``."""
    return f"lam{mask}"


@dataclass(frozen=True)
class Candidate:
    S: tuple[int, ...]
    R: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "S", tuple(int(v) for v in self.S))
        object.__setattr__(self, "R", frozenset((int(a), int(b)) for a, b in self.R))
        top = 1 << len(self.S)
        for a, b in self.R:
            if (b, a) not in self.R:
                raise PipelineError(f"R is not symmetric: ({a},{b})")
            if not (0 <= a < top and 0 <= b < top):
                raise PipelineError(f"label pair ({a},{b}) outside 2^{len(self.S)}")

    @property
    def labels(self) -> range:
        return range(1 << len(self.S))

    def to_json(self) -> dict:
        return {"S": list(self.S), "R": sorted([list(p) for p in self.R])}


def _label_pairs(s: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(1 << s) for b in range(a, 1 << s)]


def _relation(pairs: Sequence[tuple[int, int]], chosen: int) -> frozenset[tuple[int, int]]:
    rel = set()
    for i, (a, b) in enumerate(pairs):
        if chosen >> i & 1:
            rel.add((a, b))
            rel.add((b, a))
    return frozenset(rel)


def count_candidates(n: int, s: int) -> int:
    total = 0
    for k in range(min(s, n) + 1):
        L = 1 << k
        total += math.comb(n, k) * 2 ** (L * (L + 1) // 2)
    return total


def enumerate_candidates(H: Graph, s: int, mode: str = "exhaustive", *,
                         pre_image: Graph | None = None, interp: Interpretation | str | None = None,
                         r: int = 1) -> Iterator[Candidate]:
    """Candidates in canonical order: by ``|S|``, then ``S`` lexicographically, then ``R`` as a bit pattern."""
    if s < 0:
        raise PipelineError("s must be non-negative")
    if mode == "witness":
        yield witness_candidate(H, pre_image, interp, r)
        return
    if mode != "exhaustive":
        raise PipelineError(f"unknown mode {mode!r}")
    if s > EXHAUSTIVE_MAX_S:
        raise PipelineError(f"exhaustive enumeration is capped at s <= {EXHAUSTIVE_MAX_S}, got s = {s}")
    for k in range(min(s, H.n) + 1):
        pairs = _label_pairs(k)
        for S in itertools.combinations(range(H.n), k):
            for chosen in range(1 << len(pairs)):
                yield Candidate(S, _relation(pairs, chosen))


def sample_candidates(H: Graph, s: int, count: int, seed: int) -> list[Candidate]:
    """``count`` uniformly drawn candidates with ``|S| = s`` (distinct vertices)."""
    if s > H.n:
        raise PipelineError(f"cannot pick {s} guard vertices from {H.n}")
    rng = random.Random(seed)
    pairs = _label_pairs(s)
    out = []
    for _ in range(count):
        S = tuple(sorted(rng.sample(range(H.n), s)))
        out.append(Candidate(S, _relation(pairs, rng.getrandbits(len(pairs)))))
    return out


def witness_candidate(H: Graph, G: Graph | None, interp: Interpretation | str | None,
                      r: int) -> Candidate:
    """The guard and flip relation of the decomposition of ``H = I(G)``."""
    return _witness(H, G, interp, r)[0]


def _witness(H, G, interp, r):
    if G is None or interp is None:
        raise PipelineError("witness mode needs the pre-image graph and the interpretation")
    I = get_interpretation(interp) if isinstance(interp, str) else interp
    if not apply_interpretation(G, I).same_edges(H):
        raise PipelineError(f"H is not the image of the pre-image under {I.name}")
    D = _decompose_cached(G, I, r)
    return Candidate(tuple(D.S_enum), D.R), D


@functools.lru_cache(maxsize=32)
def _decompose_cached(G: Graph, I: Interpretation, r: int):
    return decompose(G, I, r)


def build_H_SR(H: Graph, c: Candidate) -> Graph:
    """``H`` with trace colors ``lam<A>`` for every label ``A`` (empty when unrealized), flipped by ``R``."""
    for v in c.S:
        H.check_vertex(v)
    lab = traces(H, c.S)
    clash = sorted({lam(A) for A in c.labels} & set(H.colors))
    if clash:
        raise PipelineError(f"H already has colors {clash}")
    colors = {lam(A): [v for v in range(H.n) if lab[v] == A] for A in c.labels}
    return apply_flip(H, FlipSpec(lab, c.R)).expand(colors=colors)


def zeta(c: Candidate, x: str = "x", y: str = "y") -> Formula:
    vx, vy = Var(x), Var(y)
    pairs = sorted(c.R)
    body = [And((Color(lam(a), vx), Color(lam(b), vy))) for a, b in pairs]
    if not body:
        return Or(())
    return And((neq(vx, vy), Or(tuple(body)) if len(body) > 1 else body[0]))


def build_rho_SR(rho: Formula, c: Candidate) -> Formula:
    if free_vars(rho):
        raise PipelineError(f"rho must be a sentence; free variables {sorted(free_vars(rho))}")
    return rewrite_edges(rho, zeta(c))


@dataclass
class PipelineConfig:
    s: int = 1
    mode: str = "exhaustive"
    verify: bool = True
    workers: int = 1
    pre_image: Graph | None = None
    interp: Interpretation | str | None = None
    r: int = 1
    lcw_radius: int | None = None
    lcw_cap: int = 6
    race: bool = False


@dataclass
class CandidateResult:
    candidate: Candidate
    answer: bool
    agrees: bool | None
    lcw: int | str | None = None

    def to_json(self) -> dict:
        out = {**self.candidate.to_json(), "answer": self.answer, "agrees": self.agrees}
        if self.lcw is not None:
            out["lcw"] = self.lcw
        return out


@dataclass
class PipelineReport:
    answer: bool
    oracle_answer: bool | None
    candidates_run: int
    per_candidate: list[CandidateResult] = field(default_factory=list)
    witness_candidate: Candidate | None = None
    witness_is_flip: bool | None = None
    mode: str = "exhaustive"
    s: int = 0

    def to_json(self) -> dict:
        return {
            "answer": self.answer,
            "oracle_answer": self.oracle_answer,
            "candidates_run": self.candidates_run,
            "mode": self.mode,
            "s": self.s,
            "witness_candidate": self.witness_candidate.to_json() if self.witness_candidate else None,
            "witness_is_flip": self.witness_is_flip,
            "per_candidate": [c.to_json() for c in self.per_candidate],
        }


def run_candidate(H: Graph, rho: Formula, c: Candidate, lcw_radius: int | None = None,
                  lcw_cap: int = 6) -> tuple[bool, int | str | None]:
    HSR = build_H_SR(H, c)
    answer = check(HSR, build_rho_SR(rho, c))
    measured: int | str | None = None
    if lcw_radius is not None:
        try:
            value = local_cliquewidth(HSR, lcw_radius, lcw_cap).value
            measured = value if isinstance(value, int) else value.to_json()
        except BudgetError:
            measured = "budget"
    return answer, measured


def model_check(H: Graph, rho: Formula, cfg: PipelineConfig | None = None) -> PipelineReport:
    """Decide ``H |= rho`` by running the kernel on candidate pairs ``(H_{S,R}, rho_{S,R})``.

    In verification mode every candidate runs and must agree with the
    reference evaluator on ``(H, rho)``; otherwise the first candidate in
    canonical order answers (or the first to finish, with ``race``).
    """
    cfg = cfg or PipelineConfig()
    if free_vars(rho):
        raise PipelineError(f"rho must be a sentence; free variables {sorted(free_vars(rho))}")
    wit, witness_is_flip = None, None
    if cfg.mode == "witness":
        wit, D = _witness(H, cfg.pre_image, cfg.interp, cfg.r)
        witness_is_flip = build_H_SR(H, wit).same_edges(D.FH)
        cands = [wit]
    else:
        cands = list(enumerate_candidates(H, cfg.s, cfg.mode))

    job = lambda c: run_candidate(H, rho, c, cfg.lcw_radius, cfg.lcw_cap)  # noqa: E731
    if not cfg.verify:
        if cfg.race and len(cands) > 1:
            with ThreadPoolExecutor(max(cfg.workers, 1)) as pool:
                futures = {pool.submit(job, c): c for c in cands}
                done, pending = wait(futures, return_when=FIRST_COMPLETED)
                for f in pending:
                    f.cancel()
                first = next(iter(done))
                ans, meas = first.result()
                chosen = futures[first]
        else:
            chosen = cands[0]
            ans, meas = job(chosen)
        return PipelineReport(ans, None, 1, [CandidateResult(chosen, ans, None, meas)], wit,
                              witness_is_flip, cfg.mode, cfg.s)

    oracle = evaluate(H, rho)
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(job, cands))
    else:
        results = [job(c) for c in cands]
    per = [CandidateResult(c, a, a == oracle, m) for c, (a, m) in zip(cands, results)]
    for res in per:
        if not res.agrees:
            raise CandidateDisagreement(
                f"candidate S={list(res.candidate.S)} R={sorted(res.candidate.R)} answers "
                f"{res.answer}, oracle says {oracle} for {to_text(rho)}"
            )
    return PipelineReport(per[0].answer, oracle, len(per), per, wit, witness_is_flip, cfg.mode, cfg.s)
