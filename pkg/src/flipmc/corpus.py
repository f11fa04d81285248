"""Experiment corpus and the suite runner behind ``flipmc suite``."""
from __future__ import annotations

import dataclasses
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from flipmc.flipdecomp import decompose, toggled, verify_decomposition, without_dist
from flipmc.generators import generate
from flipmc.graph import FlipSpec, Graph, apply_flip
from flipmc.interpret import (
    Interpretation, apply_interpretation, get_interpretation, instance,
)
from flipmc.locality import check_r_generic, refine_partition
from flipmc.logic import Formula, parse
from flipmc.pipeline import PipelineConfig, model_check
from flipmc.slemma import build_s_set, verify_s_set

INTERPRETATIONS = ("identity", "complement", "square", "power-3")

BATTERY_TEXT = (
    ("triangle", "exists x. exists y. exists z. E(x,y) & E(y,z) & E(x,z)"),
    ("dominating-vertex", "exists x. forall y. x = y | E(x,y)"),
    ("diameter-2", "forall x. forall y. x = y | E(x,y) | exists z. E(x,z) & E(z,y)"),
    ("has-edge", "exists x. exists y. E(x,y)"),
    ("no-isolated", "forall x. exists y. E(x,y)"),
    ("isolated", "exists x. forall y. ~E(x,y)"),
    ("independent-3",
     "exists x. exists y. exists z. x != y & y != z & x != z & ~E(x,y) & ~E(y,z) & ~E(x,z)"),
    ("twins", "exists x. exists y. x != y & forall z. ~(E(x,z) ^ E(y,z))"),
    ("edges-in-triangles", "forall x. forall y. E(x,y) -> exists z. E(x,z) & E(y,z)"),
    ("induced-p3", "exists x. exists y. exists z. E(x,y) & E(y,z) & ~E(x,z) & x != z"),
    ("marked-edge", "flag(on) & exists x. U_mark(x) & exists y. U_mark(y) & E(x,y)"),
    ("marked-dominate", "flag(on) -> forall x. U_mark(x) | exists y. E(x,y) & U_mark(y)"),
)


def battery() -> list[tuple[str, Formula]]:
    return [(name, parse(text)) for name, text in BATTERY_TEXT]


def mark(H: Graph, seed: int = 0) -> Graph:
    """``H`` with the color ``mark`` on a seeded half of the vertices and flag ``on`` set."""
    rng = random.Random(seed)
    return H.expand(colors={"mark": [v for v in range(H.n) if rng.random() < 0.5]},
                    flags={"on": True})


@dataclass(frozen=True)
class Entry:
    name: str
    kind: str
    params: Mapping[str, Any]
    interp: str | Mapping[str, str] = "identity"
    r: tuple[int, ...] = (1, 2)
    seed: int = 0
    colors: Mapping[str, Sequence[int]] = field(default_factory=dict)
    mutation: str | None = None

    def graph(self) -> Graph:
        G = generate(self.kind, self.params)
        return G.expand(colors=self.colors) if self.colors else G

    def interpretation(self) -> Interpretation:
        if isinstance(self.interp, str):
            return get_interpretation(self.interp)
        return Interpretation.from_text(self.interp["phi"], self.interp.get("delta", "true"),
                                        self.interp.get("name", "custom"))

    def to_json(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "params": dict(self.params),
               "interp": self.interp if isinstance(self.interp, str) else dict(self.interp),
               "r": list(self.r), "seed": self.seed}
        if self.colors:
            out["colors"] = {k: list(v) for k, v in self.colors.items()}
        if self.mutation:
            out["mutation"] = self.mutation
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Entry":
        return cls(
            name=data["name"], kind=data["kind"], params=dict(data.get("params", {})),
            interp=data.get("interp", "identity"), r=tuple(data.get("r", (1, 2))),
            seed=int(data.get("seed", 0)), colors=dict(data.get("colors", {})),
            mutation=data.get("mutation"),
        )


def _graph_specs() -> list[tuple[str, str, dict]]:
    specs = [(f"path{n}", "path", {"n": n}) for n in range(20, 61, 10)]
    specs += [(f"grid{k}", "grid", {"n": k}) for k in range(4, 9)]
    specs += [(f"clique{n}", "clique", {"n": n}) for n in range(3, 9)]
    specs += [(f"half{n}", "half_graph", {"n": n}) for n in range(3, 9)]
    specs += [(f"random{n}s{seed}", "random", {"n": n, "p": 0.3, "seed": seed})
              for n in (8, 12, 16) for seed in (0, 1)]
    return specs


def default_corpus() -> list[Entry]:
    return [
        Entry(f"{gname}/{interp}", kind, params, interp, seed=i)
        for i, (gname, kind, params) in enumerate(_graph_specs())
        for interp in INTERPRETATIONS
    ]


def planted_sset_violation() -> Entry:
    """Far apart red ends joined by the interpretation; the empty guard cannot separate them."""
    return Entry(
        "planted/red-ends", "path", {"n": 20},
        {"phi": "x != y & (E(x,y) | U_red(x) & U_red(y))", "name": "red-ends"},
        r=(1,), colors={"red": [0, 19]}, mutation="empty-guard",
    )


# checks: each returns (ok, detail dict)


def check_sset(e: Entry, G: Graph, I: Interpretation, r: int) -> tuple[bool, dict]:
    inst = instance(G, I)
    E, dist = inst.E, inst.dist
    P = refine_partition(E, dist, r)
    ss = build_s_set(E, dist, P, r)
    S = [] if e.mutation == "empty-guard" else ss.S
    bad = verify_s_set(E, dist, S, 5 * r)
    ok = bad is None and ss.within_bound
    return ok, {"size": len(S), "bound": ss.bound, "counterexample": list(bad) if bad else None}


def check_decomposition(e: Entry, G: Graph, I: Interpretation, r: int) -> tuple[bool, dict]:
    D = decompose(G, I, r)
    if e.mutation == "toggle-r":
        D = toggled(D)
    elif e.mutation == "drop-dist":
        D = without_dist(D)
    checks = verify_decomposition(D)
    return all(c.ok for c in checks), {"checks": [c.to_json() for c in checks],
                                       "S_size": len(D.S_enum)}


def check_refine(e: Entry, G: Graph, I: Interpretation, r: int) -> tuple[bool, dict]:
    inst = instance(G, I)
    P = refine_partition(inst.E, inst.dist, r)
    bad = check_r_generic(inst.E, inst.dist, P, r)
    return bad is None, {"cells": len(P), "violation": list(bad) if bad else None}


def check_mc(e: Entry, G: Graph, I: Interpretation, r: int) -> tuple[bool, dict]:
    H = mark(apply_interpretation(G, I), e.seed)
    answers = {}
    for name, rho in battery():
        rep = model_check(H, rho, PipelineConfig(mode="witness", pre_image=G, interp=I, r=r))
        if rep.answer != rep.oracle_answer:
            return False, {"sentence": name, "answer": rep.answer, "oracle": rep.oracle_answer}
        answers[name] = rep.answer
    return True, {"answers": answers}


def check_flip(e: Entry, G: Graph, I: Interpretation, r: int) -> tuple[bool, dict]:
    H = apply_interpretation(G, I)
    rng = random.Random(e.seed * 1000 + r)
    m = rng.randint(1, 4)
    labels = [rng.randrange(m) for _ in range(H.n)]
    rel = [(a, b) for a in range(m) for b in range(a, m) if rng.random() < 0.5]
    f = FlipSpec.symmetric(labels, rel)
    return apply_flip(apply_flip(H, f), f) == H, {"cells": m, "pairs": len(rel)}


CHECKS: dict[str, tuple[Callable, int]] = {
    # name -> (check, largest |V(G)| it runs on)
    "refine": (check_refine, 200),
    "sset": (check_sset, 200),
    "decompose": (check_decomposition, 200),
    "flip": (check_flip, 200),
    "mc": (check_mc, 16),
}


def _run_entry(e: Entry, names: Sequence[str]) -> list[dict]:
    out = []
    try:
        G = e.graph()
        I = e.interpretation()
    except Exception as exc:  # noqa: BLE001 - reported per entry
        return [{"entry": e.name, "check": "load", "r": None, "ok": False, "error": str(exc)}]
    for name in names:
        fn, limit = CHECKS[name]
        if G.n > limit:
            continue
        for r in e.r:
            row = {"entry": e.name, "check": name, "r": r}
            try:
                ok, detail = fn(e, G, I, r)
                row.update(ok=bool(ok), detail=detail)
            except Exception as exc:  # noqa: BLE001
                row.update(ok=False, error=f"{type(exc).__name__}: {exc}")
            out.append(row)
    return out


def run_suite(corpus: Sequence[Entry], checks: Sequence[str] | None = None,
              workers: int = 1, seed: int = 0) -> tuple[int, dict]:
    """Run the selected checks over the corpus; returns (exit code, report)."""
    names = list(checks or CHECKS)
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; choose from {sorted(CHECKS)}")
    corpus = [dataclasses.replace(e, seed=e.seed + seed) for e in corpus]
    report_warnings = []
    if not corpus:
        report_warnings.append("empty corpus: nothing to check")
        logging.getLogger("flipmc").warning(report_warnings[0])
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = [r for chunk in pool.map(lambda e: _run_entry(e, names), corpus) for r in chunk]
    else:
        rows = [r for e in corpus for r in _run_entry(e, names)]
    failed = [r for r in rows if not r["ok"]]
    report = {
        "seed": seed,
        "checks": names,
        "entries": len(corpus),
        "results": rows,
        "passed": len(rows) - len(failed),
        "failed": len(failed),
        "failures": [f"{r['entry']}:{r['check']}:r={r['r']}" for r in failed],
        "warnings": report_warnings,
    }
    return (1 if failed else 0), report
