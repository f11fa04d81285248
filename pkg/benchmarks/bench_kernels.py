"""Time the Cython and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]
"""
from __future__ import annotations

import argparse
import json
import time

from flipmc._kernels import backends
from flipmc.generators import grid, random_graph
from flipmc.logic import compile_formula, parse

CASES = [
    ("bfs grid 30x30", "bfs", lambda: grid(30), None),
    ("bfs G(400,0.02)", "bfs", lambda: random_graph(400, 0.02, 7), None),
    ("pairs square grid 12x12", "pairs", lambda: grid(12),
     "x != y & (E(x,y) | exists z. E(x,z) & E(z,y))"),
    ("sentence triangle G(60,0.2)", "holds", lambda: random_graph(60, 0.2, 3),
     "exists x. exists y. exists z. E(x,y) & E(y,z) & E(x,z) & x != z"),
    ("sentence diameter-2 G(50,0.3)", "holds", lambda: random_graph(50, 0.3, 5),
     "forall x. forall y. x = y | E(x,y) | exists z. E(x,z) & E(z,y)"),
]


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def run(repeat: int = 3) -> list[dict]:
    impls = backends()
    rows = []
    for name, kind, make, text in CASES:
        G = make()
        row = {"case": name}
        for backend, mod in impls.items():
            if kind == "bfs":
                indptr, indices = G.csr()
                fn = lambda: mod.all_pairs_bfs(G.n, indptr, indices)  # noqa: E731
            else:
                free = ("x", "y") if kind == "pairs" else ()
                prog = compile_formula(G, parse(text), free)
                if kind == "pairs":
                    fn = lambda: mod.Evaluator(prog).pairs(0, 1)  # noqa: E731
                else:
                    fn = lambda: mod.Evaluator(prog).holds(())  # noqa: E731
            row[backend] = _time(fn, repeat)
        if "cython" in row:
            row["speedup"] = row["python"] / max(row["cython"], 1e-9)
        rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = run(args.repeat)
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'case':32} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for r in rows:
        cy = f"{r['cython']:.4f}" if "cython" in r else "n/a"
        sp = f"{r['speedup']:.1f}x" if "speedup" in r else ""
        print(f"{r['case']:32} {r['python']:10.4f} {cy:>10} {sp:>8}")


if __name__ == "__main__":
    main()
