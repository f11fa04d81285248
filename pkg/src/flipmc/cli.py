"""Command line entry point: one JSON object per invocation on stdout.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

import numpy as np

from flipmc import cliquewidth as cw
from flipmc.corpus import CHECKS, Entry, default_corpus, planted_sset_violation, run_suite
from flipmc.flipdecomp import decompose, verify_decomposition
from flipmc.generators import KINDS, generate
from flipmc.graph import Graph
from flipmc.interpret import Interpretation, apply_interpretation, get_interpretation, instance
from flipmc.locality import check_r_generic, refine_partition, status_matrix
from flipmc.logic import check, evaluate, parse
from flipmc.pipeline import CandidateDisagreement, PipelineConfig, model_check
from flipmc.slemma import build_s_set, verify_s_set
from flipmc.vc import (
    BiRelation, NoDuality, find_duality, sauer_shelah_bound, shatter_function, vc_dimension,
)

log = logging.getLogger("flipmc")


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, payload: dict):
        super().__init__("check failed")
        self.payload = payload


def _default(o: Any):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, (set, frozenset, tuple)):
        return sorted(o)
    if hasattr(o, "to_json"):
        return o.to_json()
    raise TypeError(f"cannot encode {type(o).__name__}")


def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from None


def _read_graph(path: str) -> Graph:
    try:
        return Graph.from_json(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad graph file {path}: {exc}") from None


def _text_arg(value: str | None, file: str | None, what: str) -> str:
    if file:
        try:
            return Path(file).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {what} file: {exc}") from None
    if value is None:
        raise UsageError(f"a {what} is required")
    return value


def _interp(args) -> Interpretation:
    if getattr(args, "phi", None):
        return Interpretation.from_text(args.phi, args.delta or "true")
    return get_interpretation(args.interp)


# commands


def cmd_gen(args) -> dict:
    params = {k: v for k, v in dict(n=args.n, rows=args.rows, cols=args.cols, p=args.p,
                                    expr=args.expr).items() if v is not None}
    if args.kind == "random":
        params["seed"] = args.seed
    return generate(args.kind, params).to_json()


def cmd_eval(args) -> dict:
    G = _read_graph(args.graph)
    phi = parse(_text_arg(args.formula, args.formula_file, "formula"))
    assignment = {}
    for item in args.assign or []:
        name, _, value = item.partition("=")
        if not value.isdigit():
            raise UsageError(f"--assign expects name=vertex, got {item!r}")
        assignment[name] = int(value)
    value = evaluate(G, phi, assignment) if args.oracle else check(G, phi, assignment)
    return {"value": value, "evaluator": "reference" if args.oracle else "kernel"}


def cmd_interpret(args) -> dict:
    G = _read_graph(args.graph)
    I = _interp(args)
    H = apply_interpretation(G, I)
    return {"interpretation": I.to_json(), "H": H.to_json(), "origin": list(H.origin)}


def _relation(args) -> BiRelation:
    if args.relation:
        data = _read_json(args.relation)
        try:
            return BiRelation.from_pairs(int(data["a"]), int(data["b"]), data["pairs"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad relation file: {exc}") from None
    if args.graph:
        return BiRelation.from_graph(_read_graph(args.graph))
    raise UsageError("give --relation or --graph")


def cmd_vc(args) -> dict:
    R = _relation(args)
    d = vc_dimension(R)
    m = args.m if args.m is not None else len(R.A)
    pi = shatter_function(R, m)
    return {"vc_dimension": d, "m": m, "shatter": pi, "sauer_shelah": sauer_shelah_bound(m, d)}


def cmd_duality(args) -> dict:
    R = _relation(args)
    try:
        w = find_duality(R, args.k_max)
    except NoDuality as exc:
        return {"found": False, "k_max": exc.k_max}
    return {"found": True, **w.to_json()}


def cmd_refine(args) -> dict:
    inst = instance(_read_graph(args.graph), _interp(args))
    P = refine_partition(inst.E, inst.dist, args.r)
    bad = check_r_generic(inst.E, inst.dist, P, args.r)
    return {
        "r": args.r,
        **P.to_json(inst.U),
        "status": status_matrix(inst.E, inst.dist, P, args.r),
        "r_generic": bad is None,
    }


def cmd_sset(args) -> dict:
    inst = instance(_read_graph(args.graph), _interp(args))
    E, dist = inst.E, inst.dist
    P = refine_partition(E, dist, args.r)
    ss = build_s_set(E, dist, P, args.r, args.k_max)
    bad = verify_s_set(E, dist, ss.S, 5 * args.r)
    out = {
        **ss.to_json(inst.U),
        "verified_radius": 5 * args.r,
        "verified": bad is None,
        "counterexample": [inst.U[v] for v in bad] if bad else None,
    }
    if bad is not None or not ss.within_bound:
        raise CheckFailed(out)
    return out


def cmd_decompose(args) -> dict:
    D = decompose(_read_graph(args.graph), _interp(args), args.r)
    checks = verify_decomposition(D, oracle=args.oracle)
    out = {"decomposition": D.to_json(), "verification": [c.to_json() for c in checks]}
    if not all(c.ok for c in checks):
        raise CheckFailed(out)
    return out


def cmd_lcw(args) -> dict:
    G = _read_graph(args.graph)
    try:
        res = cw.local_cliquewidth(G, args.r, args.cap, workers=args.workers,
                                   heuristic=args.heuristic)
    except cw.BudgetError as exc:
        raise UsageError(str(exc)) from None
    return {"r": args.r, "cap": args.cap, **res.to_json()}


def cmd_mc(args) -> dict:
    H = _read_graph(args.graph)
    rho = parse(_text_arg(args.sentence_text, args.sentence, "sentence"))
    cfg = PipelineConfig(
        s=args.s, mode=args.mode, verify=not args.no_verify, workers=args.workers,
        pre_image=_read_graph(args.pre_image) if args.pre_image else None,
        interp=_interp(args) if args.mode == "witness" else None,
        r=args.r, lcw_radius=args.lcw_r, race=args.race,
    )
    return model_check(H, rho, cfg).to_json()


def cmd_suite(args) -> dict:
    if args.corpus:
        data = _read_json(args.corpus)
        try:
            corpus = [Entry.from_json(e) for e in data]
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad corpus file: {exc}") from None
    else:
        corpus = default_corpus()
    if args.planted:
        corpus.append(planted_sset_violation())
    checks = args.checks.split(",") if args.checks else None
    if checks and any(c not in CHECKS for c in checks):
        raise UsageError(f"unknown check in {args.checks}; choose from {','.join(CHECKS)}")
    code, report = run_suite(corpus, checks, workers=args.workers, seed=args.seed)
    if code:
        raise CheckFailed(report)
    return report


def build_parser() -> argparse.ArgumentParser:
    def common_flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommands must not reset values given before the subcommand name
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--seed", type=int, default=d(0), help="seed for all randomness")
        c.add_argument("--workers", type=int, default=d(1), help="thread count")
        c.add_argument("--json-indent", type=int, default=d(None), help="pretty-print output")
        c.add_argument("-v", "--verbose", action="store_true", default=d(False))
        return c

    common = common_flags(True)
    p = argparse.ArgumentParser(prog="flipmc", description=__doc__.splitlines()[0],
                                parents=[common_flags(False)])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(fn=fn)
        return sp

    def interp_args(sp):
        sp.add_argument("--interp", default="identity", help="registered interpretation name")
        sp.add_argument("--phi", help="edge formula in x,y (overrides --interp)")
        sp.add_argument("--delta", help="domain formula in x")

    sp = add("gen", cmd_gen, "generate a graph")
    sp.add_argument("kind", choices=KINDS)
    sp.add_argument("--n", type=int)
    sp.add_argument("--rows", type=int)
    sp.add_argument("--cols", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--expr")

    sp = add("eval", cmd_eval, "evaluate a formula on a graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--formula")
    sp.add_argument("--formula-file")
    sp.add_argument("--assign", action="append", metavar="VAR=VERTEX")
    sp.add_argument("--oracle", action="store_true", help="use the reference evaluator")

    sp = add("interpret", cmd_interpret, "apply an interpretation")
    sp.add_argument("--graph", required=True)
    interp_args(sp)

    for name, fn, help_ in (("vc", cmd_vc, "VC dimension and shatter function"),
                            ("duality", cmd_duality, "minimum-order duality witness")):
        sp = add(name, fn, help_)
        sp.add_argument("--relation")
        sp.add_argument("--graph")
        if name == "vc":
            sp.add_argument("--m", type=int)
        else:
            sp.add_argument("--k-max", type=int, default=8)

    sp = add("refine", cmd_refine, "r-generic partition refinement")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--r", type=int, default=1)
    interp_args(sp)

    sp = add("sset", cmd_sset, "build and verify the guard set S")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--k-max", type=int, default=8)
    interp_args(sp)

    sp = add("decompose", cmd_decompose, "guarded flip and bounded-range formula")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--oracle", action="store_true")
    interp_args(sp)

    sp = add("lcw", cmd_lcw, "local cliquewidth")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--cap", type=int, default=6)
    sp.add_argument("--heuristic", action="store_true",
                    help="report greedy upper bounds for balls over the size budget")

    sp = add("mc", cmd_mc, "model checking through (S,R) candidates")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--sentence", help="file holding the sentence")
    sp.add_argument("--sentence-text", help="the sentence itself")
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--mode", choices=("exhaustive", "witness"), default="exhaustive")
    sp.add_argument("--pre-image")
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--lcw-r", type=int)
    sp.add_argument("--no-verify", action="store_true")
    sp.add_argument("--race", action="store_true", help="answer from the first finished candidate")
    interp_args(sp)

    sp = add("suite", cmd_suite, "run acceptance checks over a corpus")
    sp.add_argument("--corpus", help="JSON list of corpus entries (default corpus if absent)")
    sp.add_argument("--checks", help=f"comma-separated subset of {','.join(CHECKS)}")
    sp.add_argument("--planted", action="store_true", help="append the planted S-set violation")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(message)s")

    def emit(obj: dict):
        sys.stdout.write(json.dumps(obj, indent=args.json_indent, default=_default) + "\n")

    try:
        emit(args.fn(args))
        return 0
    except CheckFailed as exc:
        emit(exc.payload)
        log.error("check failed")
        return 1
    except CandidateDisagreement as exc:
        log.error("%s", exc)
        emit({"error": str(exc)})
        return 1
    except (UsageError, ValueError, KeyError) as exc:
        log.error("%s", exc)
        emit({"error": str(exc)})
        return 2


if __name__ == "__main__":
    sys.exit(main())
