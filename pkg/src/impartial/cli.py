"""Batch command-line front end.

Subcommands: gen (graph families), eval (exact distributions or seeded
sampling), verify (the verification suite; exit code doubles as CI
signal), figure3 (the per-delta guarantee table), worst-case (exhaustive
minimum-ratio search).

Exit codes: 0 all checks passed, 1 a verification failed, 2 usage error,
3 an exact computation exceeded its enumeration cap.  Outputs embed the
full run configuration and carry no timestamps, so identical invocations
produce identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from typing import Optional

from . import __version__, analysis
from .generators import FamilySpec
from .graphs import (
    CapacityError,
    InputError,
    NominationGraph,
    graph_to_text,
    graphs_from_text,
)
from .mechanisms import MECHANISMS, get_mechanism
from .rng import SeedStream

PASS, FAIL, USAGE, CAPACITY = 0, 1, 2, 3

_ENV_SEED = "IMPARTIAL_SEED"


def _frac(f: Fraction) -> str:
    return analysis.frac_str(f)


def _config_header(args: argparse.Namespace) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func" and v is not None}
    return {"tool": "impartial", "version": __version__, "config": cfg}


def _emit_json(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def _emit_csv(header: list[str], rows: list[list[str]]) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _resolve_seed(args: argparse.Namespace, required: bool) -> Optional[int]:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(_ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"{_ENV_SEED}={env!r} is not an integer") from exc
    if required:
        raise InputError(f"a seed is required: pass --seed or set {_ENV_SEED}")
    return None


def _read_one_graph(path: str):
    text = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    graphs = graphs_from_text(text)
    if len(graphs) != 1:
        raise InputError(f"expected exactly one graph, found {len(graphs)}")
    return graphs[0]


# ---------------------------------------------------------------------------
# gen

def _cmd_gen(args: argparse.Namespace) -> int:
    spec = FamilySpec.parse(" ".join(args.params))
    graph = spec.build()
    line = graph_to_text(graph)
    if args.format == "json":
        payload = _config_header(args)
        payload["graph"] = line
        _emit_json(payload)
    else:
        print(line)
    return PASS


# ---------------------------------------------------------------------------
# eval

def _cmd_eval(args: argparse.Namespace) -> int:
    mech = get_mechanism(args.mech)
    graph = _read_one_graph(args.graph)
    payload = _config_header(args)

    if args.samples is None:
        dist = mech.exact(graph, cap=args.cap)
        payload["mode"] = "exact"
        payload["distribution"] = [
            {"vertex": v, "prob": _frac(dist.prob_of(v)), "decimal": analysis.frac_decimal(dist.prob_of(v))}
            for v in graph.vertices
        ]
        payload["total"] = _frac(dist.total)
        if isinstance(graph, NominationGraph):
            rep = analysis.ratio(mech, graph, cap=args.cap)
            payload["ratio"] = {
                "expected_indegree": _frac(rep.expected_indegree),
                "max_indegree": rep.delta,
                "ratio": _frac(rep.ratio),
                "decimal": analysis.frac_decimal(rep.ratio),
            }
        if args.format == "csv":
            _emit_csv(
                ["vertex", "prob", "decimal"],
                [[str(v), _frac(dist.prob_of(v)), analysis.frac_decimal(dist.prob_of(v))] for v in graph.vertices],
            )
        else:
            _emit_json(payload)
        return PASS

    seed = _resolve_seed(args, required=True)
    rng = SeedStream(seed)
    counts = [0] * graph.n
    none_count = 0
    for _ in range(args.samples):
        picked = mech.sample(graph, rng)
        if picked is None:
            none_count += 1
        else:
            counts[picked - 1] += 1
    k = args.samples
    rows = []
    payload["mode"] = "sampled"
    payload["samples"] = k
    freqs = []
    for v in graph.vertices:
        f = counts[v - 1] / k
        ci = 3.0 * math.sqrt(max(f * (1 - f), 0.0) / k)
        freqs.append(
            {"vertex": v, "count": counts[v - 1], "freq": f"{f:.12f}", "ci3": f"{ci:.12f}"}
        )
        rows.append([str(v), str(counts[v - 1]), f"{f:.12f}", f"{ci:.12f}"])
    payload["frequencies"] = freqs
    payload["none_count"] = none_count
    if args.format == "csv":
        _emit_csv(["vertex", "count", "freq", "ci3"], rows)
    else:
        _emit_json(payload)
    return PASS


# ---------------------------------------------------------------------------
# verify

def _verify_impartial(args: argparse.Namespace, payload: dict) -> bool:
    seed = _resolve_seed(args, required=args.mode == "sampled") or 0
    rep = analysis.check_impartial(
        args.mech, args.n, mode=args.mode, seed=seed, samples=args.samples or 200
    )
    payload["graphs_checked"] = rep.graphs_checked
    payload["deviations_checked"] = rep.deviations_checked
    if rep.counterexample is not None:
        w = rep.counterexample
        payload["counterexample"] = {
            "graph": graph_to_text(w.graph),
            "vertex": w.vertex,
            "new_target": w.new_target,
            "prob_before": _frac(w.prob_before),
            "prob_after": _frac(w.prob_after),
        }
    return rep.passed


def _verify_bounds(args: argparse.Namespace, payload: dict) -> bool:
    n = args.n
    mech = args.mech
    if mech == "rd":
        if n > 5:
            raise InputError("the rd floor 1/2 + 1/n only holds for n <= 5")
        sweep = analysis.sweep_graphs(n, ("rd",), jobs=args.jobs)
        best, idx = sweep.min_ratio("rd")
        target = Fraction(1, 2) + Fraction(1, n)
        payload["min_ratio"] = _frac(best)
        payload["target"] = _frac(target)
        payload["witness"] = graph_to_text(sweep.witness(idx))
        return best == target
    if mech == "perm":
        sweep = analysis.sweep_graphs(n, ("perm",), jobs=args.jobs)
        bad = [
            i
            for i, (r, d) in enumerate(zip(sweep.ratios["perm"], sweep.deltas))
            if r < analysis.perm_alpha(d)
        ]
        best, _ = sweep.min_ratio("perm")
        payload["min_ratio"] = _frac(best)
        payload["orderings_run"] = sweep.runs
        payload["left_max_violations"] = sweep.left_max_violations
        if bad:
            payload["counterexample"] = graph_to_text(sweep.witness(bad[0]))
        return not bad and sweep.left_max_violations == 0
    if mech == "prugd":
        if n < 6:
            raise InputError("the prugd floors hold for n >= 6")
        sweep = analysis.sweep_graphs(n, ("prugd",), jobs=args.jobs)
        specials = analysis.prugd_alpha_special()
        bad = []
        for i, (r, d, h) in enumerate(
            zip(sweep.ratios["prugd"], sweep.deltas, sweep.high2_counts)
        ):
            floor = analysis.prugd_alpha(d)
            if d == 2:
                floor = max(floor, specials.delta2)
            if d == 3 and h == 1:
                floor = max(floor, specials.delta3_single_high)
            if r < floor:
                bad.append(i)
        payload["graphs_checked"] = len(sweep.deltas)
        if bad:
            payload["counterexample"] = graph_to_text(sweep.witness(bad[0]))
        return not bad
    if mech == "mix":
        sweep = analysis.sweep_graphs(n, ("mix",), jobs=args.jobs)
        floor = analysis.MIX_GUARANTEE if n >= 6 else Fraction(7, 10)
        best, idx = sweep.min_ratio("mix")
        payload["min_ratio"] = _frac(best)
        payload["floor"] = _frac(floor)
        if best < floor:
            payload["counterexample"] = graph_to_text(sweep.witness(idx))
        return best >= floor
    raise InputError(f"no closed-form floor registered for mechanism {mech!r}")


def _verify_correlation(args: argparse.Namespace, payload: dict) -> bool:
    from .generators import random_graph

    seed = _resolve_seed(args, required=False) or 0
    rng = SeedStream(seed).split("correlation")
    graphs = [analysis.correlation_example_graph()]
    graphs += [random_graph(args.n, rng) for _ in range(args.graphs)]
    failures = []
    vacuous = 0
    for g in graphs:
        rep = analysis.verify_negative_correlation(g)
        vacuous += len(rep.vacuous)
        if not rep.passed:
            failures.append(graph_to_text(g))
    payload["graphs_checked"] = len(graphs)
    payload["vacuous_comparisons"] = vacuous
    if failures:
        payload["counterexample"] = failures[0]
    return not failures


def _verify_ub_chain(args: argparse.Namespace, payload: dict) -> bool:
    try:
        rep = analysis.verify_upper_bound_chain(args.mech, args.n)
    except analysis.SymmetryError as exc:
        payload["symmetry_counterexample"] = {
            "graph": graph_to_text(exc.graph),
            "relabelling": list(exc.relabelling.seq),
            "vertex": exc.vertex,
        }
        return False
    payload["p"] = [_frac(v) for v in rep.p]
    payload["x"] = [_frac(v) for v in rep.x]
    payload["prime_ratios"] = [_frac(v) for v in rep.prime_ratios]
    payload["min_family_ratio"] = _frac(rep.min_family_ratio)
    payload["bound"] = _frac(rep.bound)
    payload["symmetry_checks"] = rep.symmetry_checks
    payload["identities"] = {
        "p1": rep.p1_ok,
        "p3": rep.p3_ok,
        "pairs": rep.pair_identities_ok,
        "paths": rep.path_identities_ok,
        "prime_bounds": rep.prime_bounds_ok,
        "min_vs_bound": rep.min_vs_bound_ok,
    }
    return rep.passed


def _verify_tightness(args: argparse.Namespace, payload: dict) -> bool:
    seed = _resolve_seed(args, required=False) or 0
    nprimes = [int(tok) for tok in args.nprimes.split(",") if tok]
    rep = analysis.tightness_scan(
        args.delta, nprimes, samples=args.samples or 1_000_000, seed=seed
    )
    payload["alpha"] = _frac(rep.alpha)
    payload["rows"] = [
        {
            "nprime": r.nprime,
            "n": r.n,
            "kind": r.kind,
            "ratio": _frac(r.ratio),
            "decimal": analysis.frac_decimal(r.ratio),
            "ci3": f"{r.ci_halfwidth:.12f}",
            "samples": r.samples,
        }
        for r in rep.rows
    ]
    payload["exact_monotone_ok"] = rep.exact_monotone_ok
    payload["exact_above_alpha_ok"] = rep.exact_above_alpha_ok
    return rep.exact_monotone_ok and rep.exact_above_alpha_ok


def _verify_lemma3(args: argparse.Namespace, payload: dict) -> bool:
    sweep = analysis.sweep_graphs(args.n, ("perm",), jobs=args.jobs)
    payload["graphs_checked"] = len(sweep.deltas)
    payload["orderings_run"] = sweep.runs
    payload["left_max_violations"] = sweep.left_max_violations
    return sweep.left_max_violations == 0


_VERIFY_CHECKS = {
    "impartial": _verify_impartial,
    "bounds": _verify_bounds,
    "correlation": _verify_correlation,
    "ub-chain": _verify_ub_chain,
    "tightness": _verify_tightness,
    "lemma3": _verify_lemma3,
}


def _cmd_verify(args: argparse.Namespace) -> int:
    payload = _config_header(args)
    ok = _VERIFY_CHECKS[args.check](args, payload)
    payload["passed"] = ok
    _emit_json(payload)
    return PASS if ok else FAIL


# ---------------------------------------------------------------------------
# figure3

def _cmd_figure3(args: argparse.Namespace) -> int:
    rows = analysis.guarantee_rows(args.delta_max)
    table = [
        [
            str(r.delta),
            r.case,
            _frac(r.perm),
            _frac(r.prugd),
            _frac(r.mix),
            analysis.frac_decimal(r.perm),
            analysis.frac_decimal(r.prugd),
            analysis.frac_decimal(r.mix),
        ]
        for r in rows
    ]
    header = ["delta", "case", "perm", "prugd", "mix", "perm_dec", "prugd_dec", "mix_dec"]
    if args.format == "json":
        payload = _config_header(args)
        payload["rows"] = [dict(zip(header, row)) for row in table]
        _emit_json(payload)
    else:
        _emit_csv(header, table)
    return PASS


# ---------------------------------------------------------------------------
# worst-case

def _cmd_worst_case(args: argparse.Namespace) -> int:
    rep = analysis.worst_case(args.mech, args.n, jobs=args.jobs)
    payload = _config_header(args)
    payload["min_ratio"] = _frac(rep.min_ratio)
    payload["decimal"] = analysis.frac_decimal(rep.min_ratio)
    payload["witness"] = graph_to_text(rep.witness)
    payload["graphs_checked"] = rep.graphs_checked
    _emit_json(payload)
    return PASS


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impartial",
        description="Impartial selection mechanisms on single-nomination graphs.",
    )
    parser.add_argument("--version", action="version", version=f"impartial {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a named family graph in text form")
    p.add_argument("params", nargs="+", help="family=NAME plus key=value parameters")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("eval", help="exact distribution or seeded sampling on a graph")
    p.add_argument("--mech", required=True, choices=sorted(MECHANISMS))
    p.add_argument("--graph", default="-", help="graph file, or - for stdin")
    p.add_argument("--exact", action="store_true", help="exact mode (the default)")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--cap", type=int, default=None, help="enumeration cap override")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("verify", help="run one verification check; exit 0 iff it passes")
    p.add_argument("check", choices=sorted(_VERIFY_CHECKS))
    p.add_argument("--mech", default="perm", choices=sorted(MECHANISMS))
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--graphs", type=int, default=200, help="random graphs for correlation")
    p.add_argument("--delta", type=int, default=2)
    p.add_argument("--nprimes", default="1,2,3", help="comma list for tightness")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("figure3", help="per-delta guarantee table")
    p.add_argument("--delta-max", type=int, default=15)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_figure3)

    p = sub.add_parser("worst-case", help="exhaustive minimum ratio with witness")
    p.add_argument("--mech", required=True, choices=sorted(MECHANISMS))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_worst_case)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return CAPACITY


if __name__ == "__main__":
    sys.exit(main())
