"""Command-line interface.

Subcommands: gen (random / family / line), solve, reduce-mds, experiment,
verify.  Exit status: 0 success, 1 input or usage error, 2 exact-search
budget exhaustion.  Instance files are auto-detected by schema: hypergraph
('n' + 'edges'), geometric ('dim' + 'points'), line ('x' + 'reach').
"""

from dataclasses import asdict
from typing import List, Optional, Tuple
import argparse
import json
import sys

from .gadgets import (
    Family,
    FamilyParams,
    GadgetError,
    SimpleGraph,
    build_family,
    mds_bruteforce,
    reduce_mds,
)
from .geom import GeometricInstance, build_hypergraph, geometric_from_json, geometric_to_json
from .harness import (
    ExperimentConfig,
    ST_RULE,
    gen_random_disk,
    gen_random_line,
    rows_to_csv,
    run_experiment,
)
from .hypercore import Hypergraph, instance_from_json, instance_to_json
from .nbi import (
    LineInstance,
    LineInstanceError,
    build_line_hypergraph,
    line_from_geometric,
    line_from_json,
    line_to_json,
    nbi_solve,
)
from .solvers import (
    BudgetExceededError,
    DEFAULT_STATE_BUDGET,
    TieBreakMode,
    exact,
    result_to_json,
    spba,
    tsba,
    verify_ratio_bounds,
)

_CLI_TIE_BREAKS = ("deterministic_edge_order", "reverse_edge_order", "seeded_random")


class _Parser(argparse.ArgumentParser):
    """argparse reserves exit code 2 for usage errors; this tool reserves 2
    for budget exhaustion, so usage errors exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _side_path(out: str, suffix: str = ".expected.json") -> str:
    return (out[:-5] if out.endswith(".json") else out) + suffix


def _load_instance(path: str):
    """Returns (kind, parsed) with kind in {hypergraph, geometric, line}."""
    with open(path) as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: instance document must be a JSON object")
    if "n" in doc and "edges" in doc:
        return "hypergraph", instance_from_json(text)
    if "dim" in doc and "points" in doc:
        return "geometric", geometric_from_json(text)
    if "x" in doc and "reach" in doc:
        return "line", line_from_json(text)
    raise ValueError(
        f"{path}: unrecognized instance schema — expected fields 'n'+'edges' "
        "(hypergraph), 'dim'+'points' (geometric), or 'x'+'reach' (line)"
    )


def _as_hypergraph(kind, parsed) -> Tuple[Hypergraph, int, int]:
    if kind == "hypergraph":
        return parsed
    if kind == "geometric":
        g: GeometricInstance = parsed
        return build_hypergraph(g), g.source, g.target
    inst: LineInstance = parsed
    return build_line_hypergraph(inst), inst.source, inst.target


# -- subcommand handlers ----------------------------------------------------------


def _cmd_gen(args) -> int:
    if args.kind == "random":
        cfg = ExperimentConfig(
            n_values=(args.n,),
            rho=args.rho,
            r_range=(args.rmin, args.rmax),
            trials=1,
            seed=args.seed,
        )
        g = gen_random_disk(args.n, cfg, args.trial)
        doc = json.loads(geometric_to_json(g))
        doc["meta"] = {
            "st_rule": ST_RULE,
            "seed": args.seed,
            "n": args.n,
            "trial": args.trial,
        }
        _write(json.dumps(doc, indent=2) + "\n", args.out)
        return 0
    if args.kind == "line":
        inst = gen_random_line(args.n, args.seed, args.trial, model=args.model)
        _write(line_to_json(inst), args.out)
        return 0
    # family
    params = FamilyParams(
        family=Family(args.family),
        k=args.k,
        k_prime=args.k_prime,
    )
    h, expected = build_family(params)
    _write(instance_to_json(h, expected["source"], expected["target"]), args.out)
    side = dict(expected)
    side["family"] = args.family
    side["k"] = args.k
    if args.k_prime is not None:
        side["k_prime"] = args.k_prime
    _write(json.dumps(side, indent=2) + "\n", _side_path(args.out))
    return 0


def _cmd_solve(args) -> int:
    kind, parsed = _load_instance(args.instance)
    if args.alg == "nbi":
        if kind == "hypergraph":
            raise LineInstanceError("nbi requires 1-D instance (explicit edge lists unsupported)")
        inst = parsed if kind == "line" else line_from_geometric(parsed)
        res = nbi_solve(inst)
    else:
        h, s, t = _as_hypergraph(kind, parsed)
        if args.alg == "spba":
            res = spba(h, s, t)
        elif args.alg == "tsba":
            res = tsba(h, s, t, tb=TieBreakMode(args.tie_break), seed=args.seed)
        else:
            res = exact(h, s, t, budget=args.budget)
    _write(result_to_json(res), args.out)
    return 0


def _read_graph_file(path: str) -> SimpleGraph:
    """Edge-list format: first data line is the vertex count, then one
    'u v' pair per line; '#' starts a comment."""
    n = None
    edges: List[Tuple[int, int]] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if n is None:
                    if len(parts) != 1:
                        raise ValueError
                    n = int(parts[0])
                else:
                    if len(parts) != 2:
                        raise ValueError
                    edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: expected a vertex count, then 'u v' pairs"
                ) from None
    if n is None:
        raise ValueError(f"{path}: empty graph file")
    return SimpleGraph(n=n, edges=tuple(edges))


def _cmd_reduce_mds(args) -> int:
    g = _read_graph_file(args.graph)
    n_s = args.n_s if args.n_s is not None else g.n + 2
    red = reduce_mds(g, n_s)
    _write(instance_to_json(red.hypergraph, red.source, red.target), args.out)
    side = {
        "n_original": red.n_original,
        "n_s": red.n_s,
        "source": red.source,
        "target": red.target,
        "super_blocks": [list(b) for b in red.super_blocks],
    }
    if g.n <= 20:
        mds = mds_bruteforce(g)
        side["mds"] = mds
        side["expected_width"] = mds * n_s + g.n + 1
    if args.out is not None and args.out != "-":
        _write(json.dumps(side, indent=2) + "\n", _side_path(args.out))
    return 0


def _cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        n_values=tuple(args.n),
        rho=args.rho,
        r_range=(args.rmin, args.rmax),
        trials=args.trials,
        seed=args.seed,
        budget=args.budget,
        allow_fallback=not args.no_fallback,
    )
    rows = run_experiment(cfg)
    csv_text = rows_to_csv(rows)
    _write(csv_text, args.out)
    if args.out not in (None, "-") and not args.no_plot:
        from .plotting import plot_experiment_rows

        stem = args.out[:-4] if args.out.endswith(".csv") else args.out
        png = plot_experiment_rows(rows, stem + ".png")
        print(f"wrote {args.out} and {png}", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    kind, parsed = _load_instance(args.instance)
    h, s, t = _as_hypergraph(kind, parsed)
    geometry = parsed if kind == "geometric" else None
    report = verify_ratio_bounds(
        h, s, t,
        geometry=geometry,
        budget=args.budget,
        tb=TieBreakMode(args.tie_break),
    )
    doc = asdict(report)
    doc["ok"] = report.ok
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return 2 if not report.complete else 0


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="thinpath", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate instance files")
    gsub = gen.add_subparsers(dest="kind", required=True, parser_class=_Parser)

    g_rand = gsub.add_parser("random", help="random 2-D disk-hypergraph instance")
    g_rand.add_argument("--n", type=int, required=True)
    g_rand.add_argument("--seed", type=int, default=0)
    g_rand.add_argument("--trial", type=int, default=0)
    g_rand.add_argument("--rho", type=float, default=1.5)
    g_rand.add_argument("--rmin", type=float, default=1.0)
    g_rand.add_argument("--rmax", type=float, default=5.0)
    g_rand.add_argument("--out", default=None)

    g_line = gsub.add_parser("line", help="random 1-D line instance")
    g_line.add_argument("--n", type=int, required=True)
    g_line.add_argument("--seed", type=int, default=0)
    g_line.add_argument("--trial", type=int, default=0)
    g_line.add_argument("--model", choices=("disk", "interval"), default="disk")
    g_line.add_argument("--out", default=None)

    g_fam = gsub.add_parser("family", help="named worst-case family instance")
    g_fam.add_argument("--family", required=True,
                       choices=tuple(f.value for f in Family))
    g_fam.add_argument("--k", type=int, default=3)
    g_fam.add_argument("--k-prime", type=int, default=None, dest="k_prime")
    g_fam.add_argument("--out", required=True,
                       help="instance JSON path; expected values go to "
                            "<out>.expected.json alongside")

    solve = sub.add_parser("solve", help="run a solver on an instance file")
    solve.add_argument("instance")
    solve.add_argument("--alg", required=True, choices=("spba", "tsba", "nbi", "exact"))
    solve.add_argument("--tie-break", choices=_CLI_TIE_BREAKS,
                       default="deterministic_edge_order", dest="tie_break")
    solve.add_argument("--seed", type=int, default=0,
                       help="seed for --tie-break seeded_random")
    solve.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET,
                       help="exact-search state budget (exit 2 when exceeded)")
    solve.add_argument("--out", default=None)

    red = sub.add_parser("reduce-mds", help="dominating-set reduction from an edge list")
    red.add_argument("graph", help="text file: vertex count line, then 'u v' lines")
    red.add_argument("--n-s", type=int, default=None, dest="n_s",
                     help="super-vertex block size (default: n+2)")
    red.add_argument("--out", default=None)

    exp = sub.add_parser("experiment", help="batch ratio sweep to CSV (+PNG)")
    exp.add_argument("--n", type=int, action="append", required=True,
                     help="instance size; repeat for a sweep")
    exp.add_argument("--trials", type=int, default=1000)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--rho", type=float, default=1.5)
    exp.add_argument("--rmin", type=float, default=1.0)
    exp.add_argument("--rmax", type=float, default=5.0)
    exp.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET)
    exp.add_argument("--no-fallback", action="store_true",
                     help="skip budget-exceeded trials instead of using the "
                          "best-of-two-heuristics reference")
    exp.add_argument("--no-plot", action="store_true",
                     help="write the CSV only, no figure alongside")
    exp.add_argument("--out", required=True, help="CSV path ('-' for stdout)")

    ver = sub.add_parser("verify", help="approximation-bound report for an instance")
    ver.add_argument("instance")
    ver.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET)
    ver.add_argument("--tie-break", choices=_CLI_TIE_BREAKS,
                     default="deterministic_edge_order", dest="tie_break")
    ver.add_argument("--out", default=None)
    return p


_HANDLERS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "reduce-mds": _cmd_reduce_mds,
    "experiment": _cmd_experiment,
    "verify": _cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except BudgetExceededError as exc:
        print(f"thinpath: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"thinpath: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
