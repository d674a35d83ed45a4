"""Command-line entry point: ``entropic-nd {derive,check,violate,monogamy}``.

Exit codes: 0 success or verdict true, 1 verdict false, 2 error or unknown.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chordal import (FOUND, NOT_FOUND, edge_packing, find_chordal_2_decomposition)
from .graphs import Graph
from .inequalities import TestExpression, catalog, chain
from .polyhedra import (DEFAULT_MAX_INEQUALITIES, ProjectionLimitExceeded, extension_feasible,
                        membership, nd_cone, project_cone, shannon_cone)
from .scenario import EntropyVector, IndexMismatch, Scenario, ScenarioError

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2

class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _load_scenario(path: str) -> tuple[Scenario, dict]:
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return Scenario.from_json(text), data
    except (ScenarioError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: {exc}") from exc


# -- derive ---------------------------------------------------------------------

def cmd_derive(args) -> int:
    scenario, _ = _load_scenario(args.scenario)

    def progress(info):
        print(f"step {info.step}: eliminate H({info.coordinate}) "
              f"zero={info.zero} pos={info.positive} neg={info.negative} "
              f"generated={info.generated} kept={info.kept}", file=sys.stderr)

    try:
        cone = project_cone(shannon_cone(scenario), scenario.observed_index,
                            max_inequalities=args.max_ineqs,
                            progress=progress if args.verbose else None)
    except ProjectionLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(cone.to_text())
    return EXIT_OK


# -- check ----------------------------------------------------------------------

def cmd_check(args) -> int:
    scenario, _ = _load_scenario(args.scenario)
    try:
        vector = EntropyVector.from_json(scenario.observed_index, _read(args.vector))
    except (IndexMismatch, json.JSONDecodeError, TypeError, ValueError) as exc:
        raise CliError(f"{args.vector}: {exc}") from exc
    if args.cone == "nd":
        m = membership(vector, nd_cone(scenario))
        if m:
            print("INSIDE nd")
            return EXIT_OK
        print("OUTSIDE nd")
        print(f"violated: {m.violated.to_text()}")
        print(f"violation: {float(m.violation):.12g}")
        return EXIT_FALSE
    ext = extension_feasible(vector, scenario)
    if ext:
        print("INSIDE nchv")
        print("witness:")
        print(ext.witness.to_floats().to_json() if not vector.is_exact else ext.witness.to_json())
        return EXIT_OK
    print("OUTSIDE nchv")
    if ext.certificate is not None:
        print(f"violated: {ext.certificate.to_text()}")
        print(f"violation: {-ext.certificate.value(vector)}")
    else:
        print(f"residual: {ext.residual:.12g}")
    return EXIT_FALSE


# -- violate --------------------------------------------------------------------

def _party_dims(parties: list, dim: int) -> dict:
    k = len(parties)
    local = round(dim ** (1.0 / k))
    if local ** k != dim or local < 2:
        raise CliError(f"--dim {dim} is not a product of {k} equal local dimensions >= 2")
    return {p: local for p in parties}


def cmd_violate(args) -> int:
    from .quantum import Layout, default_parties, optimize_violation, pentagram_experiment

    scenario, data = _load_scenario(args.scenario)
    try:
        expr = catalog(args.expr)
    except KeyError as exc:
        raise CliError(str(exc.args[0])) from exc
    obs = scenario.observed_index
    missing = [",".join(sorted(s)) for s in expr.functional() if s not in obs]
    if missing:
        raise CliError(f"expression {expr.name} uses unobserved coordinates {missing}")
    parties = data.get("parties") or default_parties(scenario.labels)
    names = list(dict.fromkeys(parties[x] for x in scenario.labels))
    layout = Layout.build(scenario, parties, _party_dims(names, args.dim))
    res = optimize_violation(layout, expr, list(range(args.seeds)), maxiter=args.maxiter)
    value, exp = res.value, res.experiment
    if len(names) == 1 and args.dim == 3 and set(scenario.labels) == {f"A{i}" for i in range(1, 6)}:
        from .quantum import expression_value
        pent = pentagram_experiment()
        pv = expression_value(pent, expr)
        print(f"pentagram value: {pv:.12g}")
        if pv > value:
            value, exp = pv, pent
    print(f"expression: {expr.to_text()}")
    print(f"best value: {value:.12g}")
    out = args.out or f"{expr.name}-experiment.json"
    Path(out).write_text(exp.to_json())
    print(f"experiment written to {out}")
    return EXIT_OK if value > args.threshold else EXIT_FALSE


# -- monogamy -------------------------------------------------------------------

def _tests(data: dict) -> list[TestExpression]:
    tests = data.get("tests")
    if not isinstance(tests, list) or len(tests) != 2:
        raise CliError("decompose mode needs a 'tests' field with two chain orders")
    out = []
    for k, t in enumerate(tests):
        if isinstance(t, dict):
            out.append(chain(t["chain"], t.get("name", f"test{k + 1}")))
        else:
            out.append(chain(t, f"test{k + 1}"))
    return out


def cmd_monogamy(args) -> int:
    if args.mode == "decompose":
        scenario, data = _load_scenario(args.graph)
        e1, e2 = _tests(data)
        try:
            res = find_chordal_2_decomposition(scenario, e1, e2, budget=args.budget)
        except IndexMismatch as exc:
            raise CliError(str(exc)) from exc
        if res.status == FOUND:
            print(f"FOUND chordal decomposition ({res.nodes} nodes)")
            for k, e in enumerate(res.decomposition.expressions, 1):
                print(f"part {k}: {{{', '.join(e.labels)}}}")
                print(f"  {e.to_text()}")
            print(f"monogamy: {e1.name} + {e2.name} <= 0")
            return EXIT_OK
        if res.status == NOT_FOUND:
            print(f"NOT FOUND ({res.nodes} nodes, exhaustive)")
            return EXIT_FALSE
        print(f"UNKNOWN: budget of {args.budget} nodes exceeded")
        return EXIT_ERROR

    try:
        graph = Graph.parse(_read(args.graph))
    except (ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"{args.graph}: {exc}") from exc
    if not graph.is_connected():
        raise CliError("packing needs a connected party graph")
    res = edge_packing(graph, budget=args.budget)
    if res.status == FOUND:
        print(f"FOUND packing into {len(res.pieces)} pieces")
        for p in res.pieces:
            print(p.to_text())
        print("certificate:")
        for t in res.certificate:
            print(f"  {t.weight} * (B[{'-'.join(t.e)}] + B[{'-'.join(t.f)}]) <= 0  shared {t.shared}")
        terms = " + ".join(f"B[{u}-{v}]" for u, v in graph.sorted_edges())
        print(f"monogamy: {terms} <= 0")
        return EXIT_OK
    if res.status == NOT_FOUND:
        print("NOT FOUND")
        return EXIT_FALSE
    print(f"UNKNOWN: budget of {args.budget} nodes exceeded")
    return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entropic-nd",
                                description="Entropic contextuality and monogamy toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("derive", help="project the Shannon cone onto observed coordinates")
    d.add_argument("scenario")
    d.add_argument("--max-ineqs", type=int, default=DEFAULT_MAX_INEQUALITIES)
    d.add_argument("--verbose", action="store_true", help="print per-step counts to stderr")
    d.set_defaults(func=cmd_derive)

    c = sub.add_parser("check", help="decide membership of an observed entropy vector")
    c.add_argument("scenario")
    c.add_argument("vector")
    c.add_argument("--cone", choices=("nchv", "nd"), default="nchv")
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("violate", help="search quantum violations of a catalog expression")
    v.add_argument("scenario")
    v.add_argument("--expr", required=True, help="kcbs, chsh, cycleN or chainedM")
    v.add_argument("--dim", type=int, default=3, help="total Hilbert space dimension")
    v.add_argument("--seeds", type=int, default=6)
    v.add_argument("--maxiter", type=int, default=4000)
    v.add_argument("--threshold", type=float, default=1e-6)
    v.add_argument("--out", default=None, help="experiment JSON path")
    v.set_defaults(func=cmd_violate)

    m = sub.add_parser("monogamy", help="certify monogamy by decomposition or edge packing")
    m.add_argument("graph")
    m.add_argument("--mode", choices=("decompose", "pack"), default="pack")
    m.add_argument("--budget", type=int, default=200_000)
    m.set_defaults(func=cmd_monogamy)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
