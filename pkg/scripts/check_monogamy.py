"""Certify and stress-test monogamy of pairs of contextuality tests.

For each bundled layout: search a chordal 2-decomposition, then look for a
quantum experiment whose monogamy sum is positive (random plus optimizer).
Also packs the bundled party graphs into CHSH-monogamous pieces.

Usage: python scripts/check_monogamy.py [--trials 1000] [--seeds 0 1]
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from entropic_nd.chordal import edge_packing, find_chordal_2_decomposition
from entropic_nd.graphs import Graph
from entropic_nd.inequalities import chain
from entropic_nd.quantum import Layout, verify_monogamy
from entropic_nd.scenario import Scenario

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


@dataclass
class Config:
    trials: int = 1000
    seeds: list[int] = field(default_factory=lambda: [0, 1])
    layouts: dict = field(default_factory=lambda: {
        "chsh_chsh.json": 2, "cycle_cycle.json": 3, "chsh_kcbs.json": {"A": 3, "B": 2}})
    graphs: list[str] = field(default_factory=lambda: ["five_piece.graph", "star3.graph"])


def run(cfg: Config) -> None:
    for name, dims in cfg.layouts.items():
        text = (SCENARIOS / name).read_text()
        sc, data = Scenario.from_json(text), json.loads(text)
        exprs = [chain(t["chain"], t["name"]) for t in data["tests"]]
        dec = find_chordal_2_decomposition(sc, *exprs)
        t = time.perf_counter()
        rep = verify_monogamy(Layout.build(sc, data.get("parties"), dims), exprs,
                              trials=cfg.trials, optimizer_seeds=tuple(cfg.seeds))
        print(f"{name:18s} decomposition {dec.status:9s} max sum {rep.max_value:+.3e} "
              f"(random {rep.random_max:+.3e}, optimizer {rep.optimizer_max:+.3e}) "
              f"{time.perf_counter() - t:5.1f} s")
    for name in cfg.graphs:
        g = Graph.parse((SCENARIOS / name).read_text())
        res = edge_packing(g)
        kinds = ", ".join(p.kind for p in res.pieces)
        print(f"{name:18s} packing {res.status}: {kinds}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seeds", type=int, nargs="*", default=[0, 1])
    a = p.parse_args()
    run(Config(trials=a.trials, seeds=a.seeds))


if __name__ == "__main__":
    main()
