"""Search quantum violations of the entropic KCBS and CHSH tests across dimensions.

Usage: python scripts/search_violations.py [--seeds 6] [--maxiter 4000]
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from entropic_nd.inequalities import entropic_chained_bell, entropic_cycle
from entropic_nd.quantum import Layout, expression_value, optimize_violation, pentagram_experiment
from entropic_nd.scenario import chained_bell_scenario, n_cycle_scenario


@dataclass
class Config:
    seeds: int = 6
    maxiter: int = 4000


def run(cfg: Config) -> list[dict]:
    kcbs = n_cycle_scenario(5)
    one_party = {x: "A" for x in kcbs.labels}
    chsh = chained_bell_scenario(2)
    cases = [
        ("kcbs, qubit", Layout.build(kcbs, one_party, 2), entropic_cycle(5)),
        ("kcbs, qutrit", Layout.build(kcbs, one_party, 3), entropic_cycle(5)),
        ("kcbs, ququart", Layout.build(kcbs, one_party, 4), entropic_cycle(5)),
        ("chsh, 2x2", Layout.build(chsh, dims=2), entropic_chained_bell(2)),
    ]
    rows = []
    for name, layout, expr in cases:
        t = time.perf_counter()
        res = optimize_violation(layout, expr, range(cfg.seeds), maxiter=cfg.maxiter)
        secs = time.perf_counter() - t
        rows.append({"case": name, "value": res.value, "seed": res.seed, "seconds": secs})
        print(f"{name:14s} best {res.value:+.6f} bits (seed {res.seed}) {secs:6.1f} s")
    pv = expression_value(pentagram_experiment(), entropic_cycle(5))
    print(f"{'pentagram':14s} value {pv:+.6f} bits (probabilistic optimum, not entropic)")
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=6)
    p.add_argument("--maxiter", type=int, default=4000)
    a = p.parse_args()
    run(Config(a.seeds, a.maxiter))


if __name__ == "__main__":
    main()
