"""Project the Shannon cone of the cycle and chained Bell scenarios and time it.

Usage: python scripts/derive_facets.py [--cycles 3 4 5] [--chained 2] [--out DIR]
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field
from pathlib import Path

from entropic_nd.inequalities import chain
from entropic_nd.polyhedra import project_cone, shannon_cone
from entropic_nd.scenario import chained_bell_scenario, n_cycle_scenario


@dataclass
class Config:
    cycles: list[int] = field(default_factory=lambda: [3, 4, 5])
    chained: list[int] = field(default_factory=lambda: [2])
    out: Path | None = None


def chain_variants(order, index):
    return [chain(order[k:] + order[:k]).as_inequality(index).coeffs for k in range(len(order))]


def run(cfg: Config) -> list[dict]:
    jobs = [(f"cycle{n}", n_cycle_scenario(n), None) for n in cfg.cycles]
    for m in cfg.chained:
        order = [x for i in range(m) for x in (f"A{i}", f"B{i}")]
        jobs.append((f"chained{m}", chained_bell_scenario(m), order))
    rows = []
    for name, sc, order in jobs:
        t = time.perf_counter()
        cone = project_cone(shannon_cone(sc), sc.observed_index)
        secs = time.perf_counter() - t
        want = chain_variants(list(order or sc.labels), sc.observed_index)
        hits = sum(w in cone.coefficient_set() for w in want)
        rows.append({"name": name, "facets": len(cone), "chain_variants": f"{hits}/{len(want)}",
                     "seconds": round(secs, 2)})
        print(f"{name:10s} facets={len(cone):4d} chain variants {hits}/{len(want)} {secs:8.2f} s")
        if cfg.out is not None:
            cfg.out.mkdir(parents=True, exist_ok=True)
            (cfg.out / f"{name}.facets").write_text(cone.to_text())
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--cycles", type=int, nargs="*", default=[3, 4, 5])
    p.add_argument("--chained", type=int, nargs="*", default=[2])
    p.add_argument("--out", type=Path, default=None)
    a = p.parse_args()
    run(Config(a.cycles, a.chained, a.out))


if __name__ == "__main__":
    main()
