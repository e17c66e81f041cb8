"""Recompute the feasible cells of the upper/lower VC table and compare with the published ones.

Writes artifacts/table2.json: per cell the values, exactness flags, witness
words, the counterexample for lower+1 and timings.
"""

import argparse
import json
import time
from dataclasses import dataclass
from pathlib import Path

from vcnfa.automata import index_word
from vcnfa.enumeration import SearchBudget, enumerate_traces
from vcnfa.search import is_shattered, lower_vc, upper_vc

ROOT = Path(__file__).resolve().parents[1]

# published values; a leading ">=" marks a bound there
PUBLISHED = {
    1: {0: "1/1", 1: "2/2", 2: "2/1", 3: "2/1", 4: "2/1", 5: "2/1", 6: "2/1"},
    2: {2: "4/4", 3: "5/3", 4: "5/2", 5: "5/2", 6: ">=5/1"},
    3: {2: "4/4", 3: "8/8", 4: "9/5", 5: ">=8/4"},
}


@dataclass
class Config:
    frontier: tuple[tuple[int, int], ...] = ((1, 7), (2, 7), (3, 5))
    cell_secs: float = 600.0
    out: Path = ROOT / "artifacts" / "table2.json"


def cell(n, q, secs):
    t0 = time.perf_counter()
    T = enumerate_traces(q, n)
    t_enum = time.perf_counter() - t0
    up = upper_vc(n, q, T, SearchBudget(max_seconds=secs))
    t_up = time.perf_counter() - t0 - t_enum
    lo = lower_vc(n, q, T, SearchBudget(max_seconds=secs))
    t_lo = time.perf_counter() - t0 - t_enum - t_up
    witness = [index_word(n, i) for i in up.witness or ()]
    assert is_shattered(witness, T)
    out = {
        "n": n,
        "q": q,
        "traces": len(T),
        "upper": up.value,
        "upper_exact": up.exact,
        "lower": lo.value,
        "lower_exact": lo.exact,
        "witness": witness,
        "seconds": {"enumerate": round(t_enum, 2), "upper": round(t_up, 2), "lower": round(t_lo, 2)},
    }
    if lo.counterexample:
        s, f = lo.counterexample
        out["counterexample"] = {"set": [index_word(n, i) for i in s], "missing_F": [index_word(n, i) for i in f]}
    return out


def render(c):
    return f"{'' if c['upper_exact'] else '>='}{c['upper']}/{'' if c['lower_exact'] else '>='}{c['lower']}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cell-secs", type=float, default=Config.cell_secs)
    ap.add_argument("--out", type=Path, default=Config.out)
    args = ap.parse_args()
    cfg = Config(cell_secs=args.cell_secs, out=args.out)
    cells = []
    for q, top in cfg.frontier:
        for n in range(top + 1):
            c = cell(n, q, cfg.cell_secs)
            c["published"] = PUBLISHED.get(q, {}).get(n)
            cells.append(c)
            mark = "" if c["published"] in (None, render(c)) else f"  (published {c['published']})"
            print(f"q={q} n={n}: {render(c)}{mark}  [{sum(c['seconds'].values()):.1f}s]", flush=True)
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(json.dumps({"cell_secs": cfg.cell_secs, "cells": cells}, indent=1) + "\n")
    print(f"wrote {cfg.out}")


if __name__ == "__main__":
    main()
