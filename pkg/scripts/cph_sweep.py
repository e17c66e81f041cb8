"""Soundness and state-count sweep of the length-restricted NFA construction.

Exhaustive for n <= 4, seeded random samples above. Reports the largest
state count seen per n next to the construction bound and the DFA bound.
"""

import argparse
import json
import random
import time
from dataclasses import dataclass
from pathlib import Path

from vcnfa.automata import FiniteLanguage, trace
from vcnfa.constructions import cp_bound, cph_construct, cph_params

ROOT = Path(__file__).resolve().parents[1]


@dataclass
class Config:
    n_max: int = 8
    samples: int = 2000
    seed: int = 0
    out: Path = ROOT / "artifacts" / "cph_sweep.json"


def sweep(n, cfg, rng):
    if n <= 4:
        masks = range(1 << (1 << n))
    else:
        masks = [rng.getrandbits(1 << n) for _ in range(cfg.samples)]
    worst, count = 0, 0
    for m in masks:
        F = FiniteLanguage(n, m)
        C = cph_construct(F, verify=False)
        if trace(C.nfa, n) != F:
            raise AssertionError(f"n={n} mask={m:#x}: trace mismatch")
        worst = max(worst, C.q)
        count += 1
    return {"n": n, "languages": count, "exhaustive": n <= 4, "max_states": worst,
            "bound": cph_params(n).bound, "dfa_bound": cp_bound(n)[1]}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--out", type=Path, default=Config.out)
    cfg = Config(**vars(ap.parse_args()))
    rng = random.Random(cfg.seed)
    rows = []
    for n in range(cfg.n_max + 1):
        t0 = time.perf_counter()
        r = sweep(n, cfg, rng)
        r["seconds"] = round(time.perf_counter() - t0, 2)
        rows.append(r)
        print(f"n={n}: max {r['max_states']} states over {r['languages']} languages "
              f"(bound {r['bound']}, DFA {r['dfa_bound']}) {r['seconds']}s", flush=True)
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(json.dumps({"seed": cfg.seed, "samples": cfg.samples, "rows": rows}, indent=1) + "\n")
    print(f"wrote {cfg.out}")


if __name__ == "__main__":
    main()
