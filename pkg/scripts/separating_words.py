"""Compute S(n), the worst-case separating-word state count, and record it.

Writes artifacts/separating_words.json with S(n) and the pairs attaining it.
"""

import argparse
import json
import time
from dataclasses import dataclass
from pathlib import Path

from vcnfa.automata import index_word
from vcnfa.search import _separation_table

ROOT = Path(__file__).resolve().parents[1]


@dataclass
class Config:
    n_max: int = 6
    out: Path = ROOT / "artifacts" / "separating_words.json"


def run(cfg: Config) -> dict:
    S, hardest, timing = {}, {}, {}
    for n in range(1, cfg.n_max + 1):
        t0 = time.perf_counter()
        table = _separation_table(n)
        S[n] = max(table.values())
        hardest[n] = sorted([index_word(n, i), index_word(n, j)] for (i, j), v in table.items() if v == S[n])
        timing[n] = round(time.perf_counter() - t0, 3)
        print(f"S({n}) = {S[n]}  ({len(hardest[n])} pairs, {timing[n]}s)")
    return {
        "model": "complete DFAs, start state 0, binary alphabet",
        "S": {str(n): v for n, v in S.items()},
        "hardest_pairs": {str(n): p[:16] for n, p in hardest.items()},
        "hardest_pair_counts": {str(n): len(p) for n, p in hardest.items()},
        "seconds": {str(n): t for n, t in timing.items()},
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    ap.add_argument("--out", type=Path, default=Config.out)
    cfg = Config(**vars(ap.parse_args()))
    result = run(cfg)
    result["n_max"] = cfg.n_max
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(json.dumps(result, indent=2, sort_keys=True) + "\n")
    print(f"wrote {cfg.out}")


if __name__ == "__main__":
    main()
