"""Similarity of {00,01,10} with every 3-subset of {0,1}^3 under several automaton models.

For an ordering y_1, y_2, y_3 of S, a subset F of {1,2,3} is realised by an
automaton when, among the six words, it accepts exactly x_i and y_i for i in F.
The profile value is the number of realised F, maximised over orderings.

Models:
  nfa / dfa / pdfa   automata with at most q states (NFA, complete DFA, partial DFA)
  per-F              a fresh automaton for each F
  fixed              one transition structure for all F, only accept states change
  words / lengths    inspect only the six words, or also require every other word
                     of length 2 and 3 to be rejected (exact traces)

Writes artifacts/theorem4_variants.json.
"""

import argparse
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from vcnfa.automata import all_words, word_index
from vcnfa.enumeration import decode_relations, reach_table

ROOT = Path(__file__).resolve().parents[1]
X = ("00", "01", "10")
FIGURE = ("000", "001", "100")


@dataclass
class Config:
    nfa_states: tuple[int, ...] = (1, 2, 3)
    dfa_states: tuple[int, ...] = (1, 2, 3, 4)
    out: Path = field(default=ROOT / "artifacts" / "theorem4_variants.json")


def nfa_relations(q):
    return decode_relations(np.arange((1 << q) ** (2 * q), dtype=np.int64), q, 2)


def dfa_relations(q, partial):
    choices = list(range(q + 1)) if partial else list(range(q))
    rows = np.array(list(itertools.product(choices, repeat=2 * q)), dtype=np.int64)
    bits = np.where(rows < q, np.left_shift(1, np.minimum(rows, q - 1)), 0).astype(np.uint64)
    return bits.reshape(-1, 2, q)


def codes(T):
    """Per relation and accept set: acceptance bits of the 4 length-2 and 8 length-3 words."""
    q = T.shape[2]
    r2, r3 = reach_table(T, 2), reach_table(T, 3)
    reach = np.concatenate([r2, r3], axis=1)  # columns 0..3 length 2, 4..11 length 3
    acc = np.arange(1 << q, dtype=np.int64)
    return (reach[:, None, :] & acc[None, :, None]) != 0  # (R, 2^q, 12)


def realised(C, S, exact_traces):
    """Bitmask over F (as 3-bit patterns) per relation, for the best ordering of S."""
    xcols = [word_index(x) for x in X]
    best_union, best_fixed = 0, 0
    if exact_traces:
        inside = set(xcols) | {4 + word_index(y) for y in S}
        outside = [c for c in range(12) if c not in inside]
        clean = ~C[:, :, outside].any(axis=2)
    else:
        clean = np.ones(C.shape[:2], dtype=bool)
    for perm in itertools.permutations(S):
        ycols = [4 + word_index(y) for y in perm]
        px = sum(C[:, :, c].astype(np.int64) << i for i, c in enumerate(xcols))
        py = sum(C[:, :, c].astype(np.int64) << i for i, c in enumerate(ycols))
        hit = np.where((px == py) & clean, np.left_shift(1, px), 0)
        per_rel = np.bitwise_or.reduce(hit, axis=1)
        best_union = max(best_union, bin(int(np.bitwise_or.reduce(per_rel))).count("1"))
        best_fixed = max(best_fixed, max(bin(int(v)).count("1") for v in np.unique(per_rel)))
    return best_union, best_fixed


def survey(C, exact_traces):
    per_f, fixed = {}, {}
    for S in itertools.combinations(all_words(3), 3):
        per_f["".join(S)], fixed["".join(S)] = realised(C, S, exact_traces)
    return per_f, fixed


def summarise(values):
    top = max(values.values())
    return {
        "max": top,
        "argmax": sorted(k for k, v in values.items() if v == top),
        "at_figure_set": values["".join(FIGURE)],
        "similar_sets": sorted(k for k, v in values.items() if v == 8),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Config.out)
    cfg = Config(out=ap.parse_args().out)
    models = {}
    for q in cfg.nfa_states:
        models[f"nfa q={q}"] = nfa_relations(q)
    for q in cfg.dfa_states:
        models[f"dfa q={q}"] = dfa_relations(q, partial=False)
        models[f"pdfa q={q}"] = dfa_relations(q, partial=True)
    report = {}
    for name, T in models.items():
        C = codes(T)
        for scope in ("words", "lengths"):
            per_f, fixed = survey(C, scope == "lengths")
            for mode, values in (("per-F", per_f), ("fixed", fixed)):
                s = summarise(values)
                report[f"{name} {mode} {scope}"] = s
                print(f"{name:10} {mode:6} {scope:8} max={s['max']}  at {{000,001,100}}={s['at_figure_set']}  "
                      f"argmax={len(s['argmax'])} sets  similar={len(s['similar_sets'])}")
    target = [k for k, s in report.items() if s["max"] == 6 and "000001100" in s["argmax"]]
    print("models matching 'max 6, attained at {000,001,100}':", target or "none")
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(json.dumps({"X": X, "models": report, "matching": target}, indent=1, sort_keys=True) + "\n")
    print(f"wrote {cfg.out}")


if __name__ == "__main__":
    main()
