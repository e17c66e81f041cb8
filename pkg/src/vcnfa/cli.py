"""Command-line workbench.

Exit codes: 0 exact result, 3 result is only a bound (budget or frontier
limited), 2 invalid arguments, 4 request beyond the enumeration budget,
5 corrupt cache file.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from . import cache
from .automata import FiniteLanguage, index_word, render
from .constructions import (
    build_schematic,
    closed_walk_column_sequences,
    cp_bound,
    cph_construct,
    cph_params,
    hyde_witness,
)
from .enumeration import BudgetExceeded, SearchBudget
from .search import (
    an_nondet,
    lower_vc,
    max_an_words,
    monotonicity_probe,
    sep,
    sep_max,
    similarity_profile,
    upper_vc,
    ShatterReport,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BOUND = 3
EXIT_INFEASIBLE = 4
EXIT_CORRUPT = 5

# (q, largest n) swept by `table2`
TABLE2_FRONTIER = {1: 7, 2: 7, 3: 5}
# per-cell search limit for `table2` without --budget-secs; (5,3) is the only cell that needs it
TABLE2_CELL_SECS = 300.0


class UsageError(ValueError):
    pass


def _word_list(text: str | None) -> list[str]:
    if text is None:
        return []
    words = [w.strip() for w in text.split(",")]
    words = ["" if w in ("", "λ", "lambda") else w for w in words]
    for w in words:
        if any(c not in "01" for c in w):
            raise UsageError(f"invalid word {w!r}: use 0/1 only")
    return words


def _language(args) -> FiniteLanguage:
    if args.mask is not None:
        if args.n is None:
            raise UsageError("--mask needs --n")
        try:
            mask = int(args.mask, 16)
        except ValueError:
            raise UsageError(f"invalid hexadecimal mask {args.mask!r}") from None
        try:
            return FiniteLanguage(args.n, mask)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.random:
        if args.n is None:
            raise UsageError("--random needs --n")
        rng = random.Random(args.seed)
        return FiniteLanguage(args.n, rng.getrandbits(1 << args.n))
    if args.words is None:
        raise UsageError("give --words or --mask")
    words = _word_list(args.words)
    n = args.n if args.n is not None else len(words[0])
    try:
        return FiniteLanguage.from_words(words, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _budget(args) -> SearchBudget:
    return SearchBudget(max_seconds=args.budget_secs, jobs=args.jobs)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required")


def _emit(args, obj, text: str) -> None:
    if args.format == "json":
        print(json.dumps(obj, sort_keys=True))
    else:
        print(text)


def _traces(args, q, n):
    return cache.cached_traces(q, n, budget=_budget(args), cache_dir=args.cache_dir)


def cmd_bounds(args) -> int:
    ns = [args.n] if args.n is not None else range(9)
    rows = []
    for n in ns:
        terms, total = cp_bound(n)
        P = cph_params(n)
        rows.append({"n": n, "cp_terms": terms, "cp_total": total, "cph_terms": list(P.a_seq), "cph_bound": P.bound})
    text = "\n".join(
        f"{r['n']}: {r['cp_total']}  ({'+'.join(map(str, r['cp_terms']))})  CP-H {r['cph_bound']}" for r in rows
    )
    _emit(args, rows, text)
    return EXIT_OK


def cmd_construct(args) -> int:
    F = _language(args)
    C = cph_construct(F)
    if args.format == "dot":
        print(render(C.nfa, "dot"), end="")
    elif args.format == "json":
        print(json.dumps(C.to_dict(), sort_keys=True))
    else:
        print(f"n={F.n} |F|={len(F)} states={C.q} bound={cph_params(F.n).bound} columns={C.column_sizes()}")
    return EXIT_OK


def cmd_hyde(args) -> int:
    _need(args, "words")
    (x,) = _word_list(args.words)[:1]
    M = hyde_witness(x)
    if args.format in ("dot", "json"):
        print(render(M, args.format), end="\n" if args.format == "json" else "")
    else:
        print(f"x={x or 'λ'} states={M.q} bound={len(x) // 2 + 1}")
    return EXIT_OK


def cmd_schematic(args) -> int:
    _need(args, "t", "a")
    S = build_schematic(args.t, args.a)
    n = args.n if args.n is not None else args.t + 2 * args.a + 2
    walks = closed_walk_column_sequences(args.t, args.a, n)
    obj = {"t": S.t, "a": S.a, "edges": sorted(map(list, S.edges)), "n": n, "walks": [list(w) for w in walks]}
    if args.format == "dot":
        lines = ["digraph schematic {", "  0 [shape=doublecircle];"]
        lines += [f"  {u} -> {v};" for u, v in sorted(S.edges)]
        print("\n".join(lines + ["}"]))
    else:
        text = f"M_(t={S.t},a={S.a}) edges={sorted(S.edges)}\nclosed walks of length {n}: {len(walks)}"
        text += "".join(f"\n  {' '.join(map(str, w))}" for w in walks[:20])
        _emit(args, obj, text)
    return EXIT_OK


def _tag(exact: bool) -> str:
    return "exact" if exact else "lower bound"


def _report(args, n, q) -> ShatterReport:
    T = _traces(args, q, n)
    budget = _budget(args)
    up = upper_vc(n, q, T, budget)
    lo = lower_vc(n, q, T, budget)
    return ShatterReport(n, q, up.value, up.exact, lo.value, lo.exact, up.witness or (), lo.counterexample)


def cmd_vc(args) -> int:
    _need(args, "n", "q")
    r = _report(args, args.n, args.q)
    text = f"n={r.n} q={r.q}: upper={r.upper} ({_tag(r.upper_exact)}), lower={r.lower} ({_tag(r.lower_exact)})"
    text += f"\nwitness: {{{', '.join(index_word(r.n, i) or 'λ' for i in r.witness)}}}"
    if r.counterexample:
        s, f = r.counterexample
        text += f"\nnot shattered: {{{', '.join(index_word(r.n, i) for i in s)}}}"
        text += f" misses F={{{', '.join(index_word(r.n, i) for i in f)}}}"
    _emit(args, r.to_dict(), text)
    return EXIT_OK if r.exact else EXIT_BOUND


def cmd_table2(args) -> int:
    if args.budget_secs is None:
        args.budget_secs = TABLE2_CELL_SECS
    qs = [args.q] if args.q is not None else sorted(TABLE2_FRONTIER)
    cells = []
    for q in qs:
        top = args.n if args.n is not None else TABLE2_FRONTIER.get(q, 0)
        for n in range(top + 1):
            cells.append(_report(args, n, q))
    exact = all(c.exact for c in cells)
    lines = []
    for q in reversed(qs):
        row = [c for c in cells if c.q == q]
        fmt = [f"{'' if c.upper_exact else '>='}{c.upper}/{'' if c.lower_exact else '>='}{c.lower}" for c in row]
        lines.append(f"q={q}: " + "  ".join(f"n={c.n}:{s}" for c, s in zip(row, fmt)))
    _emit(args, [c.to_dict() for c in cells], "\n".join(lines))
    return EXIT_OK if exact else EXIT_BOUND


def cmd_an(args) -> int:
    if args.words is not None:
        words = _word_list(args.words)
        vals = {w: an_nondet(w) for w in words}
        _emit(args, vals, "\n".join(f"A_N({w or 'λ'}) = {v}" for w, v in vals.items()))
        return EXIT_OK
    _need(args, "n")
    top, words = max_an_words(args.n)
    _emit(args, {"n": args.n, "max": top, "words": sorted(words)}, f"max A_N over length {args.n} = {top}: {', '.join(sorted(words)) or 'λ'}")
    return EXIT_OK


def cmd_sep(args) -> int:
    if args.words is not None:
        words = _word_list(args.words)
        if len(words) != 2:
            raise UsageError("sep needs exactly two words")
        v = sep(*words)
        _emit(args, {"w": words[0], "x": words[1], "sep": v}, f"sep({words[0]}, {words[1]}) = {v}")
        return EXIT_OK
    _need(args, "n")
    v = sep_max(args.n)
    _emit(args, {"n": args.n, "S": v}, f"S({args.n}) = {v}")
    return EXIT_OK


def cmd_similar(args) -> int:
    _need(args, "words", "other")
    X, Y = _word_list(args.words), _word_list(args.other)
    q = args.q if args.q is not None else 2
    p = similarity_profile(X, Y, q, budget=_budget(args), scope=args.scope)
    obj = {"value": p.value, "k": len(X), "q": q, "scope": args.scope, "pairing": [list(t) for t in p.pairing], "realized": [list(f) for f in p.realized]}
    text = f"{p.value} of {1 << len(X)} subsets realised (q={q}, scope={args.scope}); pairing " + ", ".join(f"{a}~{b}" for a, b in p.pairing)
    _emit(args, obj, text)
    return EXIT_OK


def cmd_probe(args) -> int:
    _need(args, "q")
    top = args.n if args.n is not None else TABLE2_FRONTIER.get(args.q, 4)
    rep = monotonicity_probe(args.q, range(top + 1), budget=_budget(args), diagonal=args.q + 1 in TABLE2_FRONTIER)
    lines = [f"q={args.q}: " + ", ".join(f"n={n}:{'' if c.exact else '>='}{c.value}" for n, c in rep.cells.items())]
    for (a, b), ok in rep.nondecreasing.items():
        lines.append(f"  n={a}->{b}: {'nondecreasing' if ok else 'undecided' if ok is None else 'DECREASES'}")
    for (a, b), (lo, hi, ok) in rep.diagonal.items():
        lines.append(f"  VC({a},{args.q})={lo.value} <= VC({b},{args.q + 1})={hi.value}: {ok}")
    obj = {
        "q": args.q,
        "cells": {str(n): {"upper": c.value, "exact": c.exact} for n, c in rep.cells.items()},
        "nondecreasing": {f"{a}-{b}": v for (a, b), v in rep.nondecreasing.items()},
    }
    _emit(args, obj, "\n".join(lines))
    exact = all(c.exact for c in rep.cells.values())
    return EXIT_OK if exact else EXIT_BOUND


def cmd_cache(args) -> int:
    directory = args.cache_dir or cache.default_cache_dir()
    if directory is None:
        raise UsageError(f"give --cache-dir or set {cache.ENV_VAR}")
    if args.action == "clear":
        print(f"removed {cache.clear(directory)} entries")
        return EXIT_OK
    for path in cache.entries(directory):
        T = cache.decode(path.read_bytes())
        print(f"{path.name}: q={T.q} n={T.n} alphabet={T.alphabet} exact={T.exact} traces={len(T)}")
    return EXIT_OK


COMMANDS = {
    "bounds": cmd_bounds,
    "construct": cmd_construct,
    "hyde": cmd_hyde,
    "schematic": cmd_schematic,
    "vc": cmd_vc,
    "table2": cmd_table2,
    "an": cmd_an,
    "sep": cmd_sep,
    "similar": cmd_similar,
    "probe-monotone": cmd_probe,
    "cache": cmd_cache,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--q", type=int)
    common.add_argument("--words", help="comma-separated 0/1 words")
    common.add_argument("--other", help="second word list (similar)")
    common.add_argument("--mask", help="hexadecimal trace mask (with --n)")
    common.add_argument("--random", action="store_true", help="random F of length --n (construct)")
    common.add_argument("--t", type=int)
    common.add_argument("--a", type=int)
    common.add_argument("--format", choices=("text", "dot", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--budget-secs", type=float)
    common.add_argument("--cache-dir", type=Path)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="vcnfa", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "similar":
            p.add_argument("--scope", choices=("words", "lengths"), default="words",
                           help="inspect only the given words, or require exact traces at their lengths")
        if name == "cache":
            p.add_argument("action", choices=("inspect", "clear"), nargs="?", default="inspect")
    return parser


def _validate(args) -> None:
    for name in ("n", "q", "t", "a"):
        v = getattr(args, name)
        if v is not None and v < 0:
            raise UsageError(f"--{name} must be nonnegative")
    if args.q is not None and args.q == 0:
        raise UsageError("--q must be at least 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        _validate(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except cache.CacheCorruptError as exc:
        print(f"error: corrupt cache: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
