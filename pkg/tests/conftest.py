import functools
import json
from pathlib import Path

import pytest
from hypothesis import strategies as st

from vcnfa.automata import Nfa
from vcnfa.enumeration import enumerate_traces

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> Nfa:
    return Nfa.from_dict(json.loads((FIXTURES / f"{name}.json").read_text()))


@st.composite
def nfas(draw, max_states=4, alphabet=2):
    q = draw(st.integers(1, max_states))
    triples = st.tuples(st.integers(0, q - 1), st.integers(0, alphabet - 1), st.integers(0, q - 1))
    edges = draw(st.frozensets(triples, max_size=3 * q * alphabet))
    accepts = draw(st.frozensets(st.integers(0, q - 1)))
    return Nfa(q, 0, accepts, edges, alphabet=alphabet)


def universal() -> Nfa:
    return Nfa(1, 0, {0}, {(0, 0, 0), (0, 1, 0)})


# -- acceptance summary -----------------------------------------------------

_criteria: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria[label] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{_criteria[label]:4}  criterion {label}")


@functools.lru_cache(maxsize=None)
def traces(q: int, n: int, alphabet: int = 2):
    return enumerate_traces(q, n, alphabet)
