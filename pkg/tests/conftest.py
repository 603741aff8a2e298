import itertools

import pytest
from hypothesis import strategies as st

from resetwords.automaton import Automaton, parse_automaton
from resetwords.generators import STRONGLY_CONNECTED, SYNCHRONIZING, GeneratorSpec, random_automaton

C4_TEXT = "4 2\n1 0\n2 1\n3 2\n0 0\n"


@pytest.fixture
def c4():
    return parse_automaton(C4_TEXT)


@pytest.fixture
def identity2():
    return parse_automaton("2 1\n0\n1\n")


@pytest.fixture
def const3():
    return Automaton(3, 1, ((0,), (0,), (0,)))


def walk(aut, q, w):
    for a in w:
        q = aut.delta[q][a]
    return q


def image(aut, S, w):
    return {walk(aut, q, w) for q in S}


def words_upto(k, length):
    for n in range(length + 1):
        yield from itertools.product(range(k), repeat=n)


def brute_shortest(aut, pred, start, max_len):
    """Shortest word (lexicographically least among those) whose image of
    ``start`` satisfies ``pred``, by plain enumeration."""
    for w in words_upto(aut.k, max_len):
        if pred(image(aut, start, w)):
            return w
    return None


def scc_sync_sample(count, n_lo=3, n_hi=8, k=2, offset=0):
    """Deterministic sample of strongly connected synchronizing automata."""
    span = n_hi - n_lo + 1
    out = []
    for i in range(count):
        n = n_lo + i % span
        spec = GeneratorSpec("random", n, k, offset + i, {SYNCHRONIZING, STRONGLY_CONNECTED})
        out.append(random_automaton(spec))
    return out


@st.composite
def automata(draw, max_n=6, max_k=3):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    rows = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=k, max_size=k),
                         min_size=n, max_size=n))
    return Automaton(n, k, tuple(map(tuple, rows)))


@st.composite
def automaton_and_word(draw, max_n=6, max_k=3, max_len=8):
    aut = draw(automata(max_n, max_k))
    w = tuple(draw(st.lists(st.integers(0, aut.k - 1), max_size=max_len)))
    return aut, w


# -- acceptance summary ----------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, {"title": title, "failed": []})
    if call.excinfo is not None:
        message = call.excinfo.exconly().splitlines()[0]
        entry["failed"].append(f"{item.name}: {message}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "FAIL" if entry["failed"] else "PASS"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {entry['title']}")
        for detail in entry["failed"]:
            terminalreporter.write_line(f"    {detail[:200]}")
