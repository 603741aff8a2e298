from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from resetwords.automaton import StateSet, apply_word
from resetwords.linalg import EchelonBasis, apply_letter, count_vector

from conftest import automata, automaton_and_word, words_upto


def fraction_rank(rows):
    """Plain Gaussian elimination over the rationals."""
    m = [[Fraction(x) for x in r] for r in rows]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def test_count_vector_examples(c4):
    S = c4.stateset([0, 2, 3])
    assert count_vector(c4, S, (1, 0)) == (0, 2, 0, 1)
    assert count_vector(c4, S, ()) == (1, 0, 1, 1)
    assert count_vector(c4, c4.stateset([]), (0, 1, 1)) == (0, 0, 0, 0)
    assert count_vector(c4, c4.states, (1,)) == (2, 1, 1, 0)


def test_basis_insert_examples():
    B = EchelonBasis(4)
    assert B.insert((1, 0, 1, 1)) and B.dim == 1
    assert not B.insert((2, 0, 2, 2)) and B.dim == 1
    assert B.insert((0, 2, 0, 1)) and B.dim == 2
    assert B.contains((1, 2, 1, 2))
    assert not B.insert((0, 0, 0, 0))


@given(automaton_and_word(), st.data())
def test_count_vector_properties(pair, data):
    aut, w = pair
    S = StateSet(aut.n, bits=data.draw(st.integers(0, (1 << aut.n) - 1)))
    v = count_vector(aut, S, w)
    assert sum(v) == len(S)
    assert {i for i, x in enumerate(v) if x >= 1} == apply_word(aut, S, w)
    # letters act on vectors as the transposed transformation matrix
    if w:
        assert apply_letter(aut, count_vector(aut, S, w[:-1]), w[-1]) == v


@settings(max_examples=150, deadline=None)
@given(automata(max_n=6, max_k=2), st.data())
def test_basis_dim_matches_fraction_rank(aut, data):
    S = StateSet(aut.n, bits=data.draw(st.integers(1, (1 << aut.n) - 1)))
    length = data.draw(st.integers(0, 4))
    vectors = [count_vector(aut, S, w) for w in words_upto(aut.k, length)]
    order = data.draw(st.permutations(range(len(vectors))))
    B = EchelonBasis(aut.n)
    dims = [0]
    for i in order:
        was_in_span = B.contains(vectors[i])
        grew = B.insert(vectors[i])
        dims.append(B.dim)
        assert B.contains(vectors[i])
        assert grew == (not was_in_span) == (dims[-1] == dims[-2] + 1)
    assert dims == sorted(dims)
    assert B.dim == fraction_rank(vectors)
    pivots = [next(j for j, x in enumerate(r) if x) for r in B.rows]
    assert len(set(pivots)) == len(pivots) <= aut.n


@settings(max_examples=100, deadline=None)
@given(automata(max_n=6, max_k=2), st.data())
def test_span_stabilizes(aut, data):
    S = StateSet(aut.n, bits=data.draw(st.integers(1, (1 << aut.n) - 1)))
    dims = []
    for i in range(aut.n + 2):
        B = EchelonBasis(aut.n)
        for w in words_upto(aut.k, i):
            B.insert(count_vector(aut, S, w))
        dims.append(B.dim)
    for i in range(len(dims) - 1):
        assert dims[i] <= dims[i + 1]
        if dims[i] == dims[i + 1]:
            assert all(d == dims[i] for d in dims[i:])
