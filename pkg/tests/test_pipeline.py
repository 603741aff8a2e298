from fractions import Fraction

import pytest
from hypothesis import given, settings

from resetwords.automaton import (
    Automaton,
    NotSynchronizingError,
    PreconditionError,
    apply_word,
    classify,
    rank,
)
from resetwords.avoiding import Outcome
from resetwords.compression import c_bound, classic_bound
from resetwords.generators import (
    STRONGLY_CONNECTED,
    SYNCHRONIZING,
    GeneratorSpec,
    cerny,
    random_automaton,
)
from resetwords.pipeline import (
    Branch,
    avoiding_or_bulk,
    bound_report,
    bulk_bound,
    choose_k,
    closed_form_c_lower,
    closed_form_c_upper,
    compress_to_half,
    crossover_polynomial,
    first_improving_n,
    avoiding_half_bound,
    new_bound,
    parametrized_bound,
    pipeline_reset,
    sink_bound,
    unique_preimage_sources,
)

from conftest import automata


def large_sample(count, n_lo=9, n_hi=60, offset=0):
    span = n_hi - n_lo + 1
    out = []
    for i in range(count):
        spec = GeneratorSpec("random", n_lo + i % span, 2, offset + i,
                             {SYNCHRONIZING, STRONGLY_CONNECTED}, method="core")
        out.append(random_automaton(spec))
    return out


def test_choose_k_examples():
    assert choose_k(44) == 5
    assert choose_k(9) == 1
    assert choose_k(8) == 0
    assert choose_k(1) == 0
    for n in range(9, 500):
        k = choose_k(n)
        assert 1 <= k <= n / 8


def test_bound_report_examples():
    r = bound_report(10)
    assert r.classic_bound == 165
    assert r.new_bound == Fraction(96015792, 511104)
    assert not r.improves
    assert r.parametrized == {1: parametrized_bound(10, 1)} and r.k_choice == 1
    r1 = bound_report(1)
    assert r1.classic_bound == 0 and r1.sink_bound == 0 and r1.parametrized == {}
    assert bound_report(724).improves and not bound_report(723).improves
    assert bound_report(50, ks=[1, 3, 6]).parametrized.keys() == {1, 3, 6}


def test_crossover():
    assert first_improving_n(2000) == 724
    assert first_improving_n(723) is None
    for n in range(1, 2001):
        assert (new_bound(n) < classic_bound(n) - 1) == (crossover_polynomial(n) > 0)


def test_closed_forms_against_summation():
    for n in range(2, 201):
        exact = c_bound(n, n // 2, 1)
        if n % 2:
            assert closed_form_c_lower(n) == exact
        else:
            assert Fraction(7 * n ** 3 - 6 * n ** 2 - 16 * n, 48) == exact
            # the even form overstates the sum, which keeps the bound valid
            assert closed_form_c_lower(n) - exact == Fraction(n - 1, 3)
        for k in range(1, n // 8 + 1):
            assert closed_form_c_upper(n, k) == c_bound(n, n - k, n // 2)
        if n % 2 == 0 and n > 2:
            # the even value dominates the neighbouring odd one
            assert exact > c_bound(n - 1, (n - 1) // 2, 1)
            assert closed_form_c_lower(n) > closed_form_c_lower(n - 1)


def test_parametrized_bound_shape():
    n, k = 44, 5
    value = parametrized_bound(n, k)
    assert value == max(avoiding_half_bound(n, k), bulk_bound(n, k)) + c_bound(n, n // 2, 1)
    with pytest.raises(PreconditionError):
        parametrized_bound(44, 6)
    with pytest.raises(PreconditionError):
        parametrized_bound(44, 0)
    assert sink_bound(5) == 10


def test_avoiding_or_bulk_examples(c4):
    out = avoiding_or_bulk(c4, c4.stateset([3]), 1)
    assert out.kind is Outcome.AVOIDED and out.word == (1,)
    out = avoiding_or_bulk(c4, c4.stateset([1]), 1)
    assert out.kind in (Outcome.AVOIDED, Outcome.BULK_COMPRESSED) and len(out.word) <= 3
    with pytest.raises(PreconditionError):
        avoiding_or_bulk(c4, c4.states, 1)


def test_unique_preimage_sources(c4):
    # Q.b = {0,1,2}; 1 and 2 have the unique preimages 1 and 2
    assert unique_preimage_sources(c4, (1,), 2) == {1, 2}
    assert unique_preimage_sources(c4, (1,), 1) == {1}


def test_pipeline_on_c4(c4):
    cert = pipeline_reset(c4)
    assert cert.branch is Branch.GREEDY_FALLBACK and cert.k_used == 0
    assert len(apply_word(c4, c4.states, cert.word)) == 1
    assert cert.length == 10 and cert.within_bound


def test_pipeline_on_c10():
    c10 = cerny(10)
    cert = pipeline_reset(c10)
    assert cert.k_used == 1 and cert.bound_value == parametrized_bound(10, 1)
    assert rank(c10, cert.word) == 1 and cert.within_bound


def test_sink_branch_example():
    aut = Automaton(5, 2, ((0, 0), (2, 0), (3, 1), (4, 2), (1, 3)))
    assert classify(aut).sink == 0
    cert = pipeline_reset(aut)
    assert cert.branch is Branch.SINK and rank(aut, cert.word) == 1
    assert cert.length <= 10 and cert.bound_value == 10


@settings(max_examples=200, deadline=None)
@given(automata(max_n=8, max_k=3))
def test_sink_branch_bound(aut):
    report = classify(aut)
    if report.sink is None or not report.synchronizing:
        return
    cert = pipeline_reset(aut)
    assert cert.branch is Branch.SINK
    assert rank(aut, cert.word) == 1 and cert.length <= sink_bound(aut.n)


def test_pipeline_rejects_non_synchronizing(identity2):
    with pytest.raises(NotSynchronizingError):
        pipeline_reset(identity2)
    with pytest.raises(NotSynchronizingError):
        compress_to_half(Automaton(9, 1, tuple((q,) for q in range(9))), 1)
    with pytest.raises(PreconditionError):
        compress_to_half(cerny(9), 2)


def _check_trace(trace):
    # lengths may shrink when the bulk branch keeps the shorter completion
    ranks = [r for _, r in trace]
    assert all(a > b for a, b in zip(ranks, ranks[1:]))


def test_half_rank_on_sample():
    branches = set()
    for aut in large_sample(120, offset=7000):
        n = aut.n
        k = choose_k(n)
        half = compress_to_half(aut, k)
        branches.add(half.branch)
        assert rank(aut, half.word) <= n // 2
        assert len(half.start) <= c_bound(n, n, n - 4 * k) == Fraction(4 * k * (8 * k * k + 6 * k + 1), 3)
        _check_trace(half.trace)
        if half.branch is Branch.AVOIDING:
            for (l0, r0), (l1, _) in zip(half.trace, half.trace[1:]):
                assert l1 - l0 <= 2 * k * (n - r0)
            assert len(half.word) <= avoiding_half_bound(n, k)
            # every word prepended at rank r costs at most 2k(n-r)
            r_start = half.trace[0][1]
            budget = sum(2 * k * (n - r) for r in range(n // 2 + 1, r_start + 1))
            assert len(half.word) <= len(half.start) + budget
        else:
            assert len(half.word) <= bulk_bound(n, k)
    assert Branch.AVOIDING in branches


def test_pipeline_certificates_on_sample():
    for aut in large_sample(60, offset=9100):
        cert = pipeline_reset(aut)
        assert rank(aut, cert.word) == 1
        assert cert.within_bound and cert.length <= classic_bound(aut.n)
        _check_trace(cert.rank_trace)
        assert cert.bound_value == parametrized_bound(aut.n, choose_k(aut.n))
