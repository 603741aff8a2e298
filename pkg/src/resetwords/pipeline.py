"""Reset words through avoiding words, with the cubic bound arithmetic.

The construction first compresses Q greedily to rank ``n - 4k``, then keeps
prepending avoiding words for states with a unique preimage until the rank
is at most ``n // 2``, and finishes greedily.  Whenever the avoiding search
instead produces a word of rank at most ``n - k``, that word is compressed
greedily to half rank.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .automaton import (
    Automaton,
    NotSynchronizingError,
    PreconditionError,
    StateSet,
    Word,
    apply_word,
    classify,
    preimage_census,
    rank,
)
from .avoiding import InvariantError, Outcome, avoid_or_compress_iter
from .compression import (
    PairTable,
    build_pair_table,
    c_bound,
    greedy_compress_to,
    classic_bound,
    shortest_compress_step,
)

NEW_BOUND_DENOMINATOR = 511104


class Branch(enum.Enum):
    AVOIDING = "avoiding"
    BULK_COMPRESS = "bulk-compress"
    SINK = "sink"
    GREEDY_FALLBACK = "greedy-fallback"


@dataclass(frozen=True)
class ResetCertificate:
    word: Word
    rank_trace: tuple  # (word length, rank) after each construction step
    branch: Branch
    k_used: int
    bound_value: Fraction

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def within_bound(self) -> bool:
        return len(self.word) <= self.bound_value


@dataclass(frozen=True)
class HalfRankResult:
    word: Word
    branch: Branch
    start: Word
    trace: tuple  # (word length, rank) after stage 1 and after each later step


def choose_k(n: int) -> int:
    """Avoiding-word length parameter; 0 means the construction does not apply."""
    if n < 1:
        raise PreconditionError("n must be positive")
    if n < 9:
        return 0
    return min(max(5 * n // 44, 1), n // 8)


def avoiding_half_bound(n: int, k: int) -> Fraction:
    """Half-rank length guaranteed when every avoiding search succeeds."""
    return Fraction(k * (3 * n * n - 64 * k * k + 144 * k + 13), 12)


def bulk_bound(n: int, k: int) -> int:
    """Half-rank length guaranteed after a bulk compression of ``k`` states."""
    return k * (n - 1) + c_bound(n, n - k, n // 2)


def parametrized_bound(n: int, k: int) -> Fraction:
    if not 1 <= k <= n / 8:
        raise PreconditionError(f"need 1 <= k <= n/8, got n={n}, k={k}")
    return max(avoiding_half_bound(n, k), Fraction(bulk_bound(n, k))) + c_bound(n, n // 2, 1)


def new_bound(n: int) -> Fraction:
    return Fraction(85059 * n ** 3 + 90024 * n ** 2 + 196504 * n - 10648, NEW_BOUND_DENOMINATOR)


def sink_bound(n: int) -> int:
    return n * (n - 1) // 2


def closed_form_c_upper(n: int, k: int) -> Fraction:
    """Closed form of ``C(n-k, n//2)`` by parity of n."""
    if n % 2 == 0:
        return Fraction(n ** 3 + 6 * n ** 2 + 8 * n - 8 * k ** 3 - 24 * k ** 2 - 16 * k, 48)
    return Fraction(n ** 3 + 9 * n ** 2 + 23 * n - 8 * k ** 3 - 24 * k ** 2 - 16 * k + 15, 48)


def closed_form_c_lower(n: int) -> Fraction:
    """Closed form of ``C(n//2, 1)`` by parity of n, as used in the cubic bound.

    The odd-n form is exact.  The even-n form ends in ``-16`` where the sum
    gives ``-16n``, so it overstates ``C(n/2, 1)`` by ``(n - 1)/3``; the bound
    built on it stays valid but is not tight.  :func:`c_bound` is exact.
    """
    if n % 2 == 0:
        return Fraction(7 * n ** 3 - 6 * n ** 2 - 16, 48)
    return Fraction(7 * n ** 3 - 9 * n ** 2 - 31 * n - 15, 48)


def crossover_polynomial(n: int) -> int:
    """Positive exactly when the new bound beats ``(n^3 - n)/6 - 1``."""
    return 125 * n ** 3 - 90024 * n ** 2 - 281688 * n - 500456


@dataclass(frozen=True)
class BoundReport:
    n: int
    classic_bound: Fraction
    new_bound: Fraction
    sink_bound: int
    parametrized: dict = field(default_factory=dict)  # k -> Fraction
    c_upper_closed: dict = field(default_factory=dict)  # k -> C(n-k, n//2)
    c_lower_closed: Optional[Fraction] = None  # C(n//2, 1)
    k_choice: int = 0

    @property
    def improves(self) -> bool:
        return self.new_bound < self.classic_bound - 1


def bound_report(n: int, ks: Iterable[int] = ()) -> BoundReport:
    if n < 1:
        raise PreconditionError("n must be positive")
    ks = list(ks)
    k_choice = choose_k(n)
    if not ks and k_choice:
        ks = [k_choice]
    parametrized = {}
    upper = {}
    for k in ks:
        parametrized[k] = parametrized_bound(n, k)
        upper[k] = closed_form_c_upper(n, k)
    return BoundReport(
        n=n,
        classic_bound=classic_bound(n),
        new_bound=new_bound(n),
        sink_bound=sink_bound(n),
        parametrized=parametrized,
        c_upper_closed=upper,
        c_lower_closed=closed_form_c_lower(n) if n >= 2 else None,
        k_choice=k_choice,
    )


def first_improving_n(n_max: int) -> Optional[int]:
    for n in range(1, n_max + 1):
        if new_bound(n) < classic_bound(n) - 1:
            return n
    return None


def avoiding_or_bulk(aut: Automaton, A: StateSet, k: int):
    """Avoid a state of ``A`` from Q, or compress Q by ``k`` states."""
    if not len(A) or A == aut.states:
        raise PreconditionError("A must be a non-empty proper subset of Q")
    outcome = avoid_or_compress_iter(aut, aut.states, A, k)
    if outcome.kind is Outcome.NEITHER:
        raise InvariantError(f"no avoiding or compressing word for A={A}; is there a sink?")
    return outcome


def unique_preimage_sources(aut: Automaton, w: Word, count: int) -> StateSet:
    """The sole preimages of the ``count`` smallest image states of ``w``
    that have exactly one preimage.

    Avoiding any one of these states before ``w`` removes its image from
    ``Q.w``.
    """
    t = aut.transformation(w)
    census = preimage_census(aut, w)
    singles = census.states_with_size(1)
    if len(singles) < count:
        raise InvariantError(
            f"only {len(singles)} image states have a unique preimage, need {count}"
        )
    chosen = set(singles[:count])
    return aut.stateset(p for p in range(aut.n) if t[p] in chosen)


def _check_pipeline_input(aut: Automaton) -> None:
    report = classify(aut)
    if not report.synchronizing:
        raise NotSynchronizingError("automaton is not synchronizing")
    if report.sink is not None:
        raise PreconditionError(f"state {report.sink} is a sink")


def compress_to_half(
    aut: Automaton, k: int, table: PairTable | None = None, *, checked: bool = False
) -> HalfRankResult:
    n = aut.n
    if n < 9 or not 1 <= k <= n / 8:
        raise PreconditionError(f"need n >= 9 and 1 <= k <= n/8, got n={n}, k={k}")
    if not checked:
        _check_pipeline_input(aut)
    table = table or build_pair_table(aut)
    Q = aut.states
    half = n // 2
    start = greedy_compress_to(aut, Q, n - 4 * k, table)
    w = start
    r = rank(aut, w)
    trace = [(len(w), r)]
    while r > half:
        X = unique_preimage_sources(aut, w, 2 * r - n)
        outcome = avoiding_or_bulk(aut, X, k)
        if outcome.kind is Outcome.AVOIDED:
            w = outcome.word + w
            r_next = rank(aut, w)
            if r_next >= r:
                raise InvariantError("prepending an avoiding word did not lower the rank")
            r = r_next
            trace.append((len(w), r))
            continue
        # both continuations are computed; the bulk one carries the guarantee
        candidates = []
        for base in (outcome.word, w):
            image = apply_word(aut, Q, base)
            tail = greedy_compress_to(aut, image, min(half, len(image)), table)
            candidates.append(base + tail)
        best = min(candidates, key=len)
        trace.append((len(best), rank(aut, best)))
        return HalfRankResult(best, Branch.BULK_COMPRESS, start, tuple(trace))
    return HalfRankResult(w, Branch.AVOIDING, start, tuple(trace))


def _sink_reset(aut: Automaton, sink: int) -> tuple:
    """Repeatedly send the image state closest to the sink into it."""
    n = aut.n
    dist = [None] * n
    dist[sink] = 0
    pred = [[] for _ in range(n)]
    for q, row in enumerate(aut.delta):
        for t in set(row):
            pred[t].append(q)
    queue = deque([sink])
    while queue:
        x = queue.popleft()
        for q in pred[x]:
            if dist[q] is None:
                dist[q] = dist[x] + 1
                queue.append(q)
    if any(d is None for d in dist):
        raise NotSynchronizingError("some state cannot reach the sink")

    def path(q: int) -> Word:
        w = []
        while q != sink:
            for a in range(aut.k):
                t = aut.columns[a][q]
                if dist[t] == dist[q] - 1:
                    w.append(a)
                    q = t
                    break
        return tuple(w)

    word: Word = ()
    current = aut.states
    trace = []
    while len(current) > 1:
        q = min((x for x in current if x != sink), key=lambda x: (dist[x], x))
        step = path(q)
        word = word + step
        current = apply_word(aut, current, step)
        trace.append((len(word), len(current)))
    return word, tuple(trace)


def _greedy_trace(aut: Automaton, table: PairTable, prefix: Word, target: int) -> tuple:
    word = prefix
    current = apply_word(aut, aut.states, prefix)
    trace = []
    while len(current) > target:
        step = shortest_compress_step(aut, current, table)
        if step is None:
            raise NotSynchronizingError(f"no pair of {current} can be merged")
        word = word + step
        current = apply_word(aut, current, step)
        trace.append((len(word), len(current)))
    return word, tuple(trace)


def pipeline_reset(aut: Automaton) -> ResetCertificate:
    report = classify(aut)
    if not report.synchronizing:
        raise NotSynchronizingError("automaton is not synchronizing")
    n = aut.n
    if report.sink is not None:
        word, trace = _sink_reset(aut, report.sink)
        return ResetCertificate(word, trace, Branch.SINK, 0, Fraction(sink_bound(n)))
    table = build_pair_table(aut)
    k = choose_k(n)
    if k == 0:
        word, trace = _greedy_trace(aut, table, (), 1)
        return ResetCertificate(word, trace, Branch.GREEDY_FALLBACK, 0, classic_bound(n))
    half = compress_to_half(aut, k, table, checked=True)
    word, tail = _greedy_trace(aut, table, half.word, 1)
    trace = half.trace + tail
    return ResetCertificate(word, trace, half.branch, k, parametrized_bound(n, k))
