"""Avoiding words: avoid-or-compress via the count-vector span, its iterated
forms, the global quadratic avoiding bound and subset avoidance."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .automaton import (
    Automaton,
    PreconditionError,
    StateSet,
    Word,
    apply_word,
    classify,
    preimage,
)
from .linalg import EchelonBasis, apply_letter, count_vector


class Outcome(enum.Enum):
    AVOIDED = "avoided"
    COMPRESSED = "compressed"
    BULK_COMPRESSED = "bulk-compressed"
    SUBSET_AVOIDED = "subset-avoided"
    NEITHER = "neither"


@dataclass(frozen=True)
class AvoidCompressOutcome:
    kind: Outcome
    word: Optional[Word] = None
    witness: Optional[int] = None


class InvariantError(RuntimeError):
    """A construction failed where its correctness argument guarantees success."""


class ConstructionStuck(RuntimeError):
    """An earlier compressing step trapped the image in a set from which ``A``
    can no longer be avoided, although it may be avoidable from the start.

    Only possible when compressing steps merge states into ``A``; never in a
    synchronizing automaton without a sink, where every non-empty ``A`` is
    avoidable from every non-empty subset.
    """


@dataclass
class WordChain:
    """Words whose count vectors ``[S][w]`` form a basis of the reachable span.

    ``entries[i]`` is the ``(word, vector)`` added at step ``i``; the first
    ``i + 1`` entries play the role of the reduced set of words of length at
    most ``i``.  Word lengths are non-decreasing along ``entries``.
    """

    aut: Automaton
    S: StateSet
    entries: list = field(default_factory=list)
    stable: bool = False
    _basis: EchelonBasis = field(default=None, repr=False)
    _cursor: tuple = (0, 0)

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def words(self) -> list:
        return [w for w, _ in self.entries]

    def _start(self) -> None:
        self._basis = EchelonBasis(self.aut.n)
        v = count_vector(self.aut, self.S, ())
        self._basis.insert(v)
        self.entries.append(((), v))

    def _grow(self) -> bool:
        # a candidate found to lie in the span stays there; the cursor never
        # revisits it
        i, a = self._cursor
        k = self.aut.k
        while i < len(self.entries):
            w, v = self.entries[i]
            while a < k:
                u = apply_letter(self.aut, v, a)
                a += 1
                if self._basis.insert(u):
                    self.entries.append((w + (a - 1,), u))
                    self._cursor = (i, a)
                    return True
            i, a = i + 1, 0
        self._cursor = (i, a)
        self.stable = True
        return False

    def iter_entries(self) -> Iterator[tuple]:
        """Yield entries in construction order, extending the chain lazily."""
        if not self.entries:
            self._start()
        i = 0
        while True:
            while i < len(self.entries):
                yield self.entries[i]
                i += 1
            if self.stable or not self._grow():
                return

    def complete(self) -> "WordChain":
        for _ in self.iter_entries():
            pass
        return self


def reduced_chain(aut: Automaton, S: StateSet) -> WordChain:
    if not len(S):
        raise PreconditionError("reduced_chain needs a non-empty subset")
    return WordChain(aut, S).complete()


def _check_proper(S: StateSet, A: StateSet) -> None:
    if not len(A):
        raise PreconditionError("A must be non-empty")
    if not A <= S:
        raise PreconditionError(f"A={A} is not a subset of S={S}")
    if A == S:
        raise PreconditionError("A must be a proper subset of S")


def avoid_or_compress(aut: Automaton, S: StateSet, A: StateSet) -> AvoidCompressOutcome:
    """Word of length at most ``n - |A|`` that avoids a state of ``A`` from
    ``S`` or compresses ``S``; NEITHER when every reachable count vector
    equals 1 on all of ``A``."""
    _check_proper(S, A)
    a_states = list(A)
    for w, v in WordChain(aut, S).iter_entries():
        compressed_at = None
        for q in a_states:
            if v[q] == 0:
                return AvoidCompressOutcome(Outcome.AVOIDED, w, q)
            if v[q] >= 2 and compressed_at is None:
                compressed_at = q
        if compressed_at is not None:
            return AvoidCompressOutcome(Outcome.COMPRESSED, w, compressed_at)
    return AvoidCompressOutcome(Outcome.NEITHER)


def _moving_letter(aut: Automaton, A: StateSet) -> Optional[int]:
    for a in range(aut.k):
        if apply_word(aut, A, (a,)) != A:
            return a
    return None


def avoid_or_compress_iter(
    aut: Automaton, S: StateSet, A: StateSet, k: int
) -> AvoidCompressOutcome:
    """Up to ``k`` rounds of :func:`avoid_or_compress`.

    AVOIDED words have length at most ``k(n - |A|)``; BULK_COMPRESSED words
    shrink ``S`` by at least ``k`` states.
    """
    _check_proper(S, A)
    if k < 1:
        raise PreconditionError("k must be at least 1")
    word: Word = ()
    current = S
    for i in range(k):
        if not A <= current:
            return AvoidCompressOutcome(Outcome.AVOIDED, word, min(A - current))
        if A == current:
            a = _moving_letter(aut, A)
            if a is None:
                # A is closed under every letter and lies inside S
                return AvoidCompressOutcome(Outcome.NEITHER)
            word = word + (a,)
            current = apply_word(aut, A, (a,))
            return AvoidCompressOutcome(Outcome.AVOIDED, word, min(A - current))
        step = avoid_or_compress(aut, current, A)
        if step.kind is Outcome.NEITHER:
            if i == 0:
                return step
            raise ConstructionStuck(f"A={A} is unavoidable from the image {current}")
        word = word + step.word
        current = apply_word(aut, current, step.word)
        if step.kind is Outcome.AVOIDED:
            return AvoidCompressOutcome(Outcome.AVOIDED, word, step.witness)
    if not A <= current:
        return AvoidCompressOutcome(Outcome.AVOIDED, word, min(A - current))
    return AvoidCompressOutcome(Outcome.BULK_COMPRESSED, word)


def avoid_from(aut: Automaton, S: StateSet, A: StateSet) -> Optional[Word]:
    """Word ``w`` with ``A`` not contained in ``S.w`` and
    ``|w| <= (|S| - |A|)(n - |A|) + 1``, or None if ``A`` is unavoidable
    from ``S``.

    Raises :class:`ConstructionStuck` if a compressing step traps the image.
    """
    if not len(A):
        raise PreconditionError("A must be non-empty")
    if not A <= S:
        raise PreconditionError(f"A={A} is not a subset of S={S}")
    word: Word = ()
    current = S
    for _ in range(len(S) - len(A)):
        if A == current:
            break
        step = avoid_or_compress(aut, current, A)
        if step.kind is Outcome.NEITHER:
            if not word:
                return None
            raise ConstructionStuck(f"A={A} is unavoidable from the image {current}")
        word = word + step.word
        current = apply_word(aut, current, step.word)
        if not A <= current:
            return word
    if not A <= current:
        return word
    if A != current:
        # |current| <= |A| after |S| - |A| compressions
        raise InvariantError("image did not collapse onto A")
    a = _moving_letter(aut, A)
    if a is None:
        # A is closed under every letter and lies inside S
        return None
    return word + (a,)


def avoid_global(aut: Automaton, A: StateSet) -> Optional[Word]:
    """Word avoiding some state of ``A`` of length at most
    ``(n - 1 - |A|)(n - |A|) + 2``, or None if no state of ``A`` is avoidable."""
    if not len(A) or A == aut.states:
        raise PreconditionError("A must be a non-empty proper subset of Q")
    Q = aut.states
    for a in range(aut.k):
        image = apply_word(aut, Q, (a,))
        if len(image) < aut.n:
            break
    else:
        return None
    if not A <= image:
        return (a,)
    rest = avoid_from(aut, image, A)
    if rest is None:
        return None
    return (a,) + rest


def avoid_subset_or_compress(
    aut: Automaton,
    S: StateSet,
    D: StateSet,
    p: int,
    w_dprime: Sequence[int],
) -> AvoidCompressOutcome:
    """Word of length at most ``n - 1 + |w_dprime|`` with ``S.w`` disjoint
    from ``D`` (SUBSET_AVOIDED) or ``|S.w| < |S|`` (COMPRESSED).

    ``w_dprime`` must avoid ``D - {p}`` from the whole state set.
    """
    report = classify(aut)
    if not (report.strongly_connected and report.synchronizing):
        raise PreconditionError("automaton must be strongly connected and synchronizing")
    if not len(S):
        raise PreconditionError("S must be non-empty")
    if len(D) < 2 or p not in D:
        raise PreconditionError("D needs at least two states and must contain p")
    if len(S) == 1 and D == aut.states:
        raise PreconditionError("a single state can neither leave Q nor be compressed")
    w_dprime = tuple(w_dprime)
    rest = D - aut.stateset([p])
    if len(apply_word(aut, aut.states, w_dprime) & rest):
        raise PreconditionError(f"word does not avoid {rest}")
    if not len(S & D):
        return AvoidCompressOutcome(Outcome.SUBSET_AVOIDED, ())
    P = preimage(aut, aut.stateset([p]), w_dprime)
    size = len(S)
    for u, v in WordChain(aut, S).iter_entries():
        hits = sum(v[q] for q in P)
        compresses = any(x >= 2 for x in v)
        if hits == 0:
            return AvoidCompressOutcome(Outcome.SUBSET_AVOIDED, u + w_dprime)
        if compresses:
            return AvoidCompressOutcome(Outcome.COMPRESSED, u)
        if hits >= 2:
            # w_dprime sends every state of P to p
            return AvoidCompressOutcome(Outcome.COMPRESSED, u + w_dprime, p)
    if size == 1:
        # only reachable when w_dprime resets everything into p, so P = Q;
        # walk the single state to the nearest state outside D instead
        u = _path_out_of(aut, min(S), D)
        if u is not None:
            return AvoidCompressOutcome(Outcome.SUBSET_AVOIDED, u)
    raise InvariantError(f"no qualifying word found for S of size {size}")


def _path_out_of(aut: Automaton, q: int, D: StateSet) -> Optional[Word]:
    parent = {q: None}
    queue = deque([q])
    while queue:
        x = queue.popleft()
        if x not in D:
            path = []
            while parent[x] is not None:
                x, a = parent[x]
                path.append(a)
            return tuple(reversed(path))
        for a in range(aut.k):
            t = aut.delta[x][a]
            if t not in parent:
                parent[t] = (x, a)
                queue.append(t)
    return None


def avoid_subset(aut: Automaton, D: StateSet) -> Word:
    """Word whose image of Q misses all of ``D``, by iterating
    :func:`avoid_subset_or_compress` (strongly connected synchronizing only)."""
    if not len(D) or D == aut.states:
        raise PreconditionError("D must be a non-empty proper subset of Q")
    if len(D) == 1:
        report = classify(aut)
        if not (report.strongly_connected and report.synchronizing):
            raise PreconditionError("automaton must be strongly connected and synchronizing")
        w = avoid_global(aut, D)
        if w is None:
            raise InvariantError(f"state {D} unavoidable in a strongly connected automaton")
        return w
    p = max(D)
    w_dprime = avoid_subset(aut, D - aut.stateset([p]))
    word: Word = ()
    current = aut.states
    while True:
        step = avoid_subset_or_compress(aut, current, D, p, w_dprime)
        word = word + step.word
        current = apply_word(aut, current, step.word)
        if step.kind is Outcome.SUBSET_AVOIDED:
            return word
