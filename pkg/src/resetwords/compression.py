"""Pair-automaton distances, greedy compression and the cumulative
compression bound."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .automaton import (
    Automaton,
    NotSynchronizingError,
    PreconditionError,
    StateSet,
    Word,
    apply_word,
    letter_preimages,
)

INF = -1


@dataclass(frozen=True)
class PairTable:
    """Shortest merging words for every unordered pair of states.

    ``dist[p * n + q]`` for ``p < q`` is the length of a shortest word
    sending ``p`` and ``q`` to the same state (``INF`` if none);
    ``first[p * n + q]`` is the first letter of the lexicographically least
    such word.
    """

    aut: Automaton
    dist: tuple
    first: tuple

    def distance(self, p: int, q: int) -> Optional[int]:
        if p == q:
            return 0
        if p > q:
            p, q = q, p
        d = self.dist[p * self.aut.n + q]
        return None if d == INF else d

    def merging_word(self, p: int, q: int) -> Optional[Word]:
        if self.distance(p, q) is None:
            return None
        n = self.aut.n
        cols = self.aut.columns
        w = []
        while p != q:
            if p > q:
                p, q = q, p
            a = self.first[p * n + q]
            w.append(a)
            p, q = cols[a][p], cols[a][q]
        return tuple(w)

    def pairs(self):
        n = self.aut.n
        for p in range(n):
            for q in range(p + 1, n):
                yield p, q

    @property
    def max_distance(self) -> Optional[int]:
        ds = [self.distance(p, q) for p, q in self.pairs()]
        if any(d is None for d in ds):
            return None
        return max(ds, default=0)


def build_pair_table(aut: Automaton) -> PairTable:
    n = aut.n
    pre = letter_preimages(aut)
    dist = [INF] * (n * n)
    queue = deque()
    for r in range(n):
        dist[r * n + r] = 0
        queue.append((r, r))
    while queue:
        r, s = queue.popleft()
        d = dist[r * n + s] + 1
        for a in range(aut.k):
            pr, ps = pre[a][r], pre[a][s]
            for p in pr:
                for q in ps:
                    if p == q:
                        continue
                    idx = p * n + q if p < q else q * n + p
                    if dist[idx] == INF:
                        dist[idx] = d
                        queue.append((p, q) if p < q else (q, p))
    # smallest letter stepping one layer closer gives the lex-least shortest word
    first = [INF] * (n * n)
    cols = aut.columns
    for p in range(n):
        for q in range(p + 1, n):
            d = dist[p * n + q]
            if d == INF:
                continue
            for a in range(aut.k):
                x, y = cols[a][p], cols[a][q]
                if x > y:
                    x, y = y, x
                if dist[x * n + y] == d - 1:
                    first[p * n + q] = a
                    break
    return PairTable(aut, tuple(dist), tuple(first))


def shortest_compress_step(
    aut: Automaton, S: StateSet, table: PairTable | None = None
) -> Optional[Word]:
    """A shortest word compressing ``S``, or None if no pair of ``S`` merges."""
    if len(S) < 2:
        raise PreconditionError("need |S| >= 2 to compress")
    table = table or build_pair_table(aut)
    members = list(S)
    best = None
    for i, p in enumerate(members):
        for q in members[i + 1:]:
            d = table.distance(p, q)
            if d is not None and (best is None or d < best[0]):
                best = (d, p, q)
                if d == 1:
                    break
        if best is not None and best[0] == 1:
            break
    if best is None:
        return None
    return table.merging_word(best[1], best[2])


def greedy_compress_to(
    aut: Automaton, S: StateSet, target: int, table: PairTable | None = None
) -> Word:
    if not 1 <= target <= max(len(S), 1):
        raise PreconditionError(f"target {target} outside [1, {len(S)}]")
    table = table or build_pair_table(aut)
    word: Word = ()
    current = S
    while len(current) > target:
        step = shortest_compress_step(aut, current, table)
        if step is None:
            raise NotSynchronizingError(f"no pair of {current} can be merged")
        word = word + step
        current = apply_word(aut, current, step)
    return word


def compress_step_bound(n: int, size: int) -> int:
    """Length guaranteed for compressing a subset of the given size."""
    return (n - size + 2) * (n - size + 1) // 2


def c_bound(n: int, j: int, i: int) -> int:
    """Sum of per-step compression bounds taking a ``j``-subset to size ``i``."""
    if not 1 <= i <= j <= n:
        raise PreconditionError(f"need 1 <= i <= j <= n, got n={n}, j={j}, i={i}")
    # closed form of sum_{s=i+1}^{j} C(n-s+2, 2) = C(n-i+2, 3) - C(n-j+2, 3)
    return _tetra(n - i + 2) - _tetra(n - j + 2)


def c_bound_sum(n: int, j: int, i: int) -> int:
    return sum(compress_step_bound(n, s) for s in range(i + 1, j + 1))


def _tetra(m: int) -> int:
    return m * (m - 1) * (m - 2) // 6


def classic_bound(n: int) -> Fraction:
    return Fraction(n ** 3 - n, 6)
