"""Brute-force shortest words by breadth-first search over reachable images.

Exponential in the worst case.  Searches refuse automata with more than
``max_states`` states or once more than ``max_nodes`` images have been
visited; the default node cap can be overridden with the
``RESETWORDS_MAX_NODES`` environment variable.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

from .automaton import Automaton, PreconditionError, StateSet, Word
from .compression import PairTable, build_pair_table

MAX_NODES_ENV = "RESETWORDS_MAX_NODES"
DEFAULT_MAX_STATES = 24
DEFAULT_MAX_NODES = 2_000_000

SOME_STATE = "some-state"
WHOLE_SUBSET = "whole-subset"


class OracleRefused(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleResult:
    length: Optional[int]  # None: unreachable
    word: Optional[Word]
    explored: int

    @property
    def reachable(self) -> bool:
        return self.length is not None


def default_max_nodes() -> int:
    raw = os.environ.get(MAX_NODES_ENV)
    if raw is None:
        return DEFAULT_MAX_NODES
    try:
        value = int(raw)
    except ValueError:
        raise OracleRefused(f"{MAX_NODES_ENV}={raw!r} is not an integer") from None
    if value < 1:
        raise OracleRefused(f"{MAX_NODES_ENV} must be positive")
    return value


class ImageTables:
    """Byte-chunked lookup tables: the image of a bitmask under a letter is
    the OR of one table entry per byte of the mask."""

    def __init__(self, aut: Automaton):
        self.n = aut.n
        self.chunks = (aut.n + 7) // 8
        tables = []
        for col in aut.columns:
            per_letter = []
            for c in range(self.chunks):
                base = 8 * c
                table = [0] * 256
                for byte in range(1, 256):
                    low = byte & -byte
                    bit = low.bit_length() - 1
                    q = base + bit
                    extra = 1 << col[q] if q < aut.n else 0
                    table[byte] = table[byte ^ low] | extra
                per_letter.append(table)
            tables.append(per_letter)
        self.tables = tables

    def image(self, bits: int, a: int) -> int:
        out = 0
        for table in self.tables[a]:
            if bits == 0:
                break
            out |= table[bits & 255]
            bits >>= 8
        return out


def _bfs(
    aut: Automaton,
    start: int,
    goal: Callable[[int], bool],
    max_states: int,
    max_nodes: Optional[int],
) -> OracleResult:
    if aut.n > max_states:
        raise OracleRefused(f"n={aut.n} exceeds oracle limit of {max_states} states")
    limit = default_max_nodes() if max_nodes is None else max_nodes
    if goal(start):
        return OracleResult(0, (), 1)
    tables = ImageTables(aut)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for a in range(aut.k):
            nxt = tables.image(node, a)
            if nxt in parent:
                continue
            parent[nxt] = (node, a)
            if goal(nxt):
                word = []
                cur = nxt
                while parent[cur] is not None:
                    cur, letter = parent[cur]
                    word.append(letter)
                word.reverse()
                return OracleResult(len(word), tuple(word), len(parent))
            if len(parent) > limit:
                raise OracleRefused(f"explored more than {limit} images (set {MAX_NODES_ENV})")
            queue.append(nxt)
    return OracleResult(None, None, len(parent))


def exact_shortest_reset(
    aut: Automaton, *, max_states: int = DEFAULT_MAX_STATES, max_nodes: int | None = None
) -> OracleResult:
    full = (1 << aut.n) - 1
    return _bfs(aut, full, lambda b: b & (b - 1) == 0, max_states, max_nodes)


def exact_shortest_avoiding(
    aut: Automaton,
    A: StateSet,
    mode: str = SOME_STATE,
    *,
    start: StateSet | None = None,
    max_states: int = DEFAULT_MAX_STATES,
    max_nodes: int | None = None,
) -> OracleResult:
    """Shortest ``w`` with ``A`` not inside ``start.w`` (some-state) or with
    ``start.w`` disjoint from ``A`` (whole-subset); ``start`` defaults to Q."""
    if not len(A):
        raise PreconditionError("A must be non-empty")
    mask = A.bits
    origin = ((1 << aut.n) - 1) if start is None else start.bits
    if mode == SOME_STATE:
        goal = lambda b: mask & ~b != 0  # noqa: E731
    elif mode == WHOLE_SUBSET:
        goal = lambda b: mask & b == 0  # noqa: E731
    else:
        raise PreconditionError(f"unknown mode {mode!r}")
    return _bfs(aut, origin, goal, max_states, max_nodes)


def exact_shortest_compressing(
    aut: Automaton,
    S: StateSet,
    *,
    max_states: int = DEFAULT_MAX_STATES,
    max_nodes: int | None = None,
) -> OracleResult:
    if len(S) < 2:
        raise PreconditionError("need |S| >= 2 to compress")
    size = len(S)
    return _bfs(aut, S.bits, lambda b: b.bit_count() < size, max_states, max_nodes)


def min_pair_merge_for_state(
    aut: Automaton, q: int, table: PairTable | None = None
) -> OracleResult:
    """Shortest word merging ``q`` with some other state."""
    if aut.n < 2:
        raise PreconditionError("need at least two states")
    table = table or build_pair_table(aut)
    best = None
    for p in range(aut.n):
        if p == q:
            continue
        d = table.distance(p, q)
        if d is None:
            continue
        w = table.merging_word(p, q)
        if best is None or (d, w) < (best[0], best[1]):
            best = (d, w)
    if best is None:
        return OracleResult(None, None, aut.n - 1)
    return OracleResult(best[0], best[1], aut.n - 1)


def reachable_images(
    aut: Automaton, start: StateSet | None = None, *, max_states: int = DEFAULT_MAX_STATES
) -> list:
    """All images ``start.w`` as bitmasks, in BFS order."""
    if aut.n > max_states:
        raise OracleRefused(f"n={aut.n} exceeds oracle limit of {max_states} states")
    origin = ((1 << aut.n) - 1) if start is None else start.bits
    tables = ImageTables(aut)
    seen = {origin}
    order = [origin]
    queue = deque([origin])
    while queue:
        node = queue.popleft()
        for a in range(aut.k):
            nxt = tables.image(node, a)
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return order
