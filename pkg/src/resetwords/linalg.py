"""Exact integer row bases for spans of count vectors."""

from __future__ import annotations

from math import gcd
from typing import Sequence

from .automaton import Automaton, StateSet


def count_vector(aut: Automaton, S: StateSet, w: Sequence[int]) -> tuple:
    """Entry ``i`` is the number of states of ``S`` sent to ``i`` by ``w``."""
    t = aut.transformation(w)
    v = [0] * aut.n
    for q in S:
        v[t[q]] += 1
    return tuple(v)


def apply_letter(aut: Automaton, v: Sequence[int], a: int) -> tuple:
    """Right multiplication of a row vector by the 0/1 matrix of letter ``a``."""
    out = [0] * aut.n
    col = aut.columns[a]
    for q, x in enumerate(v):
        if x:
            out[col[q]] += x
    return tuple(out)


def _normalize(row: list) -> list:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g > 1:
        row = [x // g for x in row]
    for x in row:
        if x:
            if x < 0:
                row = [-y for y in row]
            break
    return row


class EchelonBasis:
    """Fraction-free incremental row echelon basis.

    Rows are kept in insertion order; each row is zero at the pivots of all
    rows inserted before it, so reducing a vector against the rows in order
    clears every pivot.
    """

    def __init__(self, n: int):
        self.n = n
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence[int]) -> list:
        if len(v) != self.n:
            raise ValueError(f"vector length {len(v)} does not match basis length {self.n}")
        r = list(v)
        for row, p in zip(self.rows, self.pivots):
            c = r[p]
            if c:
                lead = row[p]
                r = [lead * x - c * y for x, y in zip(r, row)]
                r = _normalize(r)
        return r

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def insert(self, v: Sequence[int]) -> bool:
        """Add ``v``; returns True iff the dimension grew."""
        r = self.reduce(v)
        for i, x in enumerate(r):
            if x:
                self.rows.append(_normalize(r))
                self.pivots.append(i)
                return True
        return False
