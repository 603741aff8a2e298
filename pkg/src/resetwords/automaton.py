"""Complete deterministic automata, state sets and the action of words.

States are ``0..n-1`` and letters ``0..k-1``.  A word is a plain tuple of
letter indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

Word = tuple  # tuple[int, ...]

MAX_STATES = 4096


class ParseError(ValueError):
    """Malformed automaton text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(ValueError):
    pass


class NotSynchronizingError(PreconditionError):
    pass


class StateSet:
    """Immutable set of states backed by an integer bitmask."""

    __slots__ = ("bits", "n", "_size")

    def __init__(self, n: int, members: Iterable[int] = (), *, bits: int | None = None):
        if not 0 <= n <= MAX_STATES:
            raise PreconditionError(f"state capacity {n} exceeds maximum {MAX_STATES}")
        if bits is None:
            bits = 0
            for q in members:
                if not 0 <= q < n:
                    raise PreconditionError(f"state {q} out of range [0, {n})")
                bits |= 1 << q
        elif bits >> n:
            raise PreconditionError(f"bitmask has members outside [0, {n})")
        self.bits = bits
        self.n = n
        self._size = bits.bit_count()

    @classmethod
    def full(cls, n: int) -> "StateSet":
        return cls(n, bits=(1 << n) - 1)

    @classmethod
    def empty(cls, n: int) -> "StateSet":
        return cls(n, bits=0)

    def __len__(self) -> int:
        return self._size

    def __contains__(self, q: int) -> bool:
        return 0 <= q < self.n and (self.bits >> q) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        b = self.bits
        while b:
            low = b & -b
            yield low.bit_length() - 1
            b ^= low

    def __eq__(self, other) -> bool:
        if isinstance(other, StateSet):
            return self.bits == other.bits and self.n == other.n
        if isinstance(other, (set, frozenset)):
            return set(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __le__(self, other: "StateSet") -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "StateSet") -> bool:
        return self <= other and self.bits != other.bits

    def __and__(self, other: "StateSet") -> "StateSet":
        return StateSet(self.n, bits=self.bits & other.bits)

    def __or__(self, other: "StateSet") -> "StateSet":
        return StateSet(self.n, bits=self.bits | other.bits)

    def __sub__(self, other: "StateSet") -> "StateSet":
        return StateSet(self.n, bits=self.bits & ~other.bits)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self)) + "}"


@dataclass(frozen=True)
class Automaton:
    n: int
    k: int
    delta: tuple  # delta[q][a]
    columns: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise PreconditionError("an automaton needs n >= 1 states and k >= 1 letters")
        if self.n > MAX_STATES:
            raise PreconditionError(f"n={self.n} exceeds maximum {MAX_STATES}")
        delta = tuple(tuple(row) for row in self.delta)
        if len(delta) != self.n or any(len(row) != self.k for row in delta):
            raise PreconditionError("transition table must be n rows of k entries")
        for q, row in enumerate(delta):
            for a, t in enumerate(row):
                if not 0 <= t < self.n:
                    raise PreconditionError(f"delta[{q}][{a}] = {t} out of range")
        object.__setattr__(self, "delta", delta)
        # columns[a][q] = delta[q][a]; letters as maps are what word action uses
        object.__setattr__(self, "columns", tuple(zip(*delta)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "Automaton":
        return cls(len(columns[0]), len(columns), tuple(zip(*columns)))

    @property
    def states(self) -> StateSet:
        return StateSet.full(self.n)

    def stateset(self, members: Iterable[int]) -> StateSet:
        return StateSet(self.n, members)

    def check_word(self, w: Sequence[int]) -> None:
        for a in w:
            if not 0 <= a < self.k:
                raise PreconditionError(f"letter {a} not in alphabet of size {self.k}")

    def transformation(self, w: Sequence[int]) -> tuple:
        """The map ``q -> q.w`` as a tuple of length n."""
        self.check_word(w)
        t = list(range(self.n))
        for a in w:
            col = self.columns[a]
            t = [col[x] for x in t]
        return tuple(t)

    def __str__(self) -> str:
        return format_automaton(self)


def parse_automaton(text: str) -> Automaton:
    lines = text.splitlines()
    header = None
    rows = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"expected integers, got {line!r}", lineno) from None
        if header is None:
            if len(values) != 2:
                raise ParseError("header must be 'n k'", lineno)
            n, k = values
            if n < 1 or k < 1:
                raise ParseError("header needs n >= 1 and k >= 1", lineno)
            if n > MAX_STATES:
                raise ParseError(f"n={n} exceeds maximum {MAX_STATES}", lineno)
            header = (n, k)
            continue
        n, k = header
        if len(rows) == n:
            raise ParseError(f"extra row beyond the {n} declared states", lineno)
        if len(values) != k:
            raise ParseError(f"row has {len(values)} entries, expected {k}", lineno)
        for t in values:
            if not 0 <= t < n:
                raise ParseError(f"target {t} out of range [0, {n})", lineno)
        rows.append(tuple(values))
    if header is None:
        raise ParseError("missing 'n k' header", len(lines) or 1)
    if len(rows) != header[0]:
        raise ParseError(f"expected {header[0]} rows, got {len(rows)}", len(lines) or 1)
    return Automaton(header[0], header[1], tuple(rows))


def format_automaton(aut: Automaton) -> str:
    out = [f"{aut.n} {aut.k}"]
    out.extend(" ".join(map(str, row)) for row in aut.delta)
    return "\n".join(out) + "\n"


def format_word(w: Sequence[int], k: int) -> str:
    if k <= 26:
        return "".join(chr(ord("a") + a) for a in w)
    return ",".join(map(str, w))


def parse_word(text: str, k: int) -> Word:
    text = text.strip()
    if text in ("", "-", "eps", "ε"):
        return ()
    if k <= 26 and "," not in text:
        w = tuple(ord(c) - ord("a") for c in text)
    else:
        w = tuple(int(x) for x in text.split(","))
    for a in w:
        if not 0 <= a < k:
            raise PreconditionError(f"letter {a} not in alphabet of size {k} in word {text!r}")
    return w


def apply_word(aut: Automaton, S: StateSet, w: Sequence[int]) -> StateSet:
    if not w:
        return S
    t = aut.transformation(w)
    return StateSet(aut.n, {t[q] for q in S})


def preimage(aut: Automaton, S: StateSet, w: Sequence[int]) -> StateSet:
    t = aut.transformation(w)
    return StateSet(aut.n, (q for q in range(aut.n) if t[q] in S))


def rank(aut: Automaton, w: Sequence[int]) -> int:
    return len(set(aut.transformation(w)))


def image_of_transformation(t: Sequence[int], n: int) -> StateSet:
    return StateSet(n, set(t))


@dataclass(frozen=True)
class ClassificationReport:
    synchronizing: bool
    strongly_connected: bool
    sink: Optional[int]


def letter_preimages(aut: Automaton) -> list:
    """``pre[a][r]`` lists the states mapped to ``r`` by letter ``a``."""
    pre = [[[] for _ in range(aut.n)] for _ in range(aut.k)]
    for a, col in enumerate(aut.columns):
        for q, r in enumerate(col):
            pre[a][r].append(q)
    return pre


def _all_pairs_mergeable(aut: Automaton) -> bool:
    n = aut.n
    pre = letter_preimages(aut)
    seen = bytearray(n * n)
    queue = deque()
    for r in range(n):
        seen[r * n + r] = 1
        queue.append((r, r))
    merged = 0
    while queue:
        r, s = queue.popleft()
        for a in range(aut.k):
            for p in pre[a][r]:
                for q in pre[a][s]:
                    if p < q and not seen[p * n + q]:
                        seen[p * n + q] = 1
                        merged += 1
                        queue.append((p, q))
                    elif q < p and not seen[q * n + p]:
                        seen[q * n + p] = 1
                        merged += 1
                        queue.append((q, p))
    return merged == n * (n - 1) // 2


def is_strongly_connected(aut: Automaton) -> bool:
    n = aut.n
    succ = [set(row) for row in aut.delta]
    pred = [set() for _ in range(n)]
    for q, targets in enumerate(succ):
        for t in targets:
            pred[t].add(q)
    for graph in (succ, pred):
        seen = {0}
        stack = [0]
        while stack:
            q = stack.pop()
            for t in graph[q]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        if len(seen) != n:
            return False
    return True


def find_sink(aut: Automaton) -> Optional[int]:
    for q, row in enumerate(aut.delta):
        if all(t == q for t in row):
            return q
    return None


def classify(aut: Automaton) -> ClassificationReport:
    return ClassificationReport(
        synchronizing=_all_pairs_mergeable(aut),
        strongly_connected=is_strongly_connected(aut),
        sink=find_sink(aut),
    )


@dataclass(frozen=True)
class PreimageCensus:
    sizes: dict  # image state -> |q.w^-1|
    g: int

    def states_with_size(self, size: int) -> list:
        return sorted(q for q, s in self.sizes.items() if s == size)

    @property
    def min_count(self) -> int:
        return len(self.states_with_size(self.g))


def preimage_census(aut: Automaton, w: Sequence[int]) -> PreimageCensus:
    t = aut.transformation(w)
    sizes: dict = {}
    for q in t:
        sizes[q] = sizes.get(q, 0) + 1
    sizes = dict(sorted(sizes.items()))
    return PreimageCensus(sizes, min(sizes.values()))
