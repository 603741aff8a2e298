"""Deterministic automaton sources.

Random tables are drawn from SplitMix64 (Steele, Lea & Flood 2014), whose
state update is fixed here so that a seed names the same automaton on
every platform:

    state  <- state + 0x9E3779B97F4A7C15            (mod 2**64)
    z      <- (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB
    output <- z ^ (z >> 31)

With ``method="core"`` a candidate is the terminal strongly connected
component of a random automaton on ``m`` states (states keep their relative
order); candidates whose component does not have exactly ``n`` states are
rejected and ``m`` is nudged toward the size that hits ``n``.  Plain
rejection is hopeless for strong connectivity beyond n of about 45 with
two letters, since most tables leave some state without incoming edges.

Bounded integers use rejection on the top of the 64-bit range, so every
value in ``[0, n)`` is exactly equally likely.  Each table is filled row
by row, letter by letter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet

from .automaton import Automaton, PreconditionError, classify, is_strongly_connected

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

SYNCHRONIZING = "synchronizing"
STRONGLY_CONNECTED = "strongly-connected"
CONSTRAINTS = frozenset({SYNCHRONIZING, STRONGLY_CONNECTED})
FAMILIES = ("cerny", "random", "sink-random")
METHODS = ("reject", "core")

DEFAULT_MAX_REJECTIONS = 100_000


class GenerationFailed(RuntimeError):
    pass


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK64
        z = ((z ^ (z >> 27)) * MIX2) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        if n < 1:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    k: int = 2
    seed: int = 0
    constraints: FrozenSet[str] = frozenset()
    max_rejections: int = DEFAULT_MAX_REJECTIONS
    method: str = "reject"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise PreconditionError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.method not in METHODS:
            raise PreconditionError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.method == "core" and self.family != "random":
            raise PreconditionError("method 'core' applies to the random family only")
        object.__setattr__(self, "constraints", frozenset(self.constraints))
        unknown = self.constraints - CONSTRAINTS
        if unknown:
            raise PreconditionError(f"unknown constraints {sorted(unknown)}")
        if self.n < 1 or self.k < 1:
            raise PreconditionError("need n >= 1 and k >= 1")
        if self.max_rejections < 1:
            raise PreconditionError("max_rejections must be positive")


def cerny(n: int) -> Automaton:
    """Letter ``a`` rotates ``q -> q+1 mod n``; ``b`` fixes all but ``n-1 -> 0``."""
    if n < 2:
        raise PreconditionError("the Cerny family starts at n = 2")
    rows = tuple(((q + 1) % n, 0 if q == n - 1 else q) for q in range(n))
    return Automaton(n, 2, rows)


def _has_unreached_state(n: int, rows: list) -> bool:
    hit = bytearray(n)
    for row in rows:
        for t in row:
            hit[t] = 1
    return not all(hit)


def _satisfies(aut: Automaton, constraints: FrozenSet[str], rows: list) -> bool:
    if STRONGLY_CONNECTED in constraints:
        # cheap necessary condition first
        if aut.n > 1 and _has_unreached_state(aut.n, rows):
            return False
        if not is_strongly_connected(aut):
            return False
    if SYNCHRONIZING in constraints and not classify(aut).synchronizing:
        return False
    return True


def _reach(rows: list, x: int) -> set:
    seen = {x}
    stack = [x]
    while stack:
        q = stack.pop()
        for t in rows[q]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def terminal_component(rows: list) -> list:
    """Sorted states of a strongly connected component closed under all letters."""
    component = _reach(rows, 0)
    changed = True
    while changed:
        changed = False
        for x in sorted(component):
            r = _reach(rows, x)
            if len(r) < len(component):
                component = r
                changed = True
                break
    return sorted(component)


def _restrict(rows: list, states: list) -> list:
    index = {q: i for i, q in enumerate(states)}
    return [[index[t] for t in rows[q]] for q in states]


def _core_automaton(spec: GeneratorSpec) -> Automaton:
    rng = SplitMix64(spec.seed)
    n, k = spec.n, spec.k
    m = n
    for _ in range(spec.max_rejections):
        rows = [[rng.below(m) for _ in range(k)] for _ in range(m)]
        states = terminal_component(rows)
        size = len(states)
        if size == n:
            sub = _restrict(rows, states)
            aut = Automaton(n, k, tuple(map(tuple, sub)))
            if _satisfies(aut, spec.constraints, sub):
                return aut
        else:
            m = max(n, m + (n - size))
    raise GenerationFailed(
        f"no core automaton with n={n}, k={k}, seed={spec.seed} met "
        f"{sorted(spec.constraints)} within {spec.max_rejections} attempts"
    )


def random_automaton(spec: GeneratorSpec) -> Automaton:
    if spec.family == "cerny":
        aut = cerny(spec.n)
        if not _satisfies(aut, spec.constraints, list(aut.delta)):
            raise GenerationFailed("Cerny automaton violates the requested constraints")
        return aut
    if spec.method == "core":
        return _core_automaton(spec)
    rng = SplitMix64(spec.seed)
    n, k = spec.n, spec.k
    for _ in range(spec.max_rejections):
        rows = [[rng.below(n) for _ in range(k)] for _ in range(n)]
        if spec.family == "sink-random":
            rows[0] = [0] * k
        aut = Automaton(n, k, tuple(map(tuple, rows)))
        if _satisfies(aut, spec.constraints, rows):
            return aut
    raise GenerationFailed(
        f"no {spec.family} automaton with n={n}, k={k}, seed={spec.seed} met "
        f"{sorted(spec.constraints)} within {spec.max_rejections} attempts"
    )


def sample_seed(seed: int, index: int) -> int:
    """Per-sample seed for experiment sweeps."""
    return seed + index
