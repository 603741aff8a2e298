"""CSV experiment sweeps.

Every sweep emits rows in a fixed order, so a given set of arguments always
produces the same bytes.  ``resume=True`` keeps the rows already present in
the output file and appends only the missing ones.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator, Optional

from .automaton import Automaton
from .generators import (
    STRONGLY_CONNECTED,
    SYNCHRONIZING,
    GenerationFailed,
    GeneratorSpec,
    cerny,
    random_automaton,
    sample_seed,
)
from .oracle import OracleRefused, exact_shortest_avoiding, min_pair_merge_for_state
from .pipeline import (
    bound_report,
    choose_k,
    first_improving_n,
)

CSV_HEADER = ("family", "n", "k_alphabet", "seed", "sample", "quantity", "value", "bound", "pass")
CSV_VERSION = 1


def decimal(x) -> str:
    return repr(float(x))


def _flag(ok: Optional[bool]) -> str:
    if ok is None:
        return "skipped"
    return "true" if ok else "false"


def max_avoiding_length(aut: Automaton, max_nodes: int | None = None) -> int:
    worst = 0
    for q in range(aut.n):
        result = exact_shortest_avoiding(aut, aut.stateset([q]), max_nodes=max_nodes)
        if result.length is None:
            raise ValueError(f"state {q} is unavoidable")
        worst = max(worst, result.length)
    return worst


def _sample_spec(n: int, alphabet: int, seed: int) -> GeneratorSpec:
    return GeneratorSpec("random", n, alphabet, seed, {SYNCHRONIZING, STRONGLY_CONNECTED})


def _avoiding_row(job) -> tuple:
    family, n, alphabet, seed, index, max_nodes = job
    bound = 2 * n - 2
    try:
        aut = cerny(n) if family == "cerny" else random_automaton(_sample_spec(n, alphabet, seed))
        value = max_avoiding_length(aut, max_nodes)
    except (OracleRefused, GenerationFailed):
        return (family, n, alphabet, "" if family == "cerny" else seed, index,
                "max_shortest_avoiding", "", bound, _flag(None))
    return (family, n, alphabet, "" if family == "cerny" else seed, index,
            "max_shortest_avoiding", value, bound, _flag(value <= bound))


def _pair_row(job) -> tuple:
    family, n, alphabet, seed, index, _ = job
    bound = n * (n - 1) // 2
    try:
        aut = cerny(n) if family == "cerny" else random_automaton(_sample_spec(n, alphabet, seed))
    except GenerationFailed:
        return (family, n, alphabet, seed, index, "max_pair_with_state", "", bound, _flag(None))
    value = max(min_pair_merge_for_state(aut, q).length for q in range(n))
    return (family, n, alphabet, "" if family == "cerny" else seed, index,
            "max_pair_with_state", value, bound, _flag(value <= bound))


def _jobs(n_range: Iterable[int], samples: int, seed: int, alphabet: int,
          include_cerny: bool, max_nodes: int | None) -> list:
    jobs = []
    for n in n_range:
        if include_cerny and n >= 2:
            jobs.append(("cerny", n, 2, "", 0, max_nodes))
        for i in range(samples):
            jobs.append(("random", n, alphabet, sample_seed(seed, i), i, max_nodes))
    return jobs


def _run(worker, jobs: list, workers: int) -> Iterator[tuple]:
    if workers <= 1 or len(jobs) < 2:
        for job in jobs:
            yield worker(job)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map keeps submission order, so output stays deterministic
        yield from pool.map(worker, jobs, chunksize=4)


def _job_key(job, quantity: str) -> tuple:
    family, n, alphabet, seed, index, _ = job
    return tuple(str(x) for x in (family, n, alphabet, seed, index, quantity))


def avoiding_rows(n_range, samples, seed, alphabet=2, include_cerny=False,
                  max_nodes=None, workers=1, done=frozenset()) -> Iterator[tuple]:
    jobs = _jobs(n_range, samples, seed, alphabet, include_cerny, max_nodes)
    jobs = [j for j in jobs if _job_key(j, "max_shortest_avoiding") not in done]
    return _run(_avoiding_row, jobs, workers)


def pair_rows(n_range, samples, seed, alphabet=2, include_cerny=False,
              workers=1, done=frozenset()) -> Iterator[tuple]:
    jobs = _jobs(n_range, samples, seed, alphabet, include_cerny, None)
    jobs = [j for j in jobs if _job_key(j, "max_pair_with_state") not in done]
    return _run(_pair_row, jobs, workers)


def bounds_rows(n_max: int, done=frozenset()) -> Iterator[tuple]:
    for n in range(1, n_max + 1):
        report = bound_report(n)
        k = choose_k(n)
        threshold = report.classic_bound - 1
        yield ("bounds", n, "", "", "", "k_choice", k, n // 8, "")
        yield ("bounds", n, "", "", "", "classic_bound", report.classic_bound, "", "")
        yield ("bounds", n, "", "", "", "new_bound", report.new_bound, threshold,
               _flag(report.new_bound < threshold))
        yield ("bounds", n, "", "", "", "new_bound_decimal", decimal(report.new_bound),
               decimal(threshold), _flag(report.new_bound < threshold))
        yield ("bounds", n, "", "", "", "margin", threshold - report.new_bound, "", "")
        if k:
            value = report.parametrized[k]
            yield ("bounds", n, "", "", "", "parametrized_bound", value, report.classic_bound,
                   _flag(value <= report.classic_bound))
    first = first_improving_n(n_max)
    yield ("bounds", n_max, "", "", "", "first_improving_n", "" if first is None else first, "", "")


def _key(row) -> tuple:
    return tuple(str(x) for x in row[:6])


def write_rows(make_rows: Callable[[set], Iterable[tuple]], path: str, resume: bool = False) -> int:
    """Write ``make_rows(done)`` under the fixed header, where ``done`` holds
    the keys of rows already on disk; returns the number of rows written."""
    done = set()
    mode = "w"
    if resume and os.path.exists(path):
        with open(path, newline="") as f:
            text = f.read()
        if text and not text.endswith("\n"):
            # drop a partially written trailing row
            text = text[: text.rfind("\n") + 1]
            with open(path, "w", newline="") as f:
                f.write(text)
        lines = list(csv.reader(io.StringIO(text)))
        if lines and tuple(lines[0]) == CSV_HEADER:
            done = {tuple(r[:6]) for r in lines[1:]}
            mode = "a"
    written = 0
    with open(path, mode, newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        if mode == "w":
            writer.writerow(CSV_HEADER)
        for row in make_rows(done):
            if _key(row) in done:
                continue
            writer.writerow(row)
            f.flush()
            written += 1
    return written
