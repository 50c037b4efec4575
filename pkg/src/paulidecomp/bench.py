"""Timing harness comparing the full-decomposition paths.

For every ``N`` in the requested range, ``reps`` random dense complex
matrices are generated (real and imaginary parts uniform in ``[-1, 1)``)
from a generator seeded by ``(seed, N, rep)``.  Each path decomposes
each matrix once under a monotonic clock; all paths must agree bit for
bit or the run aborts.
"""
from __future__ import annotations

import csv
import statistics
import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterable, Iterator, TextIO

import numpy as np

from .decompose import (
    DenseMatrix,
    MultiplicationCounter,
    decompose_parallel,
    decompose_serial_quaternary,
    decompose_slow,
)

DEFAULT_N_MAX = 8
DEFAULT_REPS = 20
CSV_COLUMNS = ["N", "path", "threads", "rep", "seed", "seconds", "mult_count", "seconds_std"]
PATHS = ("fast", "slow", "serial-quaternary")


@dataclass
class BenchRecord:
    N: int
    path: str
    threads: int
    rep: int
    seed: int
    seconds: float
    mult_count: int
    seconds_std: float | None = None


def random_matrix(num_qubits: int, rep: int, seed: int) -> DenseMatrix:
    rng = np.random.default_rng([seed, num_qubits, rep])
    dim = 1 << num_qubits
    re = rng.uniform(-1.0, 1.0, (dim, dim))
    im = rng.uniform(-1.0, 1.0, (dim, dim))
    return DenseMatrix(num_qubits, re + 1j * im)


def _paths(threads: int) -> list[tuple[str, int, Callable]]:
    paths = [
        ("fast", 1, lambda G, c: decompose_parallel(G, 1, counter=c)),
        ("slow", 1, lambda G, c: decompose_slow(G, counter=c)),
        ("serial-quaternary", 1, lambda G, c: decompose_serial_quaternary(G, counter=c)),
    ]
    if threads > 1:
        paths.insert(1, ("fast", threads, lambda G, c: decompose_parallel(G, threads, counter=c)))
    return paths


def _warm_up(paths) -> None:
    # first call per path triggers JIT compilation; keep it out of the timings
    G = random_matrix(1, 0, 0)
    for _, _, fn in paths:
        fn(G, MultiplicationCounter())


def run_bench(
    n_min: int = 1,
    n_max: int = DEFAULT_N_MAX,
    reps: int = DEFAULT_REPS,
    seed: int = 0,
    threads: int = 1,
    max_qubits: int = DEFAULT_N_MAX,
) -> Iterator[BenchRecord]:
    """Yield one record per ``(N, path, rep)`` and a ``rep=-1`` summary per ``(N, path)``."""
    if not 1 <= n_min <= n_max <= max_qubits:
        raise ValueError(f"N range [{n_min}, {n_max}] must lie within [1, {max_qubits}]")
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    paths = _paths(threads)
    _warm_up(paths)
    for N in range(n_min, n_max + 1):
        times: dict[tuple[str, int], list[float]] = {(p, t): [] for p, t, _ in paths}
        counts: dict[tuple[str, int], int] = {}
        rows = []
        for rep in range(reps):
            G = random_matrix(N, rep, seed)
            reference = None
            for path, nthreads, fn in paths:
                counter = MultiplicationCounter()
                start = time.perf_counter()
                result = fn(G, counter)
                elapsed = time.perf_counter() - start
                if reference is None:
                    reference = result
                elif result != reference:
                    raise RuntimeError(f"path {path} disagrees with fast path at N={N}, rep={rep}")
                times[path, nthreads].append(elapsed)
                counts[path, nthreads] = counter.count
                rows.append(BenchRecord(N, path, nthreads, rep, seed, elapsed, counter.count))
        yield from rows
        for path, nthreads, _ in paths:
            t = times[path, nthreads]
            yield BenchRecord(
                N,
                path,
                nthreads,
                -1,
                seed,
                statistics.fmean(t),
                counts[path, nthreads],
                statistics.pstdev(t),
            )


def write_csv(records: Iterable[BenchRecord], stream: TextIO) -> int:
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    count = 0
    for rec in records:
        row = asdict(rec)
        row["seconds"] = repr(rec.seconds)
        row["seconds_std"] = "" if rec.seconds_std is None else repr(rec.seconds_std)
        writer.writerow(row)
        stream.flush()
        count += 1
    return count
