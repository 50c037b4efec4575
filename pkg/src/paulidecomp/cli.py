"""Command-line interface.

Exit codes: 0 success, 1 user or input error, 2 internal error.
Diagnostics and summaries go to stderr; stdout carries data only.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass

from . import io as pio
from .bench import DEFAULT_N_MAX, DEFAULT_REPS, run_bench, write_csv
from .core import MAX_QUBITS, string_to_index
from .decompose import coeff_fast, decompose_parallel, decompose_serial_quaternary, recompose

log = logging.getLogger("paulidecomp")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class CliConfig:
    subcommand: str
    input: str = "-"
    output: str = "-"
    format: str = "text"
    eps: float = 0.0
    threads: int = 1
    serial: bool = False
    label: str | None = None
    n_min: int = 1
    n_max: int = DEFAULT_N_MAX
    reps: int = DEFAULT_REPS
    seed: int = 0
    bench_max: int = DEFAULT_N_MAX

    def validate(self) -> "CliConfig":
        if self.threads < 1:
            raise UsageError(f"--threads must be >= 1, got {self.threads}")
        if not self.eps >= 0:
            raise UsageError(f"--eps must be >= 0, got {self.eps}")
        if self.subcommand == "bench":
            if not 1 <= self.n_min <= self.n_max <= min(self.bench_max, MAX_QUBITS):
                raise UsageError(
                    f"--n-min/--n-max must satisfy 1 <= n-min <= n-max <= {self.bench_max}"
                )
            if self.reps < 1:
                raise UsageError(f"--reps must be >= 1, got {self.reps}")
        return self


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paulidecomp", description="Dense Pauli-basis decomposition")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def matrix_format(p):
        p.add_argument("--format", choices=pio.FORMATS, default="text",
                       help="matrix file encoding (default: text)")

    p = sub.add_parser("decompose", help="matrix file -> coefficient CSV")
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--out", dest="output", default="-")
    matrix_format(p)
    p.add_argument("--eps", type=float, default=0.0,
                   help="write only terms with |c| > eps; 0 writes all 4^N")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--serial", action="store_true",
                   help="use the serial quaternary Gray-code driver")

    p = sub.add_parser("recompose", help="coefficient CSV -> matrix file")
    p.add_argument("--in", dest="input", default="-")
    p.add_argument("--out", dest="output", default="-")
    matrix_format(p)

    p = sub.add_parser("coeff", help="print a single coefficient as re,im")
    p.add_argument("label", help="Pauli string such as XIZ; rightmost acts on qubit 0")
    p.add_argument("--in", dest="input", default="-")
    matrix_format(p)

    p = sub.add_parser("bench", help="time the decomposition paths, CSV to --out")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    p.add_argument("--reps", type=int, default=DEFAULT_REPS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", dest="output", default="-")
    return parser


def parse_config(argv=None) -> CliConfig:
    ns = vars(build_parser().parse_args(argv))
    return CliConfig(**ns).validate()


def run_decompose(cfg: CliConfig) -> int:
    G = pio.read_matrix(cfg.input, cfg.format)
    start = time.perf_counter()
    if cfg.serial:
        d = decompose_serial_quaternary(G)
    else:
        d = decompose_parallel(G, cfg.threads)
    elapsed = time.perf_counter() - start
    count = pio.write_coefficients(d, cfg.output, cfg.eps)
    print(f"N={d.num_qubits} nonzero={count} eps={cfg.eps} seconds={elapsed:.6f}",
          file=sys.stderr)
    return 0


def run_coeff(cfg: CliConfig, label: str | None = None) -> int:
    label = cfg.label if label is None else label
    G = pio.read_matrix(cfg.input, cfg.format)
    try:
        n = string_to_index(label, G.num_qubits)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    c = coeff_fast(G, n)
    print(f"{c.real!r},{c.imag!r}")
    return 0


def run_recompose(cfg: CliConfig) -> int:
    d = pio.read_coefficients(cfg.input)
    G = recompose(d)
    pio.write_matrix(G, cfg.output, cfg.format)
    print(f"N={d.num_qubits} dim={G.dim}", file=sys.stderr)
    return 0


def run_bench_cmd(cfg: CliConfig) -> int:
    records = run_bench(cfg.n_min, cfg.n_max, cfg.reps, cfg.seed, cfg.threads, cfg.bench_max)
    if cfg.output == "-":
        write_csv(records, sys.stdout)
    else:
        with open(cfg.output, "w", newline="") as f:
            write_csv(records, f)
    return 0


COMMANDS = {
    "decompose": run_decompose,
    "recompose": run_recompose,
    "coeff": run_coeff,
    "bench": run_bench_cmd,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.subcommand](cfg)
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except UsageError as exc:
        print(f"paulidecomp: usage error: {exc}", file=sys.stderr)
        return 1
    except (pio.FormatError, ValueError, OSError) as exc:
        print(f"paulidecomp: error: {exc}", file=sys.stderr)
        return 1
    except MemoryError as exc:
        print(f"paulidecomp: resource error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        log.exception("internal error")
        return 2


if __name__ == "__main__":
    sys.exit(main())
