"""Command-line front end.

Exit codes: 0 success or pass, 1 verdict failure, 2 usage or parse error,
3 internal contract violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .circuit import (CircuitFormatError, CostMeter, deserialize, read_matrix_csv, serialize,
                      write_matrix_csv)
from .construct import (build_s2_circuit, check_record, dot_from_s2, matmul_rep, s2_gate_count,
                        verify_dot_circuit, verify_s2_circuit)
from .modring import ModulusError, factorize
from .orpoly import build_or_poly, choose_exponents, is_selector, weight_table
from .polynomial import parse_poly
from .representation import NOTIONS, classify

log = logging.getLogger("modrep")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONTRACT = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    modulus: int | None = None
    n: int | None = None
    gate_count: int | None = None
    bilinear_mults: int | None = None
    verdicts: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def record(self) -> dict:
        # wall_time stays out so the record is byte-deterministic
        rec = {"command": self.command, "modulus": self.modulus, "n": self.n,
               "gate_count": self.gate_count, "bilinear_mults": self.bilinear_mults,
               "verdicts": self.verdicts}
        rec.update(self.extra)
        return rec

    def emit(self, stream=None):
        stream = stream or sys.stdout
        stream.write(json.dumps(self.record(), sort_keys=True) + "\n")
        log.info("%s finished in %.3f s", self.command, self.wall_time)


def _modulus(m: int):
    try:
        return factorize(m)
    except ModulusError as exc:
        raise UsageError(str(exc)) from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_circuit(path: str):
    try:
        return deserialize(_read(path))
    except CircuitFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(path: str, data: str | bytes):
    if path == "-":
        sys.stdout.write(data.decode() if isinstance(data, bytes) else data)
    elif isinstance(data, bytes):
        Path(path).write_bytes(data)
    else:
        Path(path).write_text(data)


def cmd_build(args) -> int:
    mod = _modulus(args.m)
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    try:
        circuit = build_s2_circuit(args.n, mod)
    except ModulusError as exc:
        raise UsageError(str(exc)) from None
    if args.kind == "dot":
        circuit = dot_from_s2(circuit)
        check = verify_dot_circuit(circuit)
    else:
        check = verify_s2_circuit(circuit)
    if not check.passed:
        print(f"error: constructed circuit failed verification: {'; '.join(check.problems)}",
              file=sys.stderr)
        return EXIT_CONTRACT
    _write(args.out, serialize(circuit))
    report = RunReport(f"build {args.kind}", mod.m, args.n, circuit.gate_count, 0,
                       {args.kind: check.passed},
                       {"nonzero_coefficients": circuit.nonzero_coefficients,
                        "k": (args.n - 1).bit_length(),
                        "degree": choose_exponents((args.n - 1).bit_length(), mod).degree})
    report.wall_time = time.perf_counter() - args.t0
    if args.out != "-":
        report.emit()
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = _load_circuit(args.circuit)
    check = verify_dot_circuit(circuit) if args.target == "dot" else verify_s2_circuit(circuit)
    rec = check_record(check, circuit.n)
    rec.update({"modulus": circuit.modulus.m, "n": circuit.n, "gate_count": circuit.gate_count})
    print(json.dumps(rec, sort_keys=True))
    return EXIT_OK if check.passed else EXIT_FAIL


def cmd_verify_rep(args) -> int:
    mod = _modulus(args.m)
    try:
        f = parse_poly(_read(args.target), mod)
        g = parse_poly(_read(args.candidate), mod)
    except ValueError as exc:
        raise UsageError(f"polynomial parse error: {exc}") from None
    verdict = classify(f, g)
    rec = verdict.as_record()
    rec.update({"modulus": mod.m, "notion": args.notion, "passed": verdict.holds(args.notion)})
    print(json.dumps(rec, sort_keys=True))
    return EXIT_OK if verdict.holds(args.notion) else EXIT_FAIL


def cmd_matmul(args) -> int:
    circuit = _load_circuit(args.circuit)
    mod = circuit.modulus
    try:
        A = read_matrix_csv(_read(args.a), mod)
        B = read_matrix_csv(_read(args.b), mod)
    except CircuitFormatError as exc:
        raise UsageError(str(exc)) from None
    for name, M in (("A", A), ("B", B)):
        if M.shape != (circuit.n, circuit.n):
            raise UsageError(f"{name} is {M.shape[0]}x{M.shape[1]} but the circuit has n={circuit.n}")
    if not args.unsafe:
        check = verify_dot_circuit(circuit)
        if not check.passed:
            print(f"error: circuit is not a verified dot-product representation: "
                  f"{'; '.join(check.problems)}", file=sys.stderr)
            return EXIT_FAIL
    meter = CostMeter()
    C = matmul_rep(A, B, circuit, meter, unsafe=True)
    expected = circuit.n**2 * circuit.gate_count
    if meter.bilinear_mults != expected:
        print(f"error: meter read {meter.bilinear_mults}, expected {expected}", file=sys.stderr)
        return EXIT_CONTRACT
    _write(args.out, write_matrix_csv(C))
    report = RunReport("matmul", mod.m, circuit.n, circuit.gate_count, meter.bilinear_mults,
                       {"dot": True}, {"free_ops": meter.free_ops})
    report.wall_time = time.perf_counter() - args.t0
    if args.stats:
        _write(args.stats, json.dumps(report.record(), sort_keys=True) + "\n")
    if args.out != "-":
        report.emit()
    return EXIT_OK


def cmd_or_table(args) -> int:
    mod = _modulus(args.m)
    if args.k < 0:
        raise UsageError(f"--k must be >= 0, got {args.k}")
    try:
        q = build_or_poly(args.k, mod)
    except ModulusError as exc:
        raise UsageError(str(exc)) from None
    table = weight_table(q)
    bad = 0
    print("w,value,residues,selector")
    for w, v in enumerate(table):
        ok = v == 0 if w == 0 else is_selector(v, mod)
        bad += not ok
        residues = "|".join(str(v % p) for p in mod.primes)
        print(f"{w},{v},{residues},{'ok' if ok else 'FAIL'}")
    return EXIT_CONTRACT if bad else EXIT_OK


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--n-range must be LO:HI, got {text!r}") from None
    if not 1 <= lo <= hi <= 2**20:
        raise UsageError(f"--n-range needs 1 <= LO <= HI <= 2^20, got {text!r}")
    return lo, hi


def cmd_bench(args) -> int:
    mod = _modulus(args.m)
    try:
        choose_exponents(1, mod)
    except ModulusError as exc:
        raise UsageError(str(exc)) from None
    lo, hi = _parse_range(args.n_range)
    cols = ["n", "k", "d", "gate_count", "n2", "n2_gates"]
    if args.time:
        cols.append("matmul_seconds")
    lines = [",".join(cols)]
    n = 1
    while n <= hi:
        if n >= lo:
            k = (n - 1).bit_length()
            gates = s2_gate_count(k, mod) + 1
            row = [n, k, choose_exponents(k, mod).degree, gates, n * n, n * n * gates]
            if args.time:
                row.append(_time_matmul(n, mod, args.seed) if n <= args.time_limit else "")
            lines.append(",".join(str(x) if not isinstance(x, float) else f"{x:.6f}" for x in row))
        n *= 2
    _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _time_matmul(n: int, mod, seed: int) -> float:
    rng = np.random.default_rng(seed)
    circuit = dot_from_s2(build_s2_circuit(n, mod))
    A = rng.integers(0, mod.m, (n, n))
    B = rng.integers(0, mod.m, (n, n))
    t0 = time.perf_counter()
    matmul_rep(A, B, circuit, unsafe=True)
    return time.perf_counter() - t0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modrep",
        description="Bilinear circuits for representations of dot and matrix products mod composites.")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized steps (default 0)")
    parser.add_argument("-v", "--verbose", action="store_true", help="log timings to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build and verify an S^2 or dot-product circuit")
    p.add_argument("kind", choices=["s2", "dot"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out", default="-", help="circuit file (default: stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="verify a circuit file against its target")
    p.add_argument("circuit")
    p.add_argument("--target", choices=["dot", "s2"], default="dot")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-rep", help="classify a candidate polynomial against a target")
    p.add_argument("target", help="file with the true polynomial f")
    p.add_argument("candidate", help="file with the candidate polynomial g")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--notion", choices=NOTIONS, default="1-a-strong",
                   help="notion deciding the exit code")
    p.set_defaults(func=cmd_verify_rep)

    p = sub.add_parser("matmul", help="entrywise representation of AB through a dot circuit")
    p.add_argument("circuit")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out", default="-")
    p.add_argument("--stats", help="write the run record as JSON here")
    p.add_argument("--unsafe", action="store_true", help="skip circuit verification")
    p.set_defaults(func=cmd_matmul)

    p = sub.add_parser("or-table", help="weight table of the weak-OR polynomial")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_or_table)

    p = sub.add_parser("bench", help="gate counts for n = powers of two in a range")
    p.add_argument("--n-range", default="1:1024")
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--out", default="-")
    p.add_argument("--time", action="store_true",
                   help="add a matmul timing column (nondeterministic)")
    p.add_argument("--time-limit", type=int, default=512, help="largest n to time")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    args.t0 = time.perf_counter()
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
