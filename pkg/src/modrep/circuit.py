"""Bilinear sum-of-products circuits over Z_m.

A circuit on x = (x_1..x_n), y = (y_1..y_n) is a list of gates t, each the
product of two constant linear forms (u_t . x)(v_t . y); its value is the
sum over gates mod m. Gates are stored densely as rows of two integer
arrays U, V of shape (gates, n).

Cost model: a multiplication is a product of two input-dependent values,
so each gate costs exactly one; constant-by-input products and additions
are free and tallied separately.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .modring import Modulus, factorize

FORMAT_VERSION = 1


class CircuitFormatError(ValueError):
    """Malformed circuit or matrix file."""


@dataclass
class CostMeter:
    bilinear_mults: int = 0
    free_ops: int = 0

    def charge(self, mults: int = 0, free: int = 0):
        self.bilinear_mults += int(mults)
        self.free_ops += int(free)

    def __add__(self, other: CostMeter) -> CostMeter:
        return CostMeter(self.bilinear_mults + other.bilinear_mults,
                         self.free_ops + other.free_ops)


@dataclass(frozen=True)
class BilinearGate:
    """Sparse view of one gate: ``u`` and ``v`` are ((index, coeff), ...) with
    1-based ascending indices and coefficients in [1, m)."""

    u: tuple[tuple[int, int], ...]
    v: tuple[tuple[int, int], ...]


def _sparse(row: np.ndarray) -> tuple[tuple[int, int], ...]:
    nz = np.flatnonzero(row)
    return tuple((int(i) + 1, int(row[i])) for i in nz)


class BilinearCircuit:
    """Immutable bilinear circuit; build with :meth:`from_gates` or :meth:`from_arrays`."""

    def __init__(self, modulus: Modulus, n: int, U: np.ndarray, V: np.ndarray):
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        U = np.asarray(U, dtype=np.int64).reshape(-1, n) % modulus.m
        V = np.asarray(V, dtype=np.int64).reshape(-1, n) % modulus.m
        if U.shape != V.shape:
            raise ValueError(f"gate arrays disagree: {U.shape} vs {V.shape}")
        if U.shape[0] and (not U.any(axis=1).all() or not V.any(axis=1).all()):
            raise ValueError("every gate needs a nonzero coefficient on both sides")
        U.flags.writeable = False
        V.flags.writeable = False
        self.modulus = modulus
        self.n = n
        self.U = U
        self.V = V

    @classmethod
    def from_arrays(cls, modulus: Modulus, n: int, U, V, drop_dead: bool = True):
        """Build from dense gate rows, dropping gates with an all-zero side."""
        U = np.asarray(U, dtype=np.int64).reshape(-1, n) % modulus.m
        V = np.asarray(V, dtype=np.int64).reshape(-1, n) % modulus.m
        if drop_dead and U.shape[0]:
            live = U.any(axis=1) & V.any(axis=1)
            U, V = U[live], V[live]
        return cls(modulus, n, U, V)

    @classmethod
    def from_gates(cls, modulus: Modulus, n: int, gates) -> BilinearCircuit:
        U = np.zeros((len(gates), n), dtype=np.int64)
        V = np.zeros((len(gates), n), dtype=np.int64)
        for t, gate in enumerate(gates):
            for row, side in ((U[t], gate.u), (V[t], gate.v)):
                for idx, c in side:
                    if not 1 <= idx <= n:
                        raise ValueError(f"gate {t}: index {idx} outside [1, {n}]")
                    row[idx - 1] = (row[idx - 1] + c) % modulus.m
        return cls(modulus, n, U, V)

    @property
    def gate_count(self) -> int:
        return self.U.shape[0]

    def __len__(self):
        return self.gate_count

    @property
    def gates(self) -> list[BilinearGate]:
        return [BilinearGate(_sparse(u), _sparse(v)) for u, v in zip(self.U, self.V)]

    @property
    def nonzero_coefficients(self) -> int:
        """Total wiring of the linear layer (secondary size statistic)."""
        return int(np.count_nonzero(self.U) + np.count_nonzero(self.V))

    def __eq__(self, other):
        if not isinstance(other, BilinearCircuit):
            return NotImplemented
        return (self.modulus == other.modulus and self.n == other.n
                and np.array_equal(self.U, other.U) and np.array_equal(self.V, other.V))

    __hash__ = None

    def __repr__(self):
        return f"BilinearCircuit(m={self.modulus.m}, n={self.n}, gates={self.gate_count})"

    def evaluate(self, x, y, meter: CostMeter | None = None) -> int:
        m = self.modulus.m
        x = np.asarray(x, dtype=np.int64) % m
        y = np.asarray(y, dtype=np.int64) % m
        if x.shape != (self.n,) or y.shape != (self.n,):
            raise ValueError(f"inputs must have length {self.n}, got {x.shape} and {y.shape}")
        left = (self.U @ x) % m
        right = (self.V @ y) % m
        if meter is not None:
            nnz = self.nonzero_coefficients
            # scalar products and additions of the linear forms, plus the final sum
            meter.charge(mults=self.gate_count, free=2 * nnz + max(self.gate_count - 1, 0))
        return int((left * right % m).sum() % m)

    @cached_property
    def coefficient_matrix(self) -> np.ndarray:
        """M = sum_t u_t v_t^T mod m, so that the circuit computes x^T M y."""
        m, n = self.modulus.m, self.n
        if not self.gate_count:
            M = np.zeros((n, n), dtype=np.int64)
        else:
            # gates sharing a y-side form collapse into one outer product
            groups: dict[bytes, int] = {}
            gid = np.empty(self.gate_count, dtype=np.int64)
            for t, v in enumerate(self.V):
                gid[t] = groups.setdefault(v.tobytes(), len(groups))
            order = np.argsort(gid, kind="stable")
            starts = np.flatnonzero(np.r_[True, np.diff(gid[order]) != 0])
            Usum = np.add.reduceat(self.U[order], starts, axis=0) % m
            Vrep = self.V[order][starts]
            M = (Usum.T @ Vrep) % m
        M.flags.writeable = False
        return M

    def expand(self) -> np.ndarray:
        return self.coefficient_matrix.copy()


def circuit_eval(c: BilinearCircuit, x, y, meter: CostMeter | None = None) -> int:
    return c.evaluate(x, y, meter)


def circuit_expand(c: BilinearCircuit) -> np.ndarray:
    return c.expand()


def circuit_gate_count(c: BilinearCircuit) -> int:
    return c.gate_count


def serialize(c: BilinearCircuit) -> bytes:
    """Canonical JSON text: header fields, then one gate per line."""
    out = io.StringIO()
    out.write(f'{{"version": {FORMAT_VERSION}, "m": {c.modulus.m}, "n": {c.n}, "gates": [')
    for t, gate in enumerate(c.gates):
        out.write("," if t else "")
        out.write("\n  " + json.dumps({"u": [list(p) for p in gate.u],
                                       "v": [list(p) for p in gate.v]}, separators=(", ", ": ")))
    out.write("\n]}\n" if c.gate_count else "]}\n")
    return out.getvalue().encode()


def _fail(path: str, msg: str):
    raise CircuitFormatError(f"{path}: {msg}")


def _int_field(doc: dict, key: str) -> int:
    if key not in doc:
        _fail(key, "missing field")
    val = doc[key]
    if not isinstance(val, int) or isinstance(val, bool):
        _fail(key, f"expected integer, got {val!r}")
    return val


def deserialize(data: bytes | str) -> BilinearCircuit:
    text = data.decode() if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        _fail("document", "expected an object")
    version = _int_field(doc, "version")
    if version != FORMAT_VERSION:
        _fail("version", f"unsupported version {version}, expected {FORMAT_VERSION}")
    m, n = _int_field(doc, "m"), _int_field(doc, "n")
    if m < 2:
        _fail("m", f"modulus must be >= 2, got {m}")
    if n < 1:
        _fail("n", f"n must be >= 1, got {n}")
    gates = doc.get("gates")
    if not isinstance(gates, list):
        _fail("gates", "expected a list")
    mod = factorize(m)
    parsed = []
    for t, g in enumerate(gates):
        if not isinstance(g, dict) or set(g) != {"u", "v"}:
            _fail(f"gates[{t}]", "expected an object with exactly the keys u and v")
        sides = []
        for side in ("u", "v"):
            entries = g[side]
            where = f"gates[{t}].{side}"
            if not isinstance(entries, list) or not entries:
                _fail(where, "expected a nonempty list of [index, coeff] pairs")
            prev = 0
            pairs = []
            for e, pair in enumerate(entries):
                if (not isinstance(pair, list) or len(pair) != 2
                        or not all(isinstance(z, int) and not isinstance(z, bool) for z in pair)):
                    _fail(f"{where}[{e}]", f"expected [index, coeff], got {pair!r}")
                idx, coeff = pair
                if not 1 <= idx <= n:
                    _fail(f"{where}[{e}]", f"index {idx} out of range [1, {n}]")
                if idx <= prev:
                    _fail(f"{where}[{e}]", f"index {idx} not ascending")
                if not 1 <= coeff < m:
                    _fail(f"{where}[{e}]", f"coefficient {coeff} not in [1, {m})")
                prev = idx
                pairs.append((idx, coeff))
            sides.append(tuple(pairs))
        parsed.append(BilinearGate(*sides))
    return BilinearCircuit.from_gates(mod, n, parsed)


def write_matrix_csv(matrix) -> str:
    rows = np.asarray(matrix, dtype=np.int64)
    return "".join(",".join(str(int(v)) for v in row) + "\n" for row in rows)


def read_matrix_csv(text: str, mod: Modulus) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            vals = [int(tok) for tok in line.split(",")]
        except ValueError:
            raise CircuitFormatError(f"line {lineno}: non-integer entry in {line!r}") from None
        for col, v in enumerate(vals, 1):
            if not 0 <= v < mod.m:
                raise CircuitFormatError(f"line {lineno} column {col}: {v} not in [0, {mod.m})")
        rows.append(vals)
    if not rows or any(len(r) != len(rows) for r in rows):
        raise CircuitFormatError(f"expected a square matrix, got {len(rows)} rows "
                                 f"of lengths {sorted({len(r) for r in rows})}")
    return np.array(rows, dtype=np.int64)
