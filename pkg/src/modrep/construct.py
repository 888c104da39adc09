"""Circuits for representations of S_n^2, the dot product and the matrix product.

Indices i in [1, n] are encoded as the k = ceil(log2 n) bits of i - 1
(bit l is ((i - 1) >> (l - 1)) & 1). For two indices the bitwise XOR
z_l = u_l + v_l - 2 u_l v_l has Hamming weight equal to their distance,
so a weak-OR polynomial Q in z vanishes exactly on the diagonal. Expanding
Q(u XOR v) into monomials u^alpha v^beta gives one bilinear gate per
monomial:

    x-side: c * [bits(i) covers alpha],   y-side: [bits(j) covers beta].

The resulting coefficient matrix M has M[i][i] = 0 and a selector value off
the diagonal, a 0-a-strong representation of S_n^2 = sum_{i != j} x_i y_j.
Subtracting it from (sum x)(sum y) leaves a 1-a-strong representation
of the dot product.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .circuit import BilinearCircuit, CostMeter
from .modring import Modulus
from .orpoly import build_or_poly, choose_exponents, require_squarefree_composite
from .polynomial import Polynomial
from .representation import RepVerdict, classify_matrix


class UnverifiedCircuitError(ValueError):
    """A circuit failed (or skipped) verification where a verified one is required."""


def index_bits(n: int) -> np.ndarray:
    """(n, k) 0/1 matrix; row i - 1 holds bits(i)."""
    k = (n - 1).bit_length()
    idx = np.arange(n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(k, dtype=np.int64)[None, :]) & 1).astype(np.int64)


def xor_expansion(k: int, mod: Modulus) -> Polynomial:
    """Q(u XOR v) with u_l -> variable l and v_l -> variable k + l."""
    q = build_or_poly(k, mod)
    images = {}
    for l in range(1, k + 1):
        u, v = Polynomial.var(l, mod), Polynomial.var(k + l, mod)
        images[l] = u + v - 2 * u * v
    return q.multilinear.substitute(images)


def s2_gate_terms(k: int, mod: Modulus) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    """(alpha, beta, coefficient) for every monomial of the XOR expansion, in gate order.

    alpha and beta are sorted 1-based bit positions on the x- and y-side.
    """
    terms = []
    for mono, c in xor_expansion(k, mod).terms.items():
        alpha = tuple(v for v, _ in mono if v <= k)
        beta = tuple(v - k for v, _ in mono if v > k)
        terms.append((alpha, beta, c))
    terms.sort(key=lambda t: (len(set(t[0]) | set(t[1])), t[0], t[1]))
    return terms


def build_s2_circuit(n: int, mod: Modulus) -> BilinearCircuit:
    require_squarefree_composite(mod)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k = (n - 1).bit_length()
    bits = index_bits(n)
    masks: dict[tuple[int, ...], np.ndarray] = {}

    def cover(positions):
        if positions not in masks:
            cols = [p - 1 for p in positions]
            masks[positions] = bits[:, cols].all(axis=1).astype(np.int64) if cols \
                else np.ones(n, dtype=np.int64)
        return masks[positions]

    terms = s2_gate_terms(k, mod)
    U = np.zeros((len(terms), n), dtype=np.int64)
    V = np.zeros((len(terms), n), dtype=np.int64)
    for t, (alpha, beta, c) in enumerate(terms):
        U[t] = c * cover(alpha)
        V[t] = cover(beta)
    return BilinearCircuit.from_arrays(mod, n, U, V)


def dot_from_s2(s2: BilinearCircuit) -> BilinearCircuit:
    """(sum x)(sum y) minus the S^2 circuit."""
    ones = np.ones((1, s2.n), dtype=np.int64)
    U = np.vstack([ones, -s2.U])
    V = np.vstack([ones, s2.V])
    return BilinearCircuit.from_arrays(s2.modulus, s2.n, U, V)


def build_dot_circuit(n: int, mod: Modulus) -> BilinearCircuit:
    return dot_from_s2(build_s2_circuit(n, mod))


@dataclass(frozen=True)
class CircuitCheck:
    target: str
    passed: bool
    verdict: RepVerdict
    problems: tuple[str, ...] = field(default=())


def _witness_names(n: int):
    def name(mono):
        (i, _), (j, _) = mono
        return f"x{i}*y{j - n}"
    return name


def check_record(check: CircuitCheck, n: int) -> dict:
    rec = {"target": check.target, "passed": check.passed}
    rec.update(check.verdict.as_record(_witness_names(n)))
    rec["problems"] = list(check.problems)
    return rec


def verify_s2_circuit(c: BilinearCircuit) -> CircuitCheck:
    """0-a-strong against S_n^2, symmetric, zero diagonal."""
    n, mod = c.n, c.modulus
    M = c.coefficient_matrix
    target = np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64)
    verdict = classify_matrix(target, M, mod)
    problems = []
    if not verdict.zero_a_strong:
        problems.append("not a 0-a-strong representation of S_n^2")
    if not np.array_equal(M, M.T):
        i, j = map(int, np.argwhere(M != M.T)[0])
        problems.append(f"asymmetric: M[{i + 1}][{j + 1}]={M[i, j]} vs M[{j + 1}][{i + 1}]={M[j, i]}")
    if np.diagonal(M).any():
        problems.append("nonzero diagonal")
    return CircuitCheck("s2", not problems, verdict, tuple(problems))


def verify_dot_circuit(c: BilinearCircuit) -> CircuitCheck:
    """1-a-strong against sum_i x_i y_i with diagonal exactly 1."""
    n, mod = c.n, c.modulus
    H = c.coefficient_matrix
    verdict = classify_matrix(np.eye(n, dtype=np.int64), H, mod)
    problems = []
    if not verdict.one_a_strong:
        problems.append("not a 1-a-strong representation of the dot product")
    if not (np.diagonal(H) == 1).all():
        problems.append("diagonal coefficient differs from 1")
    return CircuitCheck("dot", not problems, verdict, tuple(problems))


def _dot_verified(c: BilinearCircuit) -> bool:
    cached = c.__dict__.get("_dot_check")
    if cached is None:
        cached = c.__dict__["_dot_check"] = verify_dot_circuit(c)
    return cached.passed


def _as_matrix(A, n: int, m: int, name: str) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.shape != (n, n):
        raise ValueError(f"{name} must be {n}x{n}, got shape {A.shape}")
    return A % m


def matmul_rep(A, B, c: BilinearCircuit, meter: CostMeter | None = None,
               unsafe: bool = False) -> np.ndarray:
    """Entrywise representation of AB: C[i][j] = h(row_i(A), col_j(B)).

    Each gate's linear forms are applied once to all rows of A and all
    columns of B (constant products, free); the n^2 products per gate are
    the counted multiplications.
    """
    n, m = c.n, c.modulus.m
    A = _as_matrix(A, n, m, "A")
    B = _as_matrix(B, n, m, "B")
    if not unsafe and not _dot_verified(c):
        raise UnverifiedCircuitError("circuit is not a verified dot-product representation")
    P = (A @ c.U.T) % m
    Q = (B.T @ c.V.T) % m
    C = (P @ Q.T) % m
    if meter is not None:
        g = c.gate_count
        meter.charge(mults=n * n * g,
                     free=n * (np.count_nonzero(c.U) + np.count_nonzero(c.V)) + n * n * g)
    return C


def naive_matmul_mod(A, B, m: int) -> np.ndarray:
    """Reference product AB mod m with Python integers."""
    A, B = np.asarray(A).tolist(), np.asarray(B).tolist()
    n = len(A)
    return np.array([[sum(A[i][t] * B[t][j] for t in range(n)) % m for j in range(n)]
                     for i in range(n)], dtype=np.int64).reshape(n, n)


def verify_matmul_probes(c: BilinearCircuit) -> bool:
    """Certify the entrywise property of matmul_rep through indicator probes.

    For every (k, l), A holds a single 1 at row 1, column k and B a single 1
    at row l, column 1, so C[1][1] isolates the coefficient of a_1k b_l1 in
    the computed entry. The probed coefficients must form a 1-a-strong
    representation of the dot product (diagonal exactly 1) and agree with
    the circuit's expansion. Every entry of C is the same bilinear form on
    its own row and column, so this covers all of them.
    """
    n = c.n
    probes = np.zeros((n, n), dtype=np.int64)
    for k in range(n):
        for l in range(n):
            A = np.zeros((n, n), dtype=np.int64)
            B = np.zeros((n, n), dtype=np.int64)
            A[0, k] = 1
            B[l, 0] = 1
            probes[k, l] = matmul_rep(A, B, c, unsafe=True)[0, 0]
    verdict = classify_matrix(np.eye(n, dtype=np.int64), probes, c.modulus)
    return (verdict.one_a_strong and bool((np.diagonal(probes) == 1).all())
            and np.array_equal(probes, c.coefficient_matrix))


@dataclass(frozen=True)
class SurplusMatrix:
    modulus: Modulus
    matrix: np.ndarray

    def zero_factors(self, i: int, j: int) -> frozenset[int]:
        return self.modulus.zero_factors(int(self.matrix[i, j]))


def surplus_matrix(c: BilinearCircuit) -> SurplusMatrix:
    """H - I for a verified dot circuit; every nonzero entry is zero mod some factor."""
    check = verify_dot_circuit(c)
    if not check.passed:
        raise UnverifiedCircuitError("; ".join(check.problems))
    m = c.modulus.m
    S = (c.coefficient_matrix - np.eye(c.n, dtype=np.int64)) % m
    if np.diagonal(S).any():
        raise AssertionError("surplus diagonal must vanish")
    for i, j in np.argwhere(S):
        if not c.modulus.zero_factors(int(S[i, j])):
            raise AssertionError(f"surplus entry ({i + 1},{j + 1}) nonzero mod every factor")
    S.flags.writeable = False
    return SurplusMatrix(c.modulus, S)


def s2_gate_count(k: int, mod: Modulus) -> int:
    """Gate count of the S^2 circuit for n = 2^k, from the closed form of the
    XOR expansion: monomial u^alpha v^beta carries c_|alpha u beta| (-2)^|alpha n beta|."""
    q = build_or_poly(k, mod)
    m = mod.m
    total = 0
    for t, c in enumerate(q.coeffs):
        if not c:
            continue
        total += comb(k, t) * sum(comb(t, j) * 2 ** (t - j)
                                  for j in range(t + 1) if c * (-2) ** j % m)
    return total


def s2_gate_bound(k: int, mod: Modulus) -> int:
    """sum_{t <= d} C(k, t) 3^t with d the plan degree: every surviving gate has
    |alpha u beta| <= d and each position picks u, v or both."""
    d = choose_exponents(k, mod).degree
    return sum(comb(k, t) * 3**t for t in range(min(d, k) + 1))
