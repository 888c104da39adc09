from math import comb

import numpy as np
import pytest

from modrep.circuit import BilinearCircuit, CostMeter
from modrep.construct import (UnverifiedCircuitError, build_dot_circuit, build_s2_circuit,
                              dot_from_s2, index_bits, matmul_rep, naive_matmul_mod,
                              s2_gate_bound, s2_gate_count, s2_gate_terms, surplus_matrix,
                              verify_dot_circuit, verify_matmul_probes, verify_s2_circuit)
from modrep.modring import ModulusError, factorize
from modrep.orpoly import choose_exponents
from oracles import closed_form_terms, expected_s2_matrix, hamming

M6 = factorize(6)
MODULI = [6, 10, 15, 30]


def test_index_bits():
    assert index_bits(1).shape == (1, 0)
    assert index_bits(4).tolist() == [[0, 0], [1, 0], [0, 1], [1, 1]]
    assert index_bits(5).shape == (5, 3)


@pytest.mark.parametrize("m", MODULI)
@pytest.mark.parametrize("k", range(0, 7))
def test_xor_expansion_matches_closed_form(k, m):
    mod = factorize(m)
    got = {(a, b): c for a, b, c in s2_gate_terms(k, mod)}
    assert got == closed_form_terms(k, mod)
    assert len(got) == s2_gate_count(k, mod)


def test_s2_examples():
    c2 = build_s2_circuit(2, M6)
    assert c2.gate_count == 3
    assert c2.coefficient_matrix.tolist() == [[0, 1], [1, 0]]
    c4 = build_s2_circuit(4, M6)
    assert c4.gate_count == 15
    M = c4.coefficient_matrix
    for i in range(4):
        for j in range(4):
            assert M[i, j] == {0: 0, 1: 1, 2: 4}[hamming(i, j)]
    assert build_s2_circuit(1, M6).gate_count == 0


def test_dot_examples():
    d2 = build_dot_circuit(2, M6)
    assert d2.gate_count == 4
    assert d2.coefficient_matrix.tolist() == [[1, 0], [0, 1]]
    d4 = build_dot_circuit(4, M6)
    assert d4.gate_count == 16
    H = d4.coefficient_matrix
    for i in range(4):
        for j in range(4):
            assert H[i, j] == {0: 1, 1: 0, 2: 3}[hamming(i, j)]
    d1 = build_dot_circuit(1, M6)
    assert d1.gate_count == 1 and d1.coefficient_matrix.tolist() == [[1]]


@pytest.mark.parametrize("m", [12, 4, 7, 5])
def test_rejects_unsupported_moduli(m):
    with pytest.raises(ModulusError):
        build_s2_circuit(4, factorize(m))
    with pytest.raises(ModulusError):
        build_dot_circuit(4, factorize(m))


@pytest.mark.parametrize("m", MODULI)
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 7, 8, 12, 16, 33, 64])
def test_contracts_and_hamming_oracle(n, m):
    mod = factorize(m)
    s2 = build_s2_circuit(n, mod)
    dot = dot_from_s2(s2)
    assert verify_s2_circuit(s2).passed
    assert verify_dot_circuit(dot).passed
    assert dot.gate_count == s2.gate_count + 1
    assert np.array_equal(s2.coefficient_matrix, expected_s2_matrix(n, mod))
    H = dot.coefficient_matrix
    assert (np.diagonal(H) == 1).all()
    for i, j in zip(*np.nonzero(H - np.eye(n, dtype=np.int64))):
        assert mod.zero_factors(int(H[i, j]))


@pytest.mark.parametrize("m", MODULI)
def test_power_of_two_counts_match_closed_form(m):
    mod = factorize(m)
    for k in range(8):
        assert build_s2_circuit(2**k, mod).gate_count == s2_gate_count(k, mod)


def test_gate_bound():
    for m in MODULI:
        mod = factorize(m)
        for k in range(17):
            assert s2_gate_count(k, mod) <= s2_gate_bound(k, mod)
            d = choose_exponents(k, mod).degree
            assert s2_gate_bound(k, mod) == sum(comb(k, t) * 3**t for t in range(min(d, k) + 1))


def test_verify_dot_rejects_plain_sum_product():
    n = 4
    ones = np.ones((1, n), dtype=np.int64)
    c = BilinearCircuit(M6, n, ones, ones)
    check = verify_dot_circuit(c)
    assert not check.passed and not check.verdict.alternative
    w = check.verdict.witnesses["alternative"]
    assert (w.true_coeff, w.candidate_coeff) == (0, 1)
    assert verify_dot_circuit(BilinearCircuit(M6, 1, [[1]], [[1]])).passed


def test_verify_s2_flags_asymmetry():
    c = BilinearCircuit(M6, 2, [[1, 0]], [[0, 1]])
    check = verify_s2_circuit(c)
    assert not check.passed
    assert any("asymmetric" in p for p in check.problems)


def test_matmul_examples():
    meter = CostMeter()
    C = matmul_rep([[2]], [[5]], build_dot_circuit(1, M6), meter)
    assert C.tolist() == [[4]] and meter.bilinear_mults == 1
    I2 = np.eye(2, dtype=np.int64)
    meter = CostMeter()
    assert matmul_rep(I2, I2, build_dot_circuit(2, M6), meter).tolist() == I2.tolist()
    assert meter.bilinear_mults == 16
    I4 = np.eye(4, dtype=np.int64)
    d4 = build_dot_circuit(4, M6)
    meter = CostMeter()
    C = matmul_rep(I4, I4, d4, meter)
    assert meter.bilinear_mults == 256
    assert np.array_equal(C, d4.coefficient_matrix)
    assert not np.array_equal(C, I4)


def test_matmul_rejects_bad_input():
    d2 = build_dot_circuit(2, M6)
    with pytest.raises(ValueError):
        matmul_rep(np.eye(3), np.eye(3), d2)
    fake = BilinearCircuit(M6, 2, [[1, 1]], [[1, 1]])
    with pytest.raises(UnverifiedCircuitError):
        matmul_rep(np.eye(2), np.eye(2), fake)
    assert matmul_rep(np.eye(2), np.eye(2), fake, unsafe=True).tolist() == [[1, 1], [1, 1]]


@pytest.mark.parametrize("m", MODULI)
@pytest.mark.parametrize("n", [1, 2, 3, 8, 16])
def test_matmul_decomposes_through_h(n, m):
    mod = factorize(m)
    rng = np.random.default_rng(n * 100 + m)
    dot = build_dot_circuit(n, mod)
    H = dot.coefficient_matrix
    S = surplus_matrix(dot).matrix
    for _ in range(5):
        A = rng.integers(0, m, (n, n))
        B = rng.integers(0, m, (n, n))
        C = matmul_rep(A, B, dot)
        assert np.array_equal(C, (A @ H @ B) % m)
        assert np.array_equal(C, (naive_matmul_mod(A, B, m) + A @ S @ B) % m)


def test_probes():
    for n in (1, 2, 4, 8):
        assert verify_matmul_probes(build_dot_circuit(n, M6))
    d4 = build_dot_circuit(4, M6)
    broken = BilinearCircuit(M6, 4, d4.U[:-1], d4.V[:-1])
    assert not verify_matmul_probes(broken)


def test_surplus_matrix_examples():
    assert not surplus_matrix(build_dot_circuit(2, M6)).matrix.any()
    S = surplus_matrix(build_dot_circuit(4, M6))
    for i in range(4):
        for j in range(4):
            assert S.matrix[i, j] == (3 if hamming(i, j) == 2 else 0)
    assert S.zero_factors(0, 3) == {1}
    assert not surplus_matrix(build_dot_circuit(1, M6)).matrix.any()
    with pytest.raises(UnverifiedCircuitError):
        surplus_matrix(BilinearCircuit(M6, 2, [[1, 1]], [[1, 1]]))


def test_construction_is_deterministic():
    for m in MODULI:
        mod = factorize(m)
        assert build_dot_circuit(32, mod) == build_dot_circuit(32, mod)
