"""Bilinear circuits computing representations of the dot product and the
matrix product modulo squarefree composites, with exact verifiers."""

from .circuit import BilinearCircuit, BilinearGate, CostMeter, deserialize, serialize
from .construct import (build_dot_circuit, build_s2_circuit, matmul_rep, surplus_matrix,
                        verify_dot_circuit, verify_matmul_probes, verify_s2_circuit)
from .modring import Modulus, ModulusError, Residue, crt_combine, crt_split, factorize
from .orpoly import build_or_poly, choose_exponents, weight_table
from .polynomial import Polynomial, monomial, parse_poly
from .representation import (RepVerdict, check_0a_strong, check_1a_strong, check_alternative,
                             classify, rep_product, rep_sum, surplus_of)

__version__ = "0.1.0"

__all__ = [
    "BilinearCircuit", "BilinearGate", "CostMeter", "Modulus", "ModulusError", "Polynomial",
    "RepVerdict", "Residue", "build_dot_circuit", "build_or_poly", "build_s2_circuit",
    "check_0a_strong", "check_1a_strong", "check_alternative", "choose_exponents", "classify",
    "crt_combine", "crt_split", "deserialize", "factorize", "matmul_rep", "monomial",
    "parse_poly", "rep_product", "rep_sum", "serialize", "surplus_matrix", "surplus_of",
    "verify_dot_circuit", "verify_matmul_probes", "verify_s2_circuit", "weight_table",
]
