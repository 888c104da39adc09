"""Symmetric weak-OR polynomials over a squarefree composite modulus.

For every prime p | m the indicator

    d_p(z) = 1 - prod_{s < a_p} (1 - S^{p^s}(z)^(p-1))   (mod p)

is 1 exactly when the weight w of the 0/1 vector z is nonzero modulo
p^a_p: by Lucas, S^{p^s} evaluates to the s-th base-p digit of w, and the
(p-1)-th power flattens a nonzero digit to 1. The CRT combination
Q = sum_p e_p d_p is therefore 0 at w = 0 and a selector value (0 or 1 mod
every prime, 1 mod at least one) for 1 <= w <= k whenever
prod_p p^a_p > k. Its degree is max_p (p^a_p - 1).

Symmetric multilinear polynomials are held in the elementary symmetric
basis S^0, ..., S^k, where S^a S^b = sum_t C(t, a) C(a, a + b - t) S^t.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb

from .modring import Modulus, ModulusError, binom_mod_prime, crt_combine
from .polynomial import Polynomial


def require_squarefree_composite(mod: Modulus):
    if not mod.squarefree:
        raise ModulusError(f"modulus must be squarefree, got {mod.m} = {mod.describe()}")
    if mod.ell < 2:
        raise ModulusError(f"modulus must have at least two distinct prime factors, got {mod.m}")


@dataclass(frozen=True)
class ExponentPlan:
    modulus: Modulus
    k: int
    exponents: tuple[int, ...]

    @property
    def degree(self) -> int:
        return max(p**a - 1 for p, a in zip(self.modulus.primes, self.exponents))

    @property
    def cover(self) -> int:
        """prod_p p^a_p; weights 1..cover-1 are detected."""
        r = 1
        for p, a in zip(self.modulus.primes, self.exponents):
            r *= p**a
        return r


def choose_exponents(k: int, mod: Modulus) -> ExponentPlan:
    """Minimal-degree exponents a_p with prod p^a_p > k.

    At least two primes are kept active (a_p >= 1) so the polynomial is a
    genuinely composite-modulus object; with a single active prime it is an
    ordinary OR polynomial modulo that prime. Ties go to the
    lexicographically smallest exponent tuple. k = 0 gives all zeros.
    """
    require_squarefree_composite(mod)
    if k < 0:
        raise ValueError("k must be nonnegative")
    primes = mod.primes
    if k == 0:
        return ExponentPlan(mod, 0, (0,) * len(primes))
    # a_p beyond the point where p^a_p alone exceeds k never helps
    ranges = []
    for p in primes:
        top = 1
        while p**top <= k:
            top += 1
        ranges.append(range(top + 1))
    best = None
    for exps in itertools.product(*ranges):
        if sum(1 for a in exps if a) < 2:
            continue
        cover = 1
        for p, a in zip(primes, exps):
            cover *= p**a
        if cover <= k:
            continue
        deg = max(p**a - 1 for p, a in zip(primes, exps))
        if best is None or (deg, exps) < best:
            best = (deg, exps)
    return ExponentPlan(mod, k, best[1])


def _sym_mul(a: list[int], b: list[int], k: int, p: int) -> list[int]:
    out = [0] * (k + 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            if not cb:
                continue
            for t in range(max(i, j), min(i + j, k) + 1):
                out[t] = (out[t] + ca * cb * comb(t, i) * comb(i, i + j - t)) % p
    return out


def _sym_basis(t: int, k: int) -> list[int]:
    v = [0] * (k + 1)
    if t <= k:
        v[t] = 1
    return v


def _indicator(p: int, a: int, k: int) -> list[int]:
    one = _sym_basis(0, k)
    prod = one
    for s in range(a):
        digit = _sym_basis(p**s, k)
        power = one
        for _ in range(p - 1):
            power = _sym_mul(power, digit, k, p)
        factor = [(x - y) % p for x, y in zip(one, power)]
        prod = _sym_mul(prod, factor, k, p)
    return [(x - y) % p for x, y in zip(one, prod)]


@dataclass(frozen=True)
class SymmetricPoly:
    """sum_t coeffs[t] * S^t(z_1..z_k) over Z_m."""

    modulus: Modulus
    k: int
    coeffs: tuple[int, ...]
    plan: ExponentPlan | None = None

    @property
    def degree(self) -> int:
        return max((t for t, c in enumerate(self.coeffs) if c), default=-1)

    @cached_property
    def multilinear(self) -> Polynomial:
        """Expanded form in variables z_1..z_k (ids 1..k); exponential in k."""
        terms = {}
        for t, c in enumerate(self.coeffs):
            if c:
                for subset in itertools.combinations(range(1, self.k + 1), t):
                    terms[tuple((v, 1) for v in subset)] = c
        return Polynomial(self.modulus, terms)

    def value_at_weight(self, w: int) -> int:
        return weight_value(self, w)


def build_or_poly(k: int, mod: Modulus) -> SymmetricPoly:
    plan = choose_exponents(k, mod)
    per_prime = [_indicator(p, a, k) for p, a in zip(mod.primes, plan.exponents)]
    coeffs = tuple(crt_combine(col, mod) for col in zip(*per_prime))
    return SymmetricPoly(mod, k, coeffs, plan)


def weight_value(q: SymmetricPoly, w: int) -> int:
    """sum_t c_t C(w, t) mod m, per prime via Lucas, then CRT."""
    mod = q.modulus
    parts = []
    for p in mod.primes:
        parts.append(sum(c * binom_mod_prime(w, t, p) for t, c in enumerate(q.coeffs)) % p)
    return crt_combine(parts, mod)


def weight_table(q: SymmetricPoly) -> list[int]:
    return [weight_value(q, w) for w in range(q.k + 1)]


def is_selector(value: int, mod: Modulus) -> bool:
    """0 or 1 modulo every prime factor and 1 modulo at least one."""
    residues = [value % p for p in mod.primes]
    return all(r in (0, 1) for r in residues) and 1 in residues


def selector_set(mod: Modulus) -> list[int]:
    return sorted(v for v in range(mod.m) if is_selector(v, mod))
