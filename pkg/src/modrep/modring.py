"""Exact arithmetic in Z_m with an explicit prime-power factorization.

Everything here is plain integer arithmetic. Moduli are small constants
(6, 10, 15, 30, ...), so factorization is trial division.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod


class ModulusError(ValueError):
    """Raised for moduli that are invalid or unsupported by a constructor."""


@dataclass(frozen=True)
class Modulus:
    """A modulus m >= 2 together with its factorization p_1^e_1 ... p_l^e_l."""

    m: int
    factors: tuple[tuple[int, int], ...] = field(compare=False)

    def __post_init__(self):
        if self.m < 2:
            raise ModulusError(f"modulus must be >= 2, got {self.m}")
        if prod(p**e for p, e in self.factors) != self.m:
            raise ModulusError(f"factorization {self.factors} does not multiply to {self.m}")
        ps = [p for p, _ in self.factors]
        if ps != sorted(set(ps)) or any(e < 1 for _, e in self.factors):
            raise ModulusError(f"malformed factorization {self.factors}")
        if not all(_is_prime(p) for p in ps):
            raise ModulusError(f"non-prime base in {self.factors}")

    @classmethod
    def of(cls, m: int) -> Modulus:
        return factorize(m)

    @property
    def ell(self) -> int:
        """Number of distinct prime divisors."""
        return len(self.factors)

    @property
    def squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @cached_property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.factors)

    @cached_property
    def crt_units(self) -> tuple[int, ...]:
        """e_i with e_i = 1 mod p_i^e_i and e_i = 0 mod every other factor."""
        units = []
        for q in self.prime_powers:
            rest = self.m // q
            units.append(rest * pow(rest, -1, q) % self.m)
        return tuple(units)

    def zero_factors(self, c: int) -> frozenset[int]:
        """Indices i with c = 0 mod p_i^e_i."""
        return frozenset(i for i, q in enumerate(self.prime_powers) if c % q == 0)

    def describe(self) -> str:
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)

    def __str__(self):
        return str(self.m)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def factorize(m: int) -> Modulus:
    if m < 2:
        raise ModulusError(f"modulus must be >= 2, got {m}")
    factors = []
    rest, d = m, 2
    while d * d <= rest:
        if rest % d == 0:
            e = 0
            while rest % d == 0:
                rest //= d
                e += 1
            factors.append((d, e))
        d += 1
    if rest > 1:
        factors.append((rest, 1))
    return Modulus(m, tuple(factors))


def crt_split(x: int, mod: Modulus) -> tuple[int, ...]:
    """Residues of x modulo each prime-power factor, in factor order."""
    return tuple(x % q for q in mod.prime_powers)


def crt_combine(v, mod: Modulus) -> int:
    """Unique x in [0, m) with x = v_i mod p_i^e_i."""
    if len(v) != mod.ell:
        raise ValueError(f"expected {mod.ell} components, got {len(v)}")
    return sum(vi * ei for vi, ei in zip(v, mod.crt_units)) % mod.m


def binom_mod_prime(w: int, t: int, p: int) -> int:
    """C(w, t) mod p via Lucas' theorem (product of digit-wise binomials)."""
    if t < 0 or w < 0:
        return 0
    r = 1
    while t:
        wd, td = w % p, t % p
        if td > wd:
            return 0
        r = r * _small_binom(wd, td) % p
        w //= p
        t //= p
    return r


def _small_binom(a: int, b: int) -> int:
    num = den = 1
    for i in range(b):
        num *= a - i
        den *= i + 1
    return num // den


@dataclass(frozen=True)
class Residue:
    """An element of Z_m, always held in [0, m)."""

    value: int
    modulus: Modulus

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus.m)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusError(f"mixing Z_{self.modulus.m} and Z_{other.modulus.m}")
            return other.value
        return other

    def __add__(self, other):
        return Residue(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return Residue(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return Residue(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __int__(self):
        return self.value

    def split(self) -> tuple[int, ...]:
        return crt_split(self.value, self.modulus)

    def __repr__(self):
        return f"{self.value} (mod {self.modulus.m})"
