"""Sparse multivariate polynomials over Z_m.

A monomial is a tuple of ``(variable_id, exponent)`` pairs sorted by
variable id with positive exponents; ``()`` is the constant monomial.
Monomials are exponent vectors rather than index sets, so ``x1^2`` and
``x1`` are different monomials.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Mapping

from .modring import Modulus, ModulusError

Monomial = tuple[tuple[int, int], ...]

ONE: Monomial = ()


def monomial(*spec) -> Monomial:
    """Build a monomial from variable ids, or ``(var, exp)`` pairs.

    >>> monomial(1, 2)
    ((1, 1), (2, 1))
    >>> monomial((1, 2))
    ((1, 2),)
    """
    exps: dict[int, int] = {}
    for item in spec:
        var, e = item if isinstance(item, tuple) else (item, 1)
        if e < 0:
            raise ValueError("negative exponent")
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def mono_degree(mono: Monomial) -> int:
    return sum(e for _, e in mono)


def mono_key(mono: Monomial):
    """Sort key for graded lexicographic order, highest terms first."""
    return (-mono_degree(mono), tuple((v, -e) for v, e in mono))


def mono_str(mono: Monomial) -> str:
    if not mono:
        return "1"
    return "*".join(f"x{v}" if e == 1 else f"x{v}^{e}" for v, e in mono)


class Polynomial:
    """Immutable polynomial with coefficients in [0, m); zero terms are never stored."""

    __slots__ = ("modulus", "_terms", "_hash")

    def __init__(self, modulus: Modulus, terms: Mapping[Monomial, int] | Iterable = ()):
        self.modulus = modulus
        m = modulus.m
        acc: dict[Monomial, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, c in items:
            acc[mono] = (acc.get(mono, 0) + int(c)) % m
        self._terms = {k: c for k, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, modulus: Modulus, terms: dict[Monomial, int]) -> Polynomial:
        # terms must already be canonical
        p = cls.__new__(cls)
        p.modulus = modulus
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, modulus: Modulus) -> Polynomial:
        return cls._raw(modulus, {})

    @classmethod
    def constant(cls, c: int, modulus: Modulus) -> Polynomial:
        return cls(modulus, {ONE: c})

    @classmethod
    def var(cls, v: int, modulus: Modulus, coeff: int = 1) -> Polynomial:
        return cls(modulus, {((v, 1),): coeff})

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        """Terms in canonical (graded lexicographic) order."""
        return sorted(self._terms.items(), key=lambda kv: mono_key(kv[0]))

    def support(self) -> set[Monomial]:
        return set(self._terms)

    def variables(self) -> set[int]:
        return {v for mono in self._terms for v, _ in mono}

    def degree(self) -> int:
        return max((mono_degree(mono) for mono in self._terms), default=-1)

    def coeff(self, mono: Monomial) -> int:
        return self._terms.get(mono, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def _check(self, other: Polynomial):
        if not isinstance(other, Polynomial):
            raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ModulusError(f"modulus mismatch: {self.modulus.m} vs {other.modulus.m}")

    def _lift(self, other) -> Polynomial:
        if isinstance(other, int):
            return Polynomial.constant(other, self.modulus)
        self._check(other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        m = self.modulus.m
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = (out.get(mono, 0) + c) % m
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Polynomial._raw(self.modulus, out)

    __radd__ = __add__

    def __neg__(self):
        m = self.modulus.m
        return Polynomial._raw(self.modulus, {k: m - c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        m = self.modulus.m
        out: dict[Monomial, int] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = mono_mul(ma, mb)
                out[mono] = (out.get(mono, 0) + ca * cb) % m
        return Polynomial._raw(self.modulus, {k: c for k, c in out.items() if c})

    def __rmul__(self, other):
        return self * other

    def scale(self, c: int) -> Polynomial:
        m = self.modulus.m
        return Polynomial(self.modulus, {k: v * c % m for k, v in self._terms.items()})

    def __pow__(self, e: int):
        r = Polynomial.constant(1, self.modulus)
        for _ in range(e):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.constant(other, self.modulus)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.modulus == other.modulus and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.modulus.m, frozenset(self._terms.items())))
        return self._hash

    def evaluate(self, assignment: Mapping[int, int]) -> int:
        m = self.modulus.m
        total = 0
        for mono, c in self._terms.items():
            t = c
            for v, e in mono:
                if v not in assignment:
                    raise KeyError(f"no value assigned to x{v}")
                t = t * pow(int(assignment[v]), e, m) % m
            total += t
        return total % m

    def substitute(self, images: Mapping[int, Polynomial]) -> Polynomial:
        """Replace each variable v by ``images[v]``; unmapped variables stay."""
        out = Polynomial.zero(self.modulus)
        for mono, c in self._terms.items():
            term = Polynomial.constant(c, self.modulus)
            for v, e in mono:
                img = images.get(v)
                term = term * (img**e if img is not None else Polynomial(self.modulus, {((v, e),): 1}))
            out = out + term
        return out

    def multilinear(self) -> Polynomial:
        """Reduce every exponent to 1 (valid on 0/1 inputs)."""
        return Polynomial(self.modulus, [(tuple((v, 1) for v, _ in mono), c)
                                         for mono, c in self._terms.items()])

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, m={self.modulus.m})"


def poly_coeff(p: Polynomial, mono: Monomial) -> int:
    return p.coeff(mono)


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def poly_eval(p: Polynomial, assignment: Mapping[int, int]) -> int:
    return p.evaluate(assignment)


def format_poly(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for mono, c in p.items():
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono_str(mono))
        else:
            parts.append(f"{c}*{mono_str(mono)}")
    return " + ".join(parts)


_FACTOR = re.compile(r"\s*(?:(\d+)|x(\d+)(?:\s*\^\s*(\d+))?)\s*\*?")


def parse_poly(text: str, modulus: Modulus) -> Polynomial:
    """Parse ``3*x1*x2 + 4*x2^2 + 5``; ``^1`` and ``*`` may be omitted."""
    terms: list[tuple[Monomial, int]] = []
    body = text.strip()
    if not body:
        raise ValueError("empty polynomial text")
    offset = 0
    for raw in body.split("+"):
        if not raw.strip():
            raise ValueError(f"empty term at offset {offset}")
        pos, coeff, exps = 0, 1, []
        while pos < len(raw):
            if raw[pos:].strip() == "":
                break
            mt = _FACTOR.match(raw, pos)
            if not mt or mt.end() == pos:
                raise ValueError(f"unexpected {raw[pos:].strip()[:10]!r} at offset {offset + pos}")
            if mt.group(1) is not None:
                coeff *= int(mt.group(1))
            else:
                exps.append((int(mt.group(2)), int(mt.group(3) or 1)))
            pos = mt.end()
        terms.append((monomial(*exps), coeff))
        offset += len(raw) + 1
    return Polynomial(modulus, terms)
