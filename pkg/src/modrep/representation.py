"""Deciding whether g represents f modulo a composite, and composing representations.

Three notions, for f = sum a_I x_I and g = sum b_I x_I over Z_m with
m = q_1 ... q_l (q_i = p_i^e_i):

* alternative: every coefficient agrees modulo at least one q_i;
* 0-a-strong: alternative, and wherever b_I disagrees modulo q_i, b_I = 0 mod q_i;
* 1-a-strong: alternative, and disagreement is only allowed where a_I = 0 mod m.

The checkers work on coefficient arrays so that the same code decides
both sparse polynomials and dense n x n bilinear coefficient matrices.
"""
from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .modring import Modulus, ModulusError
from .polynomial import Monomial, Polynomial, mono_key, mono_str

ALTERNATIVE = "alternative"
ZERO_A_STRONG = "0-a-strong"
ONE_A_STRONG = "1-a-strong"
NOTIONS = (ALTERNATIVE, ZERO_A_STRONG, ONE_A_STRONG)


class PreconditionError(ValueError):
    """An enforced composition precondition does not hold."""


@dataclass(frozen=True)
class Witness:
    """One offending monomial: true coefficient, candidate coefficient, and
    per-factor agreement pattern (True where a = b mod q_i)."""

    monomial: Monomial
    true_coeff: int
    candidate_coeff: int
    agrees: tuple[bool, ...]

    def describe(self, names: Callable[[Monomial], str] = mono_str) -> str:
        pattern = "".join("=" if a else "x" for a in self.agrees)
        return (f"{names(self.monomial)}: true {self.true_coeff}, "
                f"candidate {self.candidate_coeff}, per-factor [{pattern}]")


@dataclass(frozen=True)
class Check:
    """Outcome of one notion; truthy iff it holds."""

    notion: str
    ok: bool
    witness: Witness | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class RepVerdict:
    alternative: bool
    zero_a_strong: bool
    one_a_strong: bool
    witnesses: dict[str, Witness] = field(default_factory=dict)

    def holds(self, notion: str) -> bool:
        return {ALTERNATIVE: self.alternative, ZERO_A_STRONG: self.zero_a_strong,
                ONE_A_STRONG: self.one_a_strong}[notion]

    def check(self, notion: str) -> Check:
        return Check(notion, self.holds(notion), self.witnesses.get(notion))

    def as_record(self, names: Callable[[Monomial], str] = mono_str) -> dict:
        rec = {"alternative": self.alternative, "zero_a_strong": self.zero_a_strong,
               "one_a_strong": self.one_a_strong, "witnesses": {}}
        for notion, w in self.witnesses.items():
            rec["witnesses"][notion] = {
                "monomial": names(w.monomial), "true_coeff": w.true_coeff,
                "candidate_coeff": w.candidate_coeff, "agrees_mod": list(w.agrees)}
        return rec


def classify_arrays(a, b, mod: Modulus, monomial_at: Callable[[int], Monomial]) -> RepVerdict:
    """Classify candidate coefficients ``b`` against true coefficients ``a``.

    ``a`` and ``b`` are aligned flat integer arrays over the union of
    supports (absent coefficients are 0); ``monomial_at(k)`` names entry k
    for witnesses. The first failing entry in array order is the witness.
    """
    a = np.asarray(a, dtype=np.int64).ravel() % mod.m
    b = np.asarray(b, dtype=np.int64).ravel() % mod.m
    agree = np.stack([(a - b) % q == 0 for q in mod.prime_powers]) if a.size else \
        np.zeros((mod.ell, 0), dtype=bool)
    b_zero = np.stack([b % q == 0 for q in mod.prime_powers]) if a.size else agree
    a_zero = a == 0

    alt = agree.any(axis=0)
    zero_ok = alt & (agree | b_zero).all(axis=0)
    one_ok = alt & (agree | a_zero).all(axis=0)

    witnesses = {}
    for notion, ok in ((ALTERNATIVE, alt), (ZERO_A_STRONG, zero_ok), (ONE_A_STRONG, one_ok)):
        bad = np.flatnonzero(~ok)
        if bad.size:
            k = int(bad[0])
            witnesses[notion] = Witness(monomial_at(k), int(a[k]), int(b[k]),
                                        tuple(bool(x) for x in agree[:, k]))
    return RepVerdict(ALTERNATIVE not in witnesses, ZERO_A_STRONG not in witnesses,
                      ONE_A_STRONG not in witnesses, witnesses)


def _same_modulus(*polys: Polynomial) -> Modulus:
    mod = polys[0].modulus
    for p in polys[1:]:
        if p.modulus != mod:
            raise ModulusError(f"modulus mismatch: {mod.m} vs {p.modulus.m}")
    return mod


def classify(f: Polynomial, g: Polynomial) -> RepVerdict:
    """All three notions for candidate g against target f."""
    mod = _same_modulus(f, g)
    monos = sorted(f.support() | g.support(), key=mono_key)
    a = [f.coeff(x) for x in monos]
    b = [g.coeff(x) for x in monos]
    return classify_arrays(a, b, mod, monos.__getitem__)


def check_alternative(f: Polynomial, g: Polynomial) -> Check:
    return classify(f, g).check(ALTERNATIVE)


def check_0a_strong(f: Polynomial, g: Polynomial) -> Check:
    return classify(f, g).check(ZERO_A_STRONG)


def check_1a_strong(f: Polynomial, g: Polynomial) -> Check:
    return classify(f, g).check(ONE_A_STRONG)


@dataclass(frozen=True)
class SurplusEntry:
    coeff: int
    zero_factors: frozenset[int]


@dataclass(frozen=True)
class SurplusReport:
    """Surplus monomials: zero in f, nonzero in g. ``zero_factors`` holds the
    indices i (into ``modulus.factors``) with coefficient = 0 mod p_i^e_i."""

    modulus: Modulus
    entries: dict[Monomial, SurplusEntry]

    def __len__(self):
        return len(self.entries)

    def monomials(self) -> set[Monomial]:
        return set(self.entries)

    def describe(self) -> list[str]:
        out = []
        for mono in sorted(self.entries, key=mono_key):
            e = self.entries[mono]
            zs = ", ".join(str(self.modulus.prime_powers[i]) for i in sorted(e.zero_factors))
            out.append(f"{mono_str(mono)} -> {e.coeff} (zero mod {zs or 'none'})")
        return out


def surplus_of(f: Polynomial, g: Polynomial) -> SurplusReport:
    mod = _same_modulus(f, g)
    entries = {}
    for mono, c in g.terms.items():
        if f.coeff(mono) == 0:
            entries[mono] = SurplusEntry(c, mod.zero_factors(c))
    return SurplusReport(mod, entries)


def surpluses_disjoint(s: SurplusReport, t: SurplusReport) -> bool:
    return not (s.monomials() & t.monomials())


def surpluses_compatible(s: SurplusReport, t: SurplusReport) -> bool:
    return all(s.entries[x].zero_factors & t.entries[x].zero_factors
               for x in s.monomials() & t.monomials())


def _require_representation(f: Polynomial, g: Polynomial, label: str):
    chk = check_1a_strong(f, g)
    if not chk:
        raise PreconditionError(f"{label} is not a 1-a-strong representation: "
                                f"{chk.witness.describe()}")


def rep_product(f: Polynomial, g: Polynomial, f2: Polynomial, g2: Polynomial,
                enforce: bool = True) -> tuple[Polynomial, RepVerdict]:
    """g*g2 as a candidate representation of f*f2, with its verdict.

    With ``enforce`` the inputs must be 1-a-strong representations and the
    variables of {f, g} must be disjoint from those of {f2, g2}; under that
    condition every product monomial splits uniquely and the verdict is
    always 1-a-strong. Without it the verdict is whatever the checker says.
    """
    _same_modulus(f, g, f2, g2)
    if enforce:
        _require_representation(f, g, "left factor")
        _require_representation(f2, g2, "right factor")
        shared = (f.variables() | g.variables()) & (f2.variables() | g2.variables())
        if shared:
            names = ", ".join(f"x{v}" for v in sorted(shared))
            raise PreconditionError(f"factors share variables {names}")
    prod = g * g2
    return prod, classify(f * f2, prod)


def rep_sum(f: Polynomial, g: Polynomial, f2: Polynomial, g2: Polynomial,
            enforce: bool = True) -> tuple[Polynomial, RepVerdict]:
    """g+g2 as a candidate representation of f+f2, with its verdict.

    The enforced condition: the two surpluses are compatible (disjoint
    supports are vacuously compatible), and no surplus monomial of either
    side carries a nonzero true coefficient on the other side.
    """
    _same_modulus(f, g, f2, g2)
    if enforce:
        _require_representation(f, g, "left summand")
        _require_representation(f2, g2, "right summand")
        s, s2 = surplus_of(f, g), surplus_of(f2, g2)
        if not surpluses_compatible(s, s2):
            raise PreconditionError("surpluses are neither disjoint nor compatible")
        for report, other in ((s, f2), (s2, f)):
            for mono in sorted(report.monomials(), key=mono_key):
                if other.coeff(mono):
                    raise PreconditionError(
                        f"surplus monomial {mono_str(mono)} has nonzero true coefficient "
                        f"{other.coeff(mono)} in the other summand")
    total = g + g2
    return total, classify(f + f2, total)


def classify_matrix(target, candidate, mod: Modulus,
                    monomial_at: Callable[[int, int], Monomial] | None = None) -> RepVerdict:
    """Classify a bilinear coefficient matrix (entry [i, j] is the coefficient
    of x_{i+1} y_{j+1}). Default witness monomials use ids x_i -> i, y_j -> n + j."""
    target = np.asarray(target)
    n_rows, n_cols = target.shape
    if monomial_at is None:
        def monomial_at(i, j):
            return ((i + 1, 1), (n_rows + j + 1, 1))
    return classify_arrays(target, candidate, mod,
                           lambda k: monomial_at(*divmod(k, n_cols)))


def bilinear_polynomial(matrix: Sequence[Sequence[int]], mod: Modulus) -> Polynomial:
    """x^T M y as a Polynomial with x_i -> variable i and y_j -> variable n + j."""
    mat = np.asarray(matrix, dtype=np.int64) % mod.m
    n = mat.shape[0]
    rows, cols = np.nonzero(mat)
    return Polynomial(mod, {((int(i) + 1, 1), (n + int(j) + 1, 1)): int(mat[i, j])
                            for i, j in zip(rows, cols)})
