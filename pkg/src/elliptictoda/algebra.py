"""Closed differential algebras for exact seed-moment derivatives.

The moment sequences used everywhere are n-th derivatives of a seed
function c_0(t).  Instead of numerical differentiation, each seed lives in
a small function algebra that is closed under d/du:

  * Jacobi algebra: products sn^a cn^b dn^c (b of either sign) with
    coefficients polynomial in k^2, closed under
    d(sn) = cn dn, d(cn) = -sn dn, d(dn) = -k^2 sn cn;
  * trigonometric: sin^a cos^b with d(sin) = cos, d(cos) = -sin;
  * hyperbolic: sinh^a cosh^b with d(sinh) = cosh, d(cosh) = sinh;
  * rational: powers of the variable itself.

Coefficients are exact rationals (per power of the formal parameter k^2),
so repeated differentiation is error-free; rounding enters only at final
evaluation.  Like terms are merged after every step, keeping term counts
polynomial in the derivative order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from mpmath import mp, mpf, workdps

Monomial = Tuple[int, ...]
# coefficient of a monomial: {power of k^2: Fraction}
CoeffPoly = Dict[int, Fraction]


@dataclass(frozen=True)
class DiffAlgebra:
    """Generator names plus the derivative of each generator, given as a
    list of (monomial, parameter-power, rational coefficient) terms."""

    name: str
    generators: Tuple[str, ...]
    rules: Tuple[Tuple[Tuple[Monomial, int, Fraction], ...], ...]


JACOBI = DiffAlgebra(
    name="jacobi",
    generators=("sn", "cn", "dn"),
    rules=(
        (((0, 1, 1), 0, Fraction(1)),),    # d sn = cn dn
        (((1, 0, 1), 0, Fraction(-1)),),   # d cn = -sn dn
        (((1, 1, 0), 1, Fraction(-1)),),   # d dn = -k^2 sn cn
    ),
)

TRIG = DiffAlgebra(
    name="trig",
    generators=("sin", "cos"),
    rules=(
        (((0, 1), 0, Fraction(1)),),
        (((1, 0), 0, Fraction(-1)),),
    ),
)

HYPERBOLIC = DiffAlgebra(
    name="hyperbolic",
    generators=("sinh", "cosh"),
    rules=(
        (((0, 1), 0, Fraction(1)),),
        (((1, 0), 0, Fraction(1)),),
    ),
)

RATIONAL = DiffAlgebra(
    name="rational",
    generators=("x",),
    rules=(
        (((0,), 0, Fraction(1)),),         # d x = 1
    ),
)


class ExactExpression:
    """A finite sum of generator power-products with exact coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: DiffAlgebra,
                 terms: Dict[Monomial, CoeffPoly] | None = None):
        self.algebra = algebra
        self.terms: Dict[Monomial, CoeffPoly] = terms or {}

    # -- construction ------------------------------------------------------
    @classmethod
    def monomial(cls, algebra: DiffAlgebra, mono: Monomial,
                 coeff: Fraction = Fraction(1), param_pow: int = 0):
        return cls(algebra, {tuple(mono): {param_pow: coeff}})

    def copy(self) -> "ExactExpression":
        return ExactExpression(
            self.algebra, {m: dict(c) for m, c in self.terms.items()})

    # -- ring helpers --------------------------------------------------------
    def _add_term(self, mono: Monomial, param_pow: int, coeff: Fraction):
        if coeff == 0:
            return
        poly = self.terms.setdefault(mono, {})
        new = poly.get(param_pow, Fraction(0)) + coeff
        if new == 0:
            poly.pop(param_pow, None)
            if not poly:
                del self.terms[mono]
        else:
            poly[param_pow] = new

    def __eq__(self, other):
        return (isinstance(other, ExactExpression)
                and self.algebra is other.algebra
                and self.terms == other.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        names = self.algebra.generators
        bits = []
        for mono in sorted(self.terms):
            poly = self.terms[mono]
            co = " + ".join(
                (f"{c}" if p == 0 else f"{c}*k2^{p}")
                for p, c in sorted(poly.items()))
            pw = "*".join(f"{g}^{e}" for g, e in zip(names, mono) if e)
            bits.append(f"({co})" + (f"*{pw}" if pw else ""))
        return " + ".join(bits) or "0"

    # -- calculus ------------------------------------------------------------
    def derivative(self) -> "ExactExpression":
        """Exact derivative in the algebra, like terms merged."""
        out = ExactExpression(self.algebra)
        rules = self.algebra.rules
        for mono, poly in self.terms.items():
            for gi, expo in enumerate(mono):
                if expo == 0:
                    continue
                base = list(mono)
                base[gi] = expo - 1
                for rule_mono, rule_ppow, rule_coeff in rules[gi]:
                    new_mono = tuple(b + r for b, r in zip(base, rule_mono))
                    for ppow, coeff in poly.items():
                        out._add_term(new_mono, ppow + rule_ppow,
                                      expo * rule_coeff * coeff)
        return out

    def evaluate(self, values, param=None):
        """Numerical value given generator values (and k^2 where needed)."""
        total = mp.zero
        for mono, poly in self.terms.items():
            factor = mp.one
            for val, expo in zip(values, mono):
                if expo:
                    factor *= val ** expo
            cval = mp.zero
            for ppow, coeff in poly.items():
                c = mpf(coeff.numerator) / coeff.denominator
                cval += c * (param ** ppow if ppow else 1)
            total += cval * factor
        return total


# -- seed expressions for the families that need exact moments -------------

def seed_reciprocal_cn() -> ExactExpression:
    """1/cn, the seed of the first named elliptic case."""
    return ExactExpression.monomial(JACOBI, (0, -1, 0))


def seed_dn_over_cn() -> ExactExpression:
    """dn/cn, the seed of the second named elliptic case."""
    return ExactExpression.monomial(JACOBI, (0, -1, 1))


def seed_secant() -> ExactExpression:
    """1/cos, the trigonometric-limit seed."""
    return ExactExpression.monomial(TRIG, (0, -1))


def seed_cotangent() -> ExactExpression:
    """cos/sin, the finite trigonometric seed."""
    return ExactExpression.monomial(TRIG, (-1, 1))


def seed_hyperbolic_cotangent() -> ExactExpression:
    """cosh/sinh; the t-dependent part of the modified-Meixner seed."""
    return ExactExpression.monomial(HYPERBOLIC, (-1, 1))


def seed_reciprocal_x() -> ExactExpression:
    """1/x, the rational-limit seed."""
    return ExactExpression.monomial(RATIONAL, (-1,))


def derivative_list(seed: ExactExpression, count: int):
    """[seed, seed', ..., seed^(count-1)] with exact coefficients."""
    out = [seed]
    for _ in range(count - 1):
        out.append(out[-1].derivative())
    return out
