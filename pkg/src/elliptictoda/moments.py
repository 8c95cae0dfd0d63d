"""Moment sequences, Hankel determinants, and everything built from them.

The seed moment c_0(t) determines the whole solution: c_n(t) is its n-th
time derivative, the Hankel determinants D_n = det(c_{i+j}) give the
normalization constants h_n = D_{n+1}/D_n and recurrence coefficients
u_n = D_{n-1} D_{n+1} / D_n^2, and the diagonal coefficients come from the
shifted determinants via b_n = S_{n+1}/D_{n+1} - S_n/D_n, where S_n is the
Hankel determinant with its last column advanced by one moment (this is
the derivative formula b_n = (log h_n)' made algebraic by c_j' = c_{j+1}).

Moment derivatives are exact (see algebra.py); numerical error enters only
through the final evaluations and the determinant eliminations, which are
run twice at staggered precisions so that silently wrong output is refused
rather than returned.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Union

from mpmath import mp, mpc, mpf, workdps

from . import algebra
from .algebra import ExactExpression, derivative_list
from .elliptic import GUARD_DPS, _num
from .errors import (
    ConfigurationError,
    DegenerateDeterminantError,
    DomainError,
    EvaluationError,
    PoleError,
)
from .toda import CaseTag, CoefficientTable, TodaParams, c0_eval


class PrecisionWarning(UserWarning):
    """Raised as a warning when a Hankel pipeline is close to its budget."""


@dataclass
class MomentSequence:
    """Moments c_0 .. c_{len-1} of a seed at a fixed time."""

    t: mpf
    values: List[mpf]
    source: str

    def __len__(self):
        return len(self.values)


# re-export: the exact-derivative operation on expressions
def differentiate(expr: ExactExpression) -> ExactExpression:
    """Exact derivative of an expression in its closed algebra."""
    return expr.derivative()


def moments(p, t, count: int, prec: Optional[int] = None) -> MomentSequence:
    """Exact moments c_0 .. c_{2*count-1} for a supported parameter set.

    Accepts TodaParams with a named case tag (elliptic seeds 1/cn, dn/cn)
    or DegenerateParams (secant, modified-Meixner, rational, cotangent
    seeds).  Derivatives are taken in the exact algebra and evaluated at t
    with the appropriate chain factor.
    """
    n_values = 2 * count
    if isinstance(p, TodaParams):
        return _elliptic_moments(p, t, n_values, prec)
    # degenerate families carry a .family attribute
    family = getattr(p, "family", None)
    if family is None:
        raise DomainError(f"unsupported parameter object {type(p).__name__}")
    return _degenerate_moments(p, t, n_values, prec or 50)


def _elliptic_moments(p: TodaParams, t, n_values: int, prec) -> MomentSequence:
    if p.case_tag == "case_i":
        seed = algebra.seed_reciprocal_cn()
    elif p.case_tag == "case_ii":
        seed = algebra.seed_dn_over_cn()
    else:
        raise DomainError(
            "exact moments are available for the named cases only "
            f"(got case_tag={p.case_tag})")
    ctx = p.ctx
    wp = (prec or ctx.prec) + GUARD_DPS
    with workdps(wp):
        t = _num(t)
        hi = ctx.big_k / (p.w * ctx.scale)
        if not (-hi < t < hi):
            raise DomainError(
                f"t={t} outside the admissible interval (-{hi}, {hi})")
        chain = p.w * ctx.scale
        ju = chain * t
        sn, cn, dn = ctx.sncndn(ju)
        if abs(cn) < mpf("1e-25"):
            raise PoleError("cn vanishes: t at the admissible-interval endpoint")
        values = []
        factor = mp.one
        ksq = ctx.k ** 2
        for expr in derivative_list(seed, n_values):
            values.append(+(factor * expr.evaluate((sn, cn, dn), ksq)))
            factor *= chain
    return MomentSequence(t=t, values=values, source=p.case_tag)


def _degenerate_moments(p, t, n_values: int, prec: int) -> MomentSequence:
    with workdps(prec + GUARD_DPS):
        t = _num(t)
        family = p.family
        if family == "mp":
            seed = algebra.seed_secant()
            vals = (mp.sin(t), mp.cos(t))
            chain, extra0, param = mp.one, mp.zero, None
        elif family == "meixner_modified":
            seed = algebra.seed_hyperbolic_cotangent()
            wt = p.w * t
            vals = (mp.sinh(wt), mp.cosh(wt))
            chain, extra0, param = p.w, mp.cosh(p.q) / mp.sinh(p.q), None
        elif family == "krall_laguerre":
            seed = algebra.seed_reciprocal_x()
            vals = (t,)
            chain, extra0, param = mp.one, 1 / p.q, None
        elif family == "trig_finite":
            seed = algebra.seed_cotangent()
            vals = (mp.sin(t), mp.cos(t))
            chain, extra0, param = mp.one, mp.zero, None
        else:
            raise DomainError(f"unsupported family {family}")
        values = []
        factor = mp.one
        for j, expr in enumerate(derivative_list(seed, n_values)):
            v = factor * expr.evaluate(vals, param)
            if j == 0:
                v += extra0
            values.append(+v)
            factor *= chain
    return MomentSequence(t=t, values=values, source=family)


# ---------------------------------------------------------------------------
# Hankel determinants
# ---------------------------------------------------------------------------

def bareiss_minors(rows: Sequence[Sequence]) -> list:
    """All leading principal minors of a square matrix by fraction-free
    (Bareiss) elimination.  Exact over Fractions; over mpf the divisions
    are ordinary but the pivoting order is the same."""
    M = [list(r) for r in rows]
    n = len(M)
    minors = []
    denom = 1
    for k in range(n):
        pivot = M[k][k]
        minors.append(pivot)
        if k == n - 1:
            break
        if pivot == 0:
            raise DegenerateDeterminantError(k + 1, "zero pivot in elimination")
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) / denom
        denom = pivot
    return minors


def bareiss_det(rows: Sequence[Sequence]):
    """Determinant via Bareiss elimination (generic element type)."""
    if not rows:
        return 1
    return bareiss_minors(rows)[-1]


def cofactor_det(rows: Sequence[Sequence]):
    """Cofactor-expansion determinant; exponential, for small self-checks."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in [list(row) for row in rows[1:]]]
        term = rows[0][j] * cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _hankel_matrix(values, n, shift_last: bool = False):
    rows = []
    for i in range(n):
        row = [values[i + j] for j in range(n)]
        if shift_last:
            row[-1] = values[i + n]
        rows.append(row)
    return rows


def _hankel_floor(values, n, dps):
    # Hadamard-style scale: product of row maxima, down at working epsilon
    scale = mp.one
    for i in range(n):
        scale *= max(abs(values[i + j]) for j in range(n))
    return scale * mpf(10) ** (-(dps - 4))


def hankel_determinants(m: MomentSequence, prec: int = 50) -> list:
    """[D_0, D_1, ..., D_N] with N = (len(m)+1)//2, D_n = det(c_{i+j}).

    Each determinant is computed twice at staggered precision; losing
    essentially all digits raises ConfigurationError (precision exhausted)
    rather than returning garbage, and a value below the scale-aware floor
    raises DegenerateDeterminantError (true degeneration, e.g. a collapsed
    limit)."""
    n_top = (len(m.values) + 1) // 2
    return _checked_dets(m.values, n_top, prec, shift_last=False)


def shifted_hankel_determinants(m: MomentSequence, prec: int = 50) -> list:
    """[S_0, S_1, ..., S_N]: Hankel determinants with the last column
    advanced one moment (S_0 = 0, S_1 = c_1).  Unlike D_n these may vanish
    legitimately (all diagonal coefficients zero), so a below-floor value
    becomes an exact zero instead of an error."""
    n_top = len(m.values) // 2
    return _checked_dets(m.values, n_top, prec, shift_last=True)


def _checked_dets(values, n_top, prec, shift_last):
    out = [mpf(0) if shift_last else mpf(1)]
    p1 = prec + GUARD_DPS
    p2 = prec + 3 * GUARD_DPS
    for n in range(1, n_top + 1):
        # Only the final pivot of the shifted matrix is S_n (its leading
        # minors are the plain Hankels), so each size gets its own pass.
        with workdps(p1):
            d1 = bareiss_minors(_hankel_matrix(values, n, shift_last))[-1]
        with workdps(p2):
            d2 = bareiss_minors(_hankel_matrix(values, n, shift_last))[-1]
            floor = _hankel_floor(values, n, p1)
            if abs(d2) < floor:
                if shift_last:
                    out.append(mp.zero)
                    continue
                raise DegenerateDeterminantError(
                    n, f"determinant at n={n} indistinguishable from zero")
            reldiff = abs(d1 - d2) / abs(d2)
            if reldiff > mpf(10) ** (-10):
                raise ConfigurationError(
                    f"Hankel determinant n={n} retains fewer than 10 digits; "
                    f"raise the working precision")
            if reldiff > mpf(10) ** (-(prec // 2)):
                warnings.warn(
                    f"Hankel determinant n={n} is near the precision budget",
                    PrecisionWarning)
            out.append(+d2)
    return out


def coeffs_from_moments(m: MomentSequence, n_max: int,
                        prec: int = 50) -> CoefficientTable:
    """Recurrence coefficients from moments alone:

        u_n = D_{n-1} D_{n+1} / D_n^2
        b_n = S_{n+1}/D_{n+1} - S_n/D_n

    independent of every closed form; provenance tag "moment_derived"."""
    if len(m.values) < 2 * n_max + 2:
        raise DomainError(
            f"need at least {2 * n_max + 2} moments for n_max={n_max}, "
            f"got {len(m.values)}")
    D = _checked_dets(m.values, n_max + 1, prec, shift_last=False)
    S = _checked_dets(m.values, n_max + 1, prec, shift_last=True)
    with workdps(prec + GUARD_DPS):
        b = []
        u = [mp.zero]
        for n in range(n_max + 1):
            b.append(+(S[n + 1] / D[n + 1] - (S[n] / D[n] if n else mp.zero)))
            if n >= 1:
                u.append(+(D[n - 1] * D[n + 1] / D[n] ** 2))
    return CoefficientTable(n_max=n_max, b=b, u=u, t=m.t,
                            provenance="moment_derived")


# ---------------------------------------------------------------------------
# Polynomials, series, continued fractions
# ---------------------------------------------------------------------------

def polynomial_eval(table: CoefficientTable, x, n: int):
    """(P_n(x), [P_0..P_n]) from the monic three-term recurrence
    P_{m+1} = (x - b_m) P_m - u_m P_{m-1}, P_0 = 1, P_1 = x - b_0."""
    if n > table.n_max + 1:
        raise DomainError(f"table covers n <= {table.n_max + 1}, asked for {n}")
    x = _num(x)
    seq = [mp.one]
    if n >= 1:
        prev, cur = mp.one, x - table.b[0]
        seq.append(cur)
        for mth in range(1, n):
            if table.b[mth] is None:
                raise DomainError(f"b_{mth} undefined (truncation pole)")
            prev, cur = cur, (x - table.b[mth]) * cur - table.u[mth] * prev
            seq.append(cur)
    return seq[-1], seq


def polynomial_with_derivative(table: CoefficientTable, x, n: int):
    """(P_n(x), P_n'(x)) via the differentiated recurrence."""
    x = _num(x)
    p_prev, p_cur = mp.one, x - table.b[0]
    d_prev, d_cur = mp.zero, mp.one
    if n == 0:
        return mp.one, mp.zero
    for mth in range(1, n):
        if table.b[mth] is None:
            raise DomainError(f"b_{mth} undefined (truncation pole)")
        p_next = (x - table.b[mth]) * p_cur - table.u[mth] * p_prev
        d_next = p_cur + (x - table.b[mth]) * d_cur - table.u[mth] * d_prev
        p_prev, p_cur = p_cur, p_next
        d_prev, d_cur = d_cur, d_next
    return p_cur, d_cur


def stieltjes_series(m: MomentSequence, z, terms: int):
    """Truncated moment generating series sum_j c_j z^(-j-1).

    Warns when the terms are still growing at the truncation point (the
    series is asymptotic; |z| must dominate the moment growth)."""
    if terms > len(m.values):
        raise DomainError(f"only {len(m.values)} moments available")
    z = _num(z)
    acc = mp.zero
    zinv = 1 / z
    power = zinv
    magnitudes = []
    for j in range(terms):
        term = m.values[j] * power
        magnitudes.append(abs(term))
        acc += term
        power *= zinv
    if terms >= 4 and magnitudes[-1] > magnitudes[-3] and magnitudes[-1] > 0:
        warnings.warn("series terms growing at truncation; increase |z| "
                      "or reduce the order", UserWarning)
    return acc


def e_generating(p, shift, t):
    """Exponential generating function of the moments: equals the seed
    shifted in time, c_0(t + shift)."""
    if isinstance(p, TodaParams):
        return c0_eval(_num(t) + _num(shift), p)
    from .degenerate import degenerate_c0
    return degenerate_c0(p, _num(t) + _num(shift))


def jfraction_eval(table: CoefficientTable, z, depth: int):
    """Depth-limited continued fraction

        1/(z - b_0 - u_1/(z - b_1 - u_2/(...)))

    evaluated bottom-up; depth 1 gives 1/(z - b_0).  Matches the
    1/c_0-normalized moment series to O(z^(-2*depth-1))."""
    if depth < 1:
        raise DomainError("depth must be at least 1")
    if depth - 1 > table.n_max:
        raise DomainError(f"table covers depth <= {table.n_max + 1}")
    z = _num(z)
    tail = mp.zero
    for mth in range(depth - 1, 0, -1):
        den = z - table.b[mth] - tail
        if den == 0:
            raise EvaluationError(mth, f"zero denominator at level {mth}")
        tail = table.u[mth] / den
    den = z - table.b[0] - tail
    if den == 0:
        raise EvaluationError(0, "zero denominator at level 0")
    return 1 / den
