"""Discrete orthogonality measures.

For the two named elliptic cases the polynomials are orthogonal on a
uniform grid on the real axis whose masses are the Fourier coefficients of
the imaginary-time seed, tilted by exp(x t):

  case i:  x_s = pi w sqrt(e1-e3) (2s-1)/(2K'),
           M_s(t) = pi/(k' K') exp(x_s t) / (v^(s-1/2) + v^(1/2-s))
  case ii: x_s = pi w sqrt(e1-e3) s / K',
           M_s(t) = pi/K'      exp(x_s t) / (v^s + v^(-s))

with v = exp(-pi K/K').  The masses are positive and the moment sums
converge exactly on the open interval |t| < K/(w sqrt(e1-e3)).  (The
case-ii normalization pi/K' is fixed by requiring sum M_s x_s^j = c_j(t);
a factor-2 variant fails that identity at j = 0 already.)

Truncation policy: both tails decay geometrically with ratio
v exp(+-step*t) < 1 inside the admissible interval; the truncation index
is grown until an explicit geometric tail bound (including the polynomial
factor |x|^j_max) drops below the requested epsilon.

Finite measures (a vanishing u_N) are handled by the classical quadrature
construction: nodes are the eigenvalues of the truncated symmetric
tridiagonal recurrence matrix, weights come from the Christoffel formula
h_{N-1} / (P_{N-1}(x_s) P_N'(x_s)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from mpmath import mp, mpf, workdps
import mpmath

from .elliptic import GUARD_DPS, _num
from .errors import DegenerateDeterminantError, DomainError, TruncationError
from .moments import MomentSequence, polynomial_eval, polynomial_with_derivative
from .toda import CoefficientTable, TodaParams

U_ZERO_REL_TOL = mpf("1e-10")


@dataclass
class DiscreteMeasure:
    """Point masses M_s at grid points x_s, with its truncation metadata."""

    indices: List[int]
    points: List[mpf]
    masses: List[mpf]
    t: mpf
    case: str
    tail_bound: mpf
    j_max: int

    def __len__(self):
        return len(self.points)

    def mass_sum(self):
        return mp.fsum(self.masses)


def admissible_interval(p: TodaParams):
    """Open t-interval on which the moments converge and the masses are
    positive; identical for the two named cases."""
    if p.case_tag not in ("case_i", "case_ii"):
        raise DomainError("admissible interval defined for the named cases")
    ctx = p.ctx
    with workdps(ctx.prec + GUARD_DPS):
        hi = ctx.big_k / (p.w * ctx.scale)
        return -hi, +hi


def _require_admissible(p, t):
    lo, hi = admissible_interval(p)
    if not (lo < t < hi):
        raise DomainError(
            f"t={mp.nstr(t, 10)} outside the admissible interval "
            f"({mp.nstr(lo, 10)}, {mp.nstr(hi, 10)})")


def build_measure(p: TodaParams, t, tail_eps, j_max: int = 16) -> DiscreteMeasure:
    """Truncated discrete measure for a named case at admissible t.

    The neglected tail of sum |M_s| |x_s|^j is below tail_eps for every
    j <= j_max."""
    ctx = p.ctx
    with workdps(ctx.prec + GUARD_DPS):
        t = _num(t)
        tail_eps = _num(tail_eps)
        _require_admissible(p, t)
        v = ctx.nome_v
        step = mp.pi * p.w * ctx.scale / ctx.big_kprime
        case = p.case_tag

        if case == "case_i":
            def point(s):
                return step * (s - mpf(1) / 2)

            def bare_mass(s):
                return (mp.pi / (ctx.kprime * ctx.big_kprime)
                        / (v ** (s - mpf(1) / 2) + v ** (mpf(1) / 2 - s)))
        else:
            def point(s):
                return step * s

            def bare_mass(s):
                return mp.pi / (ctx.big_kprime * (v ** s + v ** (-s)))

        def mass(s):
            return bare_mass(s) * mp.exp(point(s) * t)

        ratio_plus = v * mp.exp(step * t)
        ratio_minus = v * mp.exp(-step * t)

        def side_cut(ratio, sign):
            # term(s) = M(+-s) * max(1,|x|)^j_max; geometric tail bound with
            # the polynomial factor absorbed into a safe ratio estimate
            s = 1
            while True:
                idx = s if sign > 0 else 1 - s if case == "case_i" else -s
                term = mass(idx) * max(mpf(1), abs(point(idx))) ** j_max
                eff = ratio * (mpf(s + 1) / s) ** j_max
                if eff < 1 and term * eff / (1 - eff) < tail_eps / 2:
                    return s, term * eff / (1 - eff)
                s += 1
                if s > 10000:
                    raise TruncationError(
                        "tail bound unreachable; t too close to the interval "
                        "endpoint for this tail_eps")

        s_plus, bound_plus = side_cut(ratio_plus, +1)
        s_minus, bound_minus = side_cut(ratio_minus, -1)

        if case == "case_i":
            lo_idx, hi_idx = 1 - s_minus, s_plus
        else:
            lo_idx, hi_idx = -s_minus, s_plus
        indices = list(range(lo_idx, hi_idx + 1))
        points = [+point(s) for s in indices]
        masses = [+mass(s) for s in indices]
        return DiscreteMeasure(indices=indices, points=points, masses=masses,
                               t=+t, case=case,
                               tail_bound=+(bound_plus + bound_minus),
                               j_max=j_max)


def measure_moments(mu: DiscreteMeasure, j_max: int) -> MomentSequence:
    """Truncated power sums sum_s M_s x_s^j, j = 0..j_max."""
    if j_max > mu.j_max:
        raise TruncationError(
            f"measure truncated for j <= {mu.j_max}, asked for {j_max}")
    values = []
    power = [mp.one] * len(mu.points)
    for j in range(j_max + 1):
        values.append(mp.fsum(m * pw for m, pw in zip(mu.masses, power)))
        power = [pw * x for pw, x in zip(power, mu.points)]
    return MomentSequence(t=mu.t, values=values, source="measure-sum")


def orthogonality_gram(mu: DiscreteMeasure, table: CoefficientTable,
                       n_max: int) -> list:
    """Gram matrix G[n][m] = sum_s M_s P_n(x_s) P_m(x_s), n,m <= n_max.

    Diagonal entries approximate the normalization constants h_n;
    off-diagonal entries vanish up to the truncation error."""
    if n_max > table.n_max:
        raise DomainError("coefficient table too short for requested n_max")
    rows = []
    for x in mu.points:
        _, seq = polynomial_eval(table, x, n_max)
        rows.append(seq)
    gram = []
    for n in range(n_max + 1):
        gram_row = []
        for m in range(n_max + 1):
            gram_row.append(mp.fsum(
                mass * rows[s][n] * rows[s][m]
                for s, mass in enumerate(mu.masses)))
        gram.append(gram_row)
    return gram


def carleman_partial_sums(table: CoefficientTable, n_max: int) -> list:
    """Partial sums of u_n^(-1/2), the moment-problem determinacy witness
    (divergence is sufficient for a unique measure)."""
    if n_max > table.n_max:
        raise DomainError("coefficient table too short")
    acc = mp.zero
    out = []
    for n in range(1, n_max + 1):
        u = table.u[n]
        if not u > 0:
            raise DomainError(f"u_{n} = {u} is not positive")
        acc += 1 / mp.sqrt(u)
        out.append(+acc)
    return out


def carleman_even_bound(p: TodaParams, t):
    """Uniform upper bound for the even-index u's inside the admissible
    interval: dn^2(u) / (k'^2 cn^2(u)) at u = w t sqrt(e1-e3), scaled by
    4 w^2 (e1-e2).  (Bounded u's along a subsequence force divergence of
    the determinacy sum.)"""
    if p.case_tag not in ("case_i", "case_ii"):
        raise DomainError("bound defined for the named cases")
    ctx = p.ctx
    with workdps(ctx.prec + GUARD_DPS):
        t = _num(t)
        _require_admissible(p, t)
        sn, cn, dn = ctx.sncndn(p.w * t * ctx.scale)
        return +(dn ** 2 / (ctx.kprime ** 2 * cn ** 2))


def tridiagonal_eigenvalues(diag, off):
    """Eigenvalues of a symmetric tridiagonal matrix at working precision."""
    n = len(diag)
    A = mp.matrix(n, n)
    for i in range(n):
        A[i, i] = diag[i]
    for i in range(n - 1):
        A[i, i + 1] = off[i]
        A[i + 1, i] = off[i]
    E = mpmath.eigsy(A, eigvals_only=True)
    return [E[i] for i in range(n)]


def truncation_index(table: CoefficientTable) -> int:
    """First index L >= 1 with u_L = 0 within tolerance; the preceding u's
    must be strictly positive."""
    for n in range(1, table.n_max + 1):
        if abs(table.u[n]) < U_ZERO_REL_TOL * max(mpf(1), abs(table.u[n - 1])):
            for m in range(1, n):
                if not table.u[m] > 0:
                    raise DomainError(f"u_{m} <= 0 below the truncation index")
            return n
        if not table.u[n] > 0:
            raise DomainError(f"u_{n} <= 0 before any truncation index")
    raise DomainError("no vanishing u_n in the table")


def finite_measure(table: CoefficientTable, c0, prec: int = 50) -> DiscreteMeasure:
    """Finite measure from a truncated recurrence (u_L = 0 in the table).

    Nodes are the roots of P_L, obtained as eigenvalues of the L x L
    symmetric tridiagonal matrix (b on the diagonal, sqrt(u) off it);
    weights are h_{L-1} / (P_{L-1}(x_s) P_L'(x_s)).  All weights are
    positive when c0 > 0 and the surviving u's are positive."""
    with workdps(prec + GUARD_DPS):
        c0 = _num(c0)
        L = truncation_index(table)
        diag = [table.b[n] for n in range(L)]
        off = [mp.sqrt(table.u[n]) for n in range(1, L)]
        nodes = tridiagonal_eigenvalues(diag, off)
        nodes.sort()
        if L > 1:
            gap = min(nodes[i + 1] - nodes[i] for i in range(L - 1))
            if gap < mpf(10) ** (-(prec // 2)):
                raise DegenerateDeterminantError(
                    L, "multiple roots of the truncating polynomial")
        h = c0
        for n in range(1, L):
            h *= table.u[n]
        weights = []
        for x in nodes:
            p_last, _ = polynomial_eval(table, x, L - 1)
            _, dp = polynomial_with_derivative(table, x, L)
            weights.append(+(h / (p_last * dp)))
        return DiscreteMeasure(indices=list(range(L)),
                               points=[+x for x in nodes],
                               masses=weights, t=table.t, case="finite",
                               tail_bound=mp.zero, j_max=2 * L)
