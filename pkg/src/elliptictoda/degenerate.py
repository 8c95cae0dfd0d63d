"""Degenerate limits of the elliptic families.

When roots of the cubic collide, the elliptic solutions collapse onto
classical discrete or continuous families:

  * trigonometric limit (k = 0): seed 1/cos t, coefficients
    u_n = n^2/cos^2 t, b_n = (2n+1) tan t; these are Meixner-Pollaczek
    polynomials with lambda = 1/2, phi = t + pi/2, orthogonal on the line
    against pi exp(tx) / (2 cosh(pi x/2));
  * hyperbolic seed with an extra constant: modified Meixner (Meixner
    polynomials with a point mass added at x = 0);
  * all-roots-equal rational limit: Krall-Laguerre (Laguerre with a point
    mass at the endpoint);
  * general trigonometric seed sin(wt+q)/(sin q sin wt): indefinite sign
    for generic parameters, but at w = 1, q = pi/2, t = pi/(2(N+2)) the
    chain truncates and a positive finite measure survives;
  * the hyperbolic limit of the named elliptic cases themselves is a true
    degeneration (every even-index u vanishes identically), guarded here
    rather than evaluated.

Lattice orthogonality sums and the two quadrature checks reproduce the
seed moments exactly; the modified-Meixner lattice carries prefactor 2 on
the s >= 0 terms, which is the unique choice consistent with
2 sum exp(-2wts) + exp(-q)/sinh(q) = c_0(t).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from mpmath import mp, mpc, mpf, workdps

from .elliptic import GUARD_DPS, _num
from .errors import DegenerateDeterminantError, DomainError, PoleError, TruncationError
from .toda import CoefficientTable
from .moments import polynomial_eval

Family = str  # "mp" | "meixner_modified" | "krall_laguerre" | "trig_finite"


@dataclass(frozen=True)
class DegenerateParams:
    """Parameter carrier for the degenerate families.

    Admissibility: mp needs |t| < pi/2; meixner_modified needs w, t, q > 0;
    krall_laguerre needs t, q > 0; trig_finite fixes w = 1, q = pi/2 and
    evaluates at t = pi/(2(N+2))."""

    family: Family
    w: mpf = mpf(1)
    q: Optional[mpf] = None
    N: Optional[int] = None

    def __post_init__(self):
        if self.family not in ("mp", "meixner_modified", "krall_laguerre",
                               "trig_finite"):
            raise DomainError(f"unknown family {self.family}")
        if self.family == "trig_finite" and (self.N is None or self.N < 2):
            raise DomainError("trig_finite needs N >= 2")
        if self.family in ("meixner_modified", "krall_laguerre") and (
                self.q is None or not self.q > 0):
            raise DomainError(f"{self.family} needs q > 0")

    def check_time(self, t):
        if self.family == "mp" and not abs(t) < mp.pi / 2:
            raise DomainError("admissible interval is |t| < pi/2")
        if self.family in ("meixner_modified", "krall_laguerre") and not t > 0:
            raise DomainError("needs t > 0")


def degenerate_c0(p: DegenerateParams, t):
    """Seed moment c_0(t) of a degenerate family."""
    with workdps(mp.dps):
        t = _num(t)
        p.check_time(t)
        if p.family == "mp":
            return 1 / mp.cos(t)
        if p.family == "meixner_modified":
            return meixner_modified_c0(t, p.w, p.q)
        if p.family == "krall_laguerre":
            return 1 / t + 1 / p.q
        return trig_c0(t, mpf(1), mp.pi / 2)


# ---------------------------------------------------------------------------
# Meixner-Pollaczek limit (k = 0)
# ---------------------------------------------------------------------------

def mp_coeffs(n: int, t, prec: int = 50):
    """u_n = n^2/cos^2 t, b_n = (2n+1) tan t on |t| < pi/2."""
    if n < 0:
        raise DomainError("index must be nonnegative")
    with workdps(prec + GUARD_DPS):
        t = _num(t)
        if not abs(t) < mp.pi / 2:
            raise DomainError("admissible interval is |t| < pi/2")
        c = mp.cos(t)
        return +((2 * n + 1) * mp.tan(t)), +(mpf(n) ** 2 / c ** 2)


def mp_weight(x, t, prec: int = 50):
    """Line weight pi exp(tx) / (2 cosh(pi x/2))."""
    with workdps(prec + GUARD_DPS):
        x = _num(x)
        t = _num(t)
        return +(mp.pi * mp.exp(t * x) / (2 * mp.cosh(mp.pi * x / 2)))


def mp_table(t, n_max: int, prec: int = 50) -> CoefficientTable:
    with workdps(prec + GUARD_DPS):
        t = _num(t)
        pairs = [mp_coeffs(n, t, prec) for n in range(n_max + 1)]
    return CoefficientTable(n_max=n_max, b=[p[0] for p in pairs],
                            u=[p[1] for p in pairs], t=t,
                            provenance="closed_form")


def _weight_cutoff(rate, poly_degree, eps):
    """X with exp(-rate*X) * X^poly_degree < eps, by doubling."""
    X = mpf(10)
    while mp.exp(-rate * X) * X ** poly_degree >= eps:
        X *= 2
        if X > 10 ** 9:
            raise TruncationError("weight tail bound unreachable")
    return X


def mp_weight_orthogonality(n_max: int, t, quadrature_eps, prec: int = 50):
    """Gram matrix of the continuous orthogonality by tanh-sinh quadrature.

    The integration window (-X, X) is cut where the exponential weight
    beats the polynomial growth by the requested epsilon; the quadrature
    budget is two orders below it."""
    with workdps(prec + GUARD_DPS):
        t = _num(t)
        eps = _num(quadrature_eps)
        if not abs(t) < mp.pi / 2:
            raise DomainError("admissible interval is |t| < pi/2")
        rate = mp.pi / 2 - abs(t)
        if rate <= 0:
            raise TruncationError("tail bound unreachable at the endpoint")
        table = mp_table(t, n_max, prec)
        X = _weight_cutoff(rate, 2 * n_max + 2, eps / 100)
        gram = [[mp.zero] * (n_max + 1) for _ in range(n_max + 1)]
        for n in range(n_max + 1):
            for m in range(n, n_max + 1):
                def integrand(x, n=n, m=m):
                    _, seq = polynomial_eval(table, x, max(n, m))
                    w = mp.pi * mp.exp(t * x) / (2 * mp.cosh(mp.pi * x / 2))
                    return w * seq[n] * seq[m]

                gram[n][m] = gram[m][n] = +mp.quad(integrand, [-X, 0, X])
        return gram


def mp_polynomial_hypergeometric(n: int, x, t, prec: int = 50):
    """Monic polynomial value by the terminating hypergeometric sum

        P_n(x; t) = n! i^n e^(i n t) / cos^n t
                    * 2F1(-n, 1/2 + ix/2; 1; 1 + e^(-2it)).

    The imaginary parts cancel for real x; used as an independent check of
    the recurrence evaluation."""
    with workdps(prec + GUARD_DPS):
        x = _num(x)
        t = _num(t)
        z = 1 + mp.exp(mpc(0, -2 * t))
        # terminating 2F1
        term = mpc(1)
        total = mpc(1)
        for j in range(n):
            term *= (mpf(-n + j) * (mpf(1) / 2 + mpc(0, 1) * x / 2 + j)
                     / ((1 + j) * (1 + j))) * z
            total += term
        pref = (mp.factorial(n) * mpc(0, 1) ** n * mp.exp(mpc(0, n * t))
                / mp.cos(t) ** n)
        val = pref * total
        if abs(mp.im(val)) > mpf(10) ** (-(prec - 10)) * max(1, abs(val)):
            raise PoleError(f"imaginary parts failed to cancel: {val}")
        return +mp.re(val)


# ---------------------------------------------------------------------------
# Modified Meixner (hyperbolic seed + point mass)
# ---------------------------------------------------------------------------

def meixner_modified_c0(t, w, q, prec: int = 50):
    """c_0(t) = sinh(wt+q) / (sinh q sinh wt) = coth q + coth wt."""
    with workdps(prec + GUARD_DPS):
        t, w, q = _num(t), _num(w), _num(q)
        if not (w > 0 and t > 0 and q > 0):
            raise DomainError("needs w, t, q > 0")
        return +(mp.sinh(w * t + q) / (mp.sinh(q) * mp.sinh(w * t)))


def meixner_modified_coeffs(n: int, t, w, q, prec: int = 50):
    """Hyperbolic-limit coefficients

        b_n = w(n+1) coth(w(n+1)t+q) - wn coth(wnt+q) - w(2n+1) coth(wt)
        u_n = w^2 n^2 sinh(w(n+1)t+q) sinh(w(n-1)t+q)
              / (sinh^2(wnt+q) sinh^2(wt))

    As q -> infinity these become the Meixner coefficients with
    beta = 1, c = exp(-2wt)."""
    if n < 0:
        raise DomainError("index must be nonnegative")
    with workdps(prec + GUARD_DPS):
        t, w, q = _num(t), _num(w), _num(q)
        if not (w > 0 and t > 0):
            raise DomainError("needs w, t > 0")
        args = [w * (n + 1) * t + q, w * n * t + q, w * (n - 1) * t + q, w * t]
        for a in args:
            if abs(mp.sinh(a)) < mpf("1e-25"):
                raise PoleError(f"sinh vanishes at argument {a}")
        b = (w * (n + 1) * mp.cosh(args[0]) / mp.sinh(args[0])
             - w * n * mp.cosh(args[1]) / mp.sinh(args[1])
             - w * (2 * n + 1) * mp.cosh(args[3]) / mp.sinh(args[3]))
        u = ((w * n) ** 2 * mp.sinh(args[0]) * mp.sinh(args[2])
             / (mp.sinh(args[1]) ** 2 * mp.sinh(args[3]) ** 2))
        return +b, +u


def meixner_pure_coeffs(n: int, t, w, prec: int = 50):
    """The q -> infinity limit: b_n = -2w(n+1+n e^(2wt))/(e^(2wt)-1),
    u_n = 4 w^2 n^2 e^(2wt) / (e^(2wt)-1)^2 (Meixner, beta=1, c=e^(-2wt))."""
    with workdps(prec + GUARD_DPS):
        t, w = _num(t), _num(w)
        e2 = mp.exp(2 * w * t)
        b = -2 * w * (n + 1 + n * e2) / (e2 - 1)
        u = 4 * w ** 2 * n ** 2 * e2 / (e2 - 1) ** 2
        return +b, +u


def meixner_modified_table(t, w, q, n_max: int, prec: int = 50) -> CoefficientTable:
    with workdps(prec + GUARD_DPS):
        t = _num(t)
        pairs = [meixner_modified_coeffs(n, t, w, q, prec)
                 for n in range(n_max + 1)]
    return CoefficientTable(n_max=n_max, b=[p[0] for p in pairs],
                            u=[p[1] for p in pairs], t=t,
                            provenance="closed_form")


def meixner_modified_orthogonality(n_max: int, t, w, q,
                                   lattice_eps=mpf("1e-30"),
                                   prec: int = 50):
    """Lattice Gram matrix

        sum_{s>=0} 2 e^(-2wst) P_n(-2ws) P_m(-2ws) + M P_n(0) P_m(0),
        M = e^(-q)/sinh(q)

    truncated when the tail (with polynomial growth) is below lattice_eps.
    Returns (gram, meta) where meta records the lattice prefactor 2 and the
    residual of the seed-reproduction identity 2/(1-e^(-2wt)) + M = c_0(t)
    that fixes it."""
    with workdps(prec + GUARD_DPS):
        t, w, q = _num(t), _num(w), _num(q)
        if not (w > 0 and t > 0 and q > 0):
            raise DomainError("needs w, t, q > 0")
        table = meixner_modified_table(t, w, q, n_max, prec)
        ratio = mp.exp(-2 * w * t)
        mass0 = mp.exp(-q) / mp.sinh(q)
        # truncation: term(s) = 2 e^(-2wst) (2ws)^(2 n_max) below eps
        s_cut = 1
        while True:
            term = 2 * ratio ** s_cut * max(mpf(1), 2 * w * s_cut) ** (2 * n_max)
            eff = ratio * (mpf(s_cut + 1) / s_cut) ** (2 * n_max)
            if eff < 1 and term * eff / (1 - eff) < lattice_eps:
                break
            s_cut += 1
            if s_cut > 100000:
                raise TruncationError("lattice tail bound unreachable")
        gram = [[mp.zero] * (n_max + 1) for _ in range(n_max + 1)]
        for s in range(s_cut + 1):
            x = -2 * w * s
            _, seq = polynomial_eval(table, x, n_max)
            mass = 2 * ratio ** s + (mass0 if s == 0 else mp.zero)
            for n in range(n_max + 1):
                for m in range(n, n_max + 1):
                    gram[n][m] += mass * seq[n] * seq[m]
        for n in range(n_max + 1):
            for m in range(n, n_max + 1):
                gram[m][n] = gram[n][m] = +gram[n][m]
        identity_residual = abs(2 / (1 - ratio) + mass0
                                - meixner_modified_c0(t, w, q, prec))
        meta = {"lattice_prefactor": 2,
                "point_mass": +mass0,
                "truncation": s_cut,
                "c0_identity_residual": +identity_residual}
        return gram, meta


# ---------------------------------------------------------------------------
# Krall-Laguerre (rational limit)
# ---------------------------------------------------------------------------

def krall_laguerre_c0(t, q, prec: int = 50):
    with workdps(prec + GUARD_DPS):
        t, q = _num(t), _num(q)
        if not (t > 0 and q > 0):
            raise DomainError("needs t, q > 0")
        return +(1 / t + 1 / q)


def krall_laguerre_coeffs(n: int, t, q, prec: int = 50):
    """Rational-limit coefficients

        b_n = (n+1)/((n+1)t+q) - n/(nt+q) - (2n+1)/t
        u_n = n^2/t^2 * ((n-1)t+q)((n+1)t+q) / (nt+q)^2

    (Laguerre plus a point mass 1/q at the endpoint x = 0)."""
    if n < 0:
        raise DomainError("index must be nonnegative")
    with workdps(prec + GUARD_DPS):
        t, q = _num(t), _num(q)
        if not (t > 0 and q > 0):
            raise DomainError("needs t, q > 0")
        if abs(n * t + q) < mpf("1e-25"):
            raise PoleError("nt + q vanishes")
        b = ((n + 1) / ((n + 1) * t + q) - n / (n * t + q) - (2 * n + 1) / t)
        u = (mpf(n) ** 2 / t ** 2 * ((n - 1) * t + q) * ((n + 1) * t + q)
             / (n * t + q) ** 2)
        return +b, +u


def laguerre_coeffs(n: int, t, prec: int = 50):
    """The q -> infinity base case: b_n = -(2n+1)/t, u_n = n^2/t^2."""
    with workdps(prec + GUARD_DPS):
        t = _num(t)
        return +(-mpf(2 * n + 1) / t), +(mpf(n) ** 2 / t ** 2)


def krall_laguerre_table(t, q, n_max: int, prec: int = 50) -> CoefficientTable:
    with workdps(prec + GUARD_DPS):
        t = _num(t)
        pairs = [krall_laguerre_coeffs(n, t, q, prec) for n in range(n_max + 1)]
    return CoefficientTable(n_max=n_max, b=[p[0] for p in pairs],
                            u=[p[1] for p in pairs], t=t,
                            provenance="closed_form")


def krall_laguerre_orthogonality(n_max: int, t, q, quadrature_eps,
                                 prec: int = 50):
    """Gram matrix of integral plus point mass:

        int_{-inf}^0 P_n P_m e^(xt) dx + P_n(0) P_m(0)/q."""
    with workdps(prec + GUARD_DPS):
        t, q = _num(t), _num(q)
        eps = _num(quadrature_eps)
        table = krall_laguerre_table(t, q, n_max, prec)
        X = _weight_cutoff(t, 2 * n_max + 2, eps / 100)
        size = n_max + 1
        _, seq0 = polynomial_eval(table, mpf(0), n_max)
        gram = [[mp.zero] * size for _ in range(size)]
        for n in range(size):
            for m in range(n, size):
                def integrand(x, n=n, m=m):
                    _, seq = polynomial_eval(table, x, max(n, m))
                    return mp.exp(x * t) * seq[n] * seq[m]

                val = mp.quad(integrand, [-X, 0])
                gram[n][m] = gram[m][n] = +(val + seq0[n] * seq0[m] / q)
        return gram


# ---------------------------------------------------------------------------
# Trigonometric seed and its finite positive case
# ---------------------------------------------------------------------------

def trig_c0(t, w, q, prec: int = 50):
    with workdps(prec + GUARD_DPS):
        t, w, q = _num(t), _num(w), _num(q)
        s = mp.sin(q) * mp.sin(w * t)
        if abs(s) < mpf("1e-25"):
            raise PoleError("sin vanishes in the seed")
        return +(mp.sin(w * t + q) / s)


def trig_coeffs(n: int, t, w, q, prec: int = 50):
    """General trigonometric-seed coefficients

        b_n = w(n+1) cot(w(n+1)t+q) - wn cot(wnt+q) - (2n+1)w cot(wt)
        u_n = w^2 n^2 sin((n+1)wt+q) sin((n-1)wt+q)
              / (sin^2(nwt+q) sin^2(wt))

    Sign-indefinite in general; positive up to the truncation for the
    finite family (w = 1, q = pi/2, t = pi/(2(N+2)))."""
    return trig_b(n, t, w, q, prec), trig_u(n, t, w, q, prec)


def trig_b(n: int, t, w, q, prec: int = 50):
    if n < 0:
        raise DomainError("index must be nonnegative")
    with workdps(prec + GUARD_DPS):
        t, w, q = _num(t), _num(w), _num(q)
        args = [w * (n + 1) * t + q, w * n * t + q, w * t]
        for a in args:
            if abs(mp.sin(a)) < mpf("1e-25"):
                raise PoleError(f"cot pole at argument {a}")
        return +(w * (n + 1) * mp.cos(args[0]) / mp.sin(args[0])
                 - w * n * mp.cos(args[1]) / mp.sin(args[1])
                 - w * (2 * n + 1) * mp.cos(args[2]) / mp.sin(args[2]))


def trig_u(n: int, t, w, q, prec: int = 50):
    if n < 0:
        raise DomainError("index must be nonnegative")
    with workdps(prec + GUARD_DPS):
        t, w, q = _num(t), _num(w), _num(q)
        if n == 0:
            return mp.zero
        den = mp.sin(w * n * t + q) ** 2 * mp.sin(w * t) ** 2
        if abs(den) < mpf("1e-50"):
            raise PoleError("sin vanishes in the denominator")
        return +((w * n) ** 2 * mp.sin(w * (n + 1) * t + q)
                 * mp.sin(w * (n - 1) * t + q) / den)


def trig_finite_time(N: int, prec: int = 50):
    """The truncation time tau = pi/(2(N+2)) of the finite family."""
    with workdps(prec + GUARD_DPS):
        return +(mp.pi / (2 * (N + 2)))


def trig_finite_table(N: int, prec: int = 50) -> CoefficientTable:
    """Table of the finite trigonometric family (w=1, q=pi/2) up to the
    truncation index N+1; u_{N+1} = 0 there and the diagonal coefficient
    at that index is a pole (stored as None)."""
    if N < 2:
        raise DomainError("finite family needs N >= 2")
    with workdps(prec + GUARD_DPS):
        tau = trig_finite_time(N, prec)
        q = mp.pi / 2
        b = []
        u = []
        for n in range(N + 2):
            try:
                b.append(trig_b(n, tau, 1, q, prec))
            except PoleError:
                b.append(None)
            u.append(trig_u(n, tau, 1, q, prec))
    return CoefficientTable(n_max=N + 1, b=b, u=u, t=tau,
                            provenance="closed_form")


# ---------------------------------------------------------------------------
# Hyperbolic limit of the named elliptic cases: guard only
# ---------------------------------------------------------------------------

def hyperbolic_limit_guard():
    """The k -> 1 limit of the named elliptic cases collapses: the seed
    becomes cosh t, every even-index u vanishes identically and the Hankel
    determinants are zero from n = 3 on.  No polynomials exist; callers are
    pointed at the modified-Meixner family instead."""
    raise DegenerateDeterminantError(
        3, "hyperbolic limit of the named cases is degenerate "
           "(u_{2n} = 0 for all n); use the modified Meixner family")
