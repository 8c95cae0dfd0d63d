"""Arbitrary-precision elliptic kernel.

Everything downstream consumes this module: complete elliptic integrals by
the arithmetic-geometric mean, Jacobi sn/cn/dn and the Jacobi Zeta function
through theta-series quotients, and the Weierstrass p/zeta/sigma family on
the two lines (the real axis and its translate by the imaginary half-period)
that the closed-form solutions actually need.

Conventions follow Whittaker & Watson / Akhiezer: real roots e3 < e2 < e1
with e1 + e2 + e3 = 0, real half-period omega1, purely imaginary half-period
omega3, quasi-period constants eta_k = zeta(omega_k), modulus
k^2 = (e2-e3)/(e1-e3), and nome v = exp(-pi*K/K').  All square roots are
arithmetic.  Complex root triples are unsupported.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpc, mpf, workdps

from .errors import ConfigurationError, DomainError, PoleError

# Extra working digits used inside every kernel operation.
GUARD_DPS = 10

# Arguments closer than this to a lattice point raise PoleError instead of
# returning a huge value.
POLE_TOL = mpf("1e-8")

MIN_PRECISION = 15

_MAX_THETA_TERMS = 400


def _num(x):
    """Coerce to mpf/mpc; decimal strings preserve their stated digits."""
    if isinstance(x, (mpf, mpc)):
        return x
    if isinstance(x, complex):
        return mpc(x)
    return mpf(x)


# ---------------------------------------------------------------------------
# AGM: complete integrals of the first and second kind
# ---------------------------------------------------------------------------

def _agm_K_E(k):
    """K(k) and E(k) by the AGM iteration, at the current working precision.

    E comes from the standard sum E = K * (1 - sum 2^(n-1) c_n^2) with
    c_0 = k (DLMF 19.8.6).
    """
    one = mpf(1)
    a, b, c = one, mp.sqrt(1 - k * k), k
    csum = c * c / 2
    eps = mpf(10) ** (-(mp.dps - 2))
    pow2 = mpf(1)
    while abs(c) > eps:
        a, b, c = (a + b) / 2, mp.sqrt(a * b), (a - b) / 2
        pow2 *= 2
        csum += pow2 * c * c / 2
    K = mp.pi / (2 * a)
    E = K * (1 - csum)
    return K, E


def complete_K(k, prec: int = 50):
    """Complete elliptic integral of the first kind K(k), modulus convention.

    Computed by the arithmetic-geometric mean; requires 0 < k < 1.
    """
    with workdps(prec + GUARD_DPS):
        k = _num(k)
        if not (0 < k < 1):
            raise DomainError(f"modulus k must lie in (0,1), got {k}")
        K, _ = _agm_K_E(k)
        return +K


def complete_E(k, prec: int = 50):
    """Complete elliptic integral of the second kind E(k)."""
    with workdps(prec + GUARD_DPS):
        k = _num(k)
        if not (0 < k < 1):
            raise DomainError(f"modulus k must lie in (0,1), got {k}")
        _, E = _agm_K_E(k)
        return +E


# ---------------------------------------------------------------------------
# Theta series (nome q, argument v); all support complex v in the strip
# ---------------------------------------------------------------------------

def _theta_tol():
    return mpf(10) ** (-(mp.dps + 2))


def _theta1(v, q):
    # theta1(v) = 2 q^(1/4) sum (-1)^n q^(n(n+1)) sin((2n+1)v)
    tol = _theta_tol()
    acc = mp.zero
    qpow = mpf(1)  # q^(n(n+1))
    for n in range(_MAX_THETA_TERMS):
        term = qpow * mp.sin((2 * n + 1) * v)
        acc += term if n % 2 == 0 else -term
        qpow *= q ** (2 * (n + 1))
        if abs(qpow) * mp.exp(abs(mp.im(mpc(v))) * (2 * n + 3)) < tol:
            break
    else:
        raise ConfigurationError("theta series did not converge")
    return 2 * q ** mpf("0.25") * acc


def _theta1_d1(v, q):
    tol = _theta_tol()
    acc = mp.zero
    qpow = mpf(1)
    for n in range(_MAX_THETA_TERMS):
        term = qpow * (2 * n + 1) * mp.cos((2 * n + 1) * v)
        acc += term if n % 2 == 0 else -term
        qpow *= q ** (2 * (n + 1))
        if abs(qpow) * (2 * n + 3) * mp.exp(abs(mp.im(mpc(v))) * (2 * n + 3)) < tol:
            break
    else:
        raise ConfigurationError("theta series did not converge")
    return 2 * q ** mpf("0.25") * acc


def _theta2(v, q):
    tol = _theta_tol()
    acc = mp.zero
    qpow = mpf(1)
    for n in range(_MAX_THETA_TERMS):
        acc += qpow * mp.cos((2 * n + 1) * v)
        qpow *= q ** (2 * (n + 1))
        if abs(qpow) * mp.exp(abs(mp.im(mpc(v))) * (2 * n + 3)) < tol:
            break
    else:
        raise ConfigurationError("theta series did not converge")
    return 2 * q ** mpf("0.25") * acc


def _theta3(v, q):
    tol = _theta_tol()
    acc = mpc(1) if isinstance(v, mpc) else mpf(1)
    for n in range(1, _MAX_THETA_TERMS):
        qpow = q ** (n * n)
        acc += 2 * qpow * mp.cos(2 * n * v)
        if abs(qpow) * mp.exp(abs(mp.im(mpc(v))) * (2 * n + 2)) < tol:
            break
    else:
        raise ConfigurationError("theta series did not converge")
    return acc


def _theta4(v, q):
    tol = _theta_tol()
    acc = mpc(1) if isinstance(v, mpc) else mpf(1)
    for n in range(1, _MAX_THETA_TERMS):
        qpow = q ** (n * n)
        term = 2 * qpow * mp.cos(2 * n * v)
        acc += term if n % 2 == 0 else -term
        if abs(qpow) * mp.exp(abs(mp.im(mpc(v))) * (2 * n + 2)) < tol:
            break
    else:
        raise ConfigurationError("theta series did not converge")
    return acc


def _theta4_d1(v, q):
    tol = _theta_tol()
    acc = mp.zero
    for n in range(1, _MAX_THETA_TERMS):
        qpow = q ** (n * n)
        term = 4 * n * qpow * mp.sin(2 * n * v)
        acc += term if n % 2 else -term
        if abs(qpow) * (2 * n + 2) * mp.exp(abs(mp.im(mpc(v))) * (2 * n + 2)) < tol:
            break
    else:
        raise ConfigurationError("theta series did not converge")
    return acc


def _theta1_d3_0(q):
    # third derivative of theta1 at v=0
    tol = _theta_tol()
    acc = mp.zero
    qpow = mpf(1)
    for n in range(_MAX_THETA_TERMS):
        term = qpow * (2 * n + 1) ** 3
        acc += -term if n % 2 == 0 else term
        qpow *= q ** (2 * (n + 1))
        if abs(qpow) * (2 * n + 3) ** 3 < tol:
            break
    return 2 * q ** mpf("0.25") * acc


# ---------------------------------------------------------------------------
# Elliptic context
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EllipticContext:
    """Immutable bundle of lattice data derived from the roots e1 > e2 > e3.

    omega3 and eta3 are purely imaginary; only their (positive) imaginary
    parts are stored.  big_k/big_kprime are the complete integrals K(k),
    K(k'); nome_v = exp(-pi K/K') is the decay base of the measure masses,
    nome_q = exp(-pi K'/K) the base of the theta series.
    """

    e1: mpf
    e2: mpf
    e3: mpf
    omega1: mpf
    omega3_im: mpf
    eta1: mpf
    eta3_im: mpf
    k: mpf
    kprime: mpf
    big_k: mpf
    big_kprime: mpf
    nome_v: mpf
    nome_q: mpf
    g2: mpf
    g3: mpf
    scale: mpf  # sqrt(e1 - e3)
    theta2_0: mpf
    theta3_0: mpf
    theta4_0: mpf
    theta1_d0: mpf
    prec: int

    # -- derived complex lattice constants -------------------------------
    @property
    def omega3(self) -> mpc:
        return mpc(0, self.omega3_im)

    @property
    def omega2(self) -> mpc:
        return mpc(-self.omega1, -self.omega3_im)

    @property
    def eta3(self) -> mpc:
        return mpc(0, self.eta3_im)

    @property
    def eta2(self) -> mpc:
        return mpc(-self.eta1, -self.eta3_im)

    def omega(self, j: int) -> mpc:
        return (mpc(self.omega1), self.omega2, self.omega3)[j - 1]

    def eta(self, j: int) -> mpc:
        return (mpc(self.eta1), self.eta2, self.eta3)[j - 1]

    def root(self, j: int) -> mpf:
        return (self.e1, self.e2, self.e3)[j - 1]

    # -- Jacobi functions at the context modulus -------------------------
    def sncndn(self, u):
        """(sn, cn, dn) at modulus k of the context, real u."""
        with workdps(self.prec + GUARD_DPS):
            return _sncndn_core(_num(u), self.big_k, self.nome_q,
                                self.theta2_0, self.theta3_0, self.theta4_0)

    def jzeta(self, u):
        """Jacobi Zeta Z(u, k) at the context modulus, real u."""
        with workdps(self.prec + GUARD_DPS):
            return _jzeta_core(_num(u), self.big_k, self.nome_q)

    def jzeta_complex(self, u):
        """Z(u, k) for complex u inside the convergence strip."""
        with workdps(self.prec + GUARD_DPS):
            u = _num(u)
            z = mp.pi * u / (2 * self.big_k)
            return mp.pi / (2 * self.big_k) * _theta4_d1(z, self.nome_q) \
                / _theta4(z, self.nome_q)


def build_context(e1, e2, precision_digits: int = 50) -> EllipticContext:
    """Assemble an EllipticContext from the two largest roots.

    e3 = -e1-e2 is derived; the triple must satisfy e3 < e2 < e1.  All
    lattice constants are computed at precision_digits plus a guard:
    K, K' by the AGM, eta1 from E via
    eta1 = sqrt(e1-e3) * (E - (2-k^2) K / 3), eta3 from the Legendre
    relation eta1*omega3 - eta3*omega1 = i pi/2.
    """
    if precision_digits < MIN_PRECISION:
        raise ConfigurationError(
            f"precision_digits must be >= {MIN_PRECISION}, got {precision_digits}")
    with workdps(precision_digits + GUARD_DPS):
        e1 = _num(e1)
        e2 = _num(e2)
        e3 = -(e1 + e2)
        if not (e3 < e2 < e1):
            raise DomainError(
                f"roots must satisfy e3 < e2 < e1, got ({e1}, {e2}, {e3})")
        scale = mp.sqrt(e1 - e3)
        ksq = (e2 - e3) / (e1 - e3)
        k = mp.sqrt(ksq)
        kprime = mp.sqrt(1 - ksq)
        K, E = _agm_K_E(k)
        Kp, _ = _agm_K_E(kprime)
        omega1 = K / scale
        omega3_im = Kp / scale
        eta1 = scale * (E - (2 - ksq) * K / 3)
        eta3_im = (eta1 * omega3_im - mp.pi / 2) / omega1
        nome_v = mp.exp(-mp.pi * K / Kp)
        nome_q = mp.exp(-mp.pi * Kp / K)
        g2 = -4 * (e1 * e2 + e2 * e3 + e3 * e1)
        g3 = 4 * e1 * e2 * e3
        t2 = _theta2(mp.zero, nome_q)
        t3 = _theta3(mp.zero, nome_q)
        t4 = _theta4(mp.zero, nome_q)
        t1d = _theta1_d1(mp.zero, nome_q)
        return EllipticContext(
            e1=+e1, e2=+e2, e3=+e3, omega1=+omega1, omega3_im=+omega3_im,
            eta1=+eta1, eta3_im=+eta3_im, k=+k, kprime=+kprime, big_k=+K,
            big_kprime=+Kp, nome_v=+nome_v, nome_q=+nome_q, g2=+g2, g3=+g3,
            scale=+scale, theta2_0=+t2, theta3_0=+t3, theta4_0=+t4,
            theta1_d0=+t1d, prec=precision_digits)


def context_from_modulus(ksq, precision_digits: int = 50) -> EllipticContext:
    """Context with e1 - e3 normalized to 1 for a given squared modulus.

    Solves e2 - e3 = k^2, e1 - e3 = 1, e1 + e2 + e3 = 0, which gives
    e1 = (2-k^2)/3, e2 = (2k^2-1)/3, e3 = -(1+k^2)/3.
    """
    with workdps(precision_digits + GUARD_DPS):
        ksq = _num(ksq)
        if not (0 < ksq < 1):
            raise DomainError(f"k^2 must lie in (0,1), got {ksq}")
        e1 = (2 - ksq) / 3
        e2 = (2 * ksq - 1) / 3
        return build_context(e1, e2, precision_digits)


# ---------------------------------------------------------------------------
# Jacobi elliptic functions and the Jacobi Zeta function
# ---------------------------------------------------------------------------

def _sncndn_core(u, K, q, t2, t3, t4):
    # argument reduced modulo the full period 4K before the series
    u = u - 4 * K * mp.floor(u / (4 * K))
    z = mp.pi * u / (2 * K)
    th4 = _theta4(z, q)
    sn = (t3 / t2) * _theta1(z, q) / th4
    cn = (t4 / t2) * _theta2(z, q) / th4
    dn = (t4 / t3) * _theta3(z, q) / th4
    return sn, cn, dn


def _jzeta_core(u, K, q):
    u = u - 2 * K * mp.floor(u / (2 * K))
    z = mp.pi * u / (2 * K)
    return mp.pi / (2 * K) * _theta4_d1(z, q) / _theta4(z, q)


def jacobi_sncndn(u, k, prec: int = 50):
    """The triple (sn, cn, dn)(u, k) for real u and modulus 0 < k < 1."""
    with workdps(prec + GUARD_DPS):
        k = _num(k)
        if not (0 < k < 1):
            raise DomainError(f"modulus k must lie in (0,1), got {k}")
        u = _num(u)
        K, _ = _agm_K_E(k)
        q = mp.exp(-mp.pi * _agm_K_E(mp.sqrt(1 - k * k))[0] / K)
        t2 = _theta2(mp.zero, q)
        t3 = _theta3(mp.zero, q)
        t4 = _theta4(mp.zero, q)
        sn, cn, dn = _sncndn_core(u, K, q, t2, t3, t4)
        return +sn, +cn, +dn


def jacobi_zeta(u, k, prec: int = 50):
    """Jacobi Zeta Z(u,k) = E(u) - u E/K; periodic with period 2K."""
    with workdps(prec + GUARD_DPS):
        k = _num(k)
        if not (0 < k < 1):
            raise DomainError(f"modulus k must lie in (0,1), got {k}")
        u = _num(u)
        K, _ = _agm_K_E(k)
        q = mp.exp(-mp.pi * _agm_K_E(mp.sqrt(1 - k * k))[0] / K)
        return +_jzeta_core(u, K, q)


# ---------------------------------------------------------------------------
# Weierstrass functions on the supported lines
# ---------------------------------------------------------------------------

def _check_pole(x_reduced, ctx, what):
    if abs(x_reduced) < POLE_TOL:
        raise PoleError(
            f"{what}: argument within {POLE_TOL} of a lattice point "
            f"(offset {mp.nstr(x_reduced, 5)})")


def _reduce_real(x, ctx):
    """Reduce real x modulo 2*omega1 into [-omega1, omega1)."""
    period = 2 * ctx.omega1
    return x - period * mp.floor(x / period + mpf("0.5"))


def _split_line(z, ctx):
    """Classify z as (x, s) with z congruent to x + s*omega3, s in {0, 1}.

    Supported lines: the real axis and the translates by +-omega3 (mod the
    imaginary period both give the same function values used here).
    """
    z = _num(z)
    if isinstance(z, mpf):
        return z, 0
    y = mp.im(z)
    x = mp.re(z)
    period = 2 * ctx.omega3_im
    y_red = y - period * mp.floor(y / period + mpf("0.5"))
    if abs(y_red) < POLE_TOL:
        return x, 0
    if abs(abs(y_red) - ctx.omega3_im) < POLE_TOL:
        return x, 1
    raise DomainError(
        "complex argument must lie on the real axis or on a line shifted "
        f"by the imaginary half-period; got imaginary part {mp.nstr(y, 8)}")


def weierstrass_p(z, ctx: EllipticContext):
    """Weierstrass p-function; z real or on the omega3-shifted line.

    Real z uses p(z) = e3 + (e1-e3)/sn^2(z*sqrt(e1-e3)); the shifted line
    uses the half-period identity, which keeps the value real.
    """
    with workdps(ctx.prec + GUARD_DPS):
        x, s = _split_line(z, ctx)
        if s == 0:
            return +_wp_real(x, ctx)
        return +weierstrass_p_shifted(x, 3, ctx)


def _wp_real(x, ctx):
    x_red = _reduce_real(x, ctx)
    _check_pole(x_red, ctx, "weierstrass_p")
    sn, _, _ = _sncndn_core(x_red * ctx.scale, ctx.big_k, ctx.nome_q,
                            ctx.theta2_0, ctx.theta3_0, ctx.theta4_0)
    return ctx.e3 + (ctx.e1 - ctx.e3) / (sn * sn)


def weierstrass_p_shifted(x, j: int, ctx: EllipticContext):
    """p(x + omega_j) for real x; real-valued for j = 1, 2, 3.

    Jacobi forms of the half-period addition identities:
      p(x+omega1) = e1 + (e1-e3) k'^2 sn^2/cn^2
      p(x+omega2) = e2 - (e1-e3) k^2 k'^2 sn^2/dn^2
      p(x+omega3) = e3 + (e1-e3) k^2 sn^2
    """
    with workdps(ctx.prec + GUARD_DPS):
        x = _num(x)
        sn, cn, dn = _sncndn_core(x * ctx.scale, ctx.big_k, ctx.nome_q,
                                  ctx.theta2_0, ctx.theta3_0, ctx.theta4_0)
        ee = ctx.e1 - ctx.e3
        k2 = ctx.k ** 2
        kp2 = ctx.kprime ** 2
        if j == 1:
            if abs(cn) < POLE_TOL:
                raise PoleError("weierstrass_p_shifted: cn vanishes")
            return +(ctx.e1 + ee * kp2 * sn ** 2 / cn ** 2)
        if j == 2:
            return +(ctx.e2 - ee * k2 * kp2 * sn ** 2 / dn ** 2)
        if j == 3:
            return +(ctx.e3 + ee * k2 * sn ** 2)
        raise DomainError(f"half-period index must be 1, 2 or 3, got {j}")


def weierstrass_p_prime(x, ctx: EllipticContext):
    """dp/dz at real x: -2 (e1-e3)^(3/2) cn dn / sn^3."""
    with workdps(ctx.prec + GUARD_DPS):
        x_red = _reduce_real(_num(x), ctx)
        _check_pole(x_red, ctx, "weierstrass_p_prime")
        sn, cn, dn = _sncndn_core(x_red * ctx.scale, ctx.big_k, ctx.nome_q,
                                  ctx.theta2_0, ctx.theta3_0, ctx.theta4_0)
        return +(-2 * ctx.scale ** 3 * cn * dn / sn ** 3)


def weierstrass_zeta(z, ctx: EllipticContext):
    """Weierstrass zeta; z real (returns mpf) or omega3-shifted (mpc).

    Real z goes through the Jacobi Zeta bridge
      zeta(z) = z*eta1/omega1 + sqrt(e1-e3) (Z(u) + cn dn / sn),
    so every intermediate stays real.
    """
    with workdps(ctx.prec + GUARD_DPS):
        x, s = _split_line(z, ctx)
        if s == 0:
            return +_wzeta_real(x, ctx)
        shifted = weierstrass_zeta_shifted(x, 3, ctx)
        if mp.im(_num(z)) < 0:
            shifted -= 2 * ctx.eta3
        return +shifted


def _wzeta_real(x, ctx):
    x_red = _reduce_real(x, ctx)
    _check_pole(x_red, ctx, "weierstrass_zeta")
    n_shift = mp.floor(x / (2 * ctx.omega1) + mpf("0.5"))
    u = x_red * ctx.scale
    sn, cn, dn = _sncndn_core(u, ctx.big_k, ctx.nome_q,
                              ctx.theta2_0, ctx.theta3_0, ctx.theta4_0)
    Z = _jzeta_core(u, ctx.big_k, ctx.nome_q)
    return (x_red * ctx.eta1 / ctx.omega1 + ctx.scale * (Z + cn * dn / sn)
            + 2 * n_shift * ctx.eta1)


def weierstrass_zeta_shifted(x, j: int, ctx: EllipticContext):
    """zeta(x + omega_j) for real x, via the Jacobi Zeta bridge.

    Real output for j=1; for j=2,3 the constant eta_j carries the imaginary
    part:
      zeta(x+omega1) = eta1 + x eta1/omega1 + s (Z(u) - sn dn / cn)
      zeta(x+omega2) = eta2 + x eta1/omega1 + s (Z(u) - k^2 sn cn / dn)
      zeta(x+omega3) = eta3 + x eta1/omega1 + s Z(u)
    with s = sqrt(e1-e3), u = s x.
    """
    with workdps(ctx.prec + GUARD_DPS):
        x = _num(x)
        u = x * ctx.scale
        sn, cn, dn = _sncndn_core(u, ctx.big_k, ctx.nome_q,
                                  ctx.theta2_0, ctx.theta3_0, ctx.theta4_0)
        Z = _jzeta_core(u, ctx.big_k, ctx.nome_q)
        lin = x * ctx.eta1 / ctx.omega1
        if j == 1:
            if abs(cn) < POLE_TOL:
                raise PoleError("weierstrass_zeta_shifted: cn vanishes")
            return +(ctx.eta1 + lin + ctx.scale * (Z - sn * dn / cn))
        if j == 2:
            return +(ctx.eta2 + lin
                     + ctx.scale * (Z - ctx.k ** 2 * sn * cn / dn))
        if j == 3:
            return +(ctx.eta3 + lin + ctx.scale * Z)
        raise DomainError(f"half-period index must be 1, 2 or 3, got {j}")


def weierstrass_sigma(z, ctx: EllipticContext):
    """Weierstrass sigma via the first theta function:

      sigma(z) = (2 omega1/pi) exp(eta1 z^2/(2 omega1))
                 theta1(pi z/(2 omega1); q) / theta1'(0; q)

    valid for any z in the horizontal strip |Im z| <= Im omega3 (the series
    converges there in a handful of terms for the canonical nome).
    """
    with workdps(ctx.prec + GUARD_DPS):
        z = _num(z)
        v = mp.pi * z / (2 * ctx.omega1)
        pref = (2 * ctx.omega1 / mp.pi) * mp.exp(
            ctx.eta1 * z * z / (2 * ctx.omega1))
        val = pref * _theta1(v, ctx.nome_q) / ctx.theta1_d0
        return +val


def weierstrass_sigma_co(z, alpha: int, ctx: EllipticContext):
    """Co-sigma functions sigma_alpha(z) = exp(eta1 z^2/(2 omega1))
    theta_{alpha+1}(pi z/(2 omega1)) / theta_{alpha+1}(0)."""
    with workdps(ctx.prec + GUARD_DPS):
        z = _num(z)
        v = mp.pi * z / (2 * ctx.omega1)
        pref = mp.exp(ctx.eta1 * z * z / (2 * ctx.omega1))
        if alpha == 1:
            return +(pref * _theta2(v, ctx.nome_q) / ctx.theta2_0)
        if alpha == 2:
            return +(pref * _theta3(v, ctx.nome_q) / ctx.theta3_0)
        if alpha == 3:
            return +(pref * _theta4(v, ctx.nome_q) / ctx.theta4_0)
        raise DomainError(f"co-sigma index must be 1, 2 or 3, got {alpha}")


def eta1_theta_route(ctx: EllipticContext):
    """Independent eta1 evaluation from theta derivatives at the origin:
    eta1 = -pi^2 theta1'''(0) / (12 omega1 theta1'(0)).  Used as a
    cross-check of the AGM/E route."""
    with workdps(ctx.prec + GUARD_DPS):
        return +(-mp.pi ** 2 * _theta1_d3_0(ctx.nome_q)
                 / (12 * ctx.omega1 * ctx.theta1_d0))
