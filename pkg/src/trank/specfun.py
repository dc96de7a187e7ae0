"""Special functions for the main-term assembly.

Four groups live here:

* exact rational data: Bernoulli numbers/polynomial values at 1/2 and the
  two expansion-coefficient families kappa(a, b, c), kappaH(a, b, c) whose
  rational parts and powers of pi are kept separate until the final float
  assembly;
* modified Bessel functions of half-integer order on the positive axis
  (closed forms, a Miller-style downward recurrence, and an independent
  power-series oracle);
* the Gaussian error integral E(x) = 2 int_0^x e^(-pi u^2) du;
* quadratures: the Mordell integral H, the cosh-Gaussian line integral
  script_h over the real axis, and the Bessel-weighted integral over
  [-1, 1] that multiplies the partial Kloosterman sums.

All quadratures are deterministic for fixed inputs and tolerance.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError

_MAX_BESSEL_ORDER = Fraction(51, 2)


# ---------------------------------------------------------------------------
# Exact rational coefficients
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_number(j: int) -> Fraction:
    """B_j with the B_1 = -1/2 convention, by the defining recurrence."""
    if j < 0:
        raise ValueError("Bernoulli index must be >= 0")
    if j == 0:
        return Fraction(1)
    acc = Fraction(0)
    for i in range(j):
        acc += Fraction(math.comb(j + 1, i)) * bernoulli_number(i)
    return -acc / (j + 1)


def bernoulli_half(j: int) -> Fraction:
    """B_j(1/2) = (2^(1-j) - 1) B_j, exactly."""
    if j < 0:
        raise ValueError("Bernoulli index must be >= 0")
    return (Fraction(2) ** (1 - j) - 1) * bernoulli_number(j)


class PiRational(NamedTuple):
    """An exact rational times an integer power of pi."""

    rational: Fraction
    pi_exponent: int

    def to_float(self) -> float:
        return float(self.rational) * math.pi**self.pi_exponent

    @property
    def is_zero(self) -> bool:
        return self.rational == 0


def kappa(a: int, b: int, c: int) -> PiRational:
    """First coefficient family; zero outside nonnegative integer support.

    The value is rational * pi^(-a) with
    rational = (2(a+b+c))! / (a! (2b+1)! (2c)!) * (-1)^(a+c) / 2^(2(a+b))
               * B_{2c}(1/2).
    """
    if a < 0 or b < 0 or c < 0:
        return PiRational(Fraction(0), 0)
    rat = (
        Fraction(factorial(2 * (a + b + c)), factorial(a) * factorial(2 * b + 1) * factorial(2 * c))
        * Fraction((-1) ** (a + c), 2 ** (2 * (a + b)))
        * bernoulli_half(2 * c)
    )
    return PiRational(rat, -a)


def kappa_h(a: int, b: int, c: int) -> PiRational:
    """Second coefficient family (the Mordell-part weights); pi^(-a) kept
    separate as for `kappa`."""
    if a < 0 or b < 0 or c < 0:
        return PiRational(Fraction(0), 0)
    rat = Fraction(
        factorial(2 * a + (2 * b + 1) + c), factorial(a) * factorial(2 * b + 1) * factorial(c)
    ) * Fraction((-1) ** (a + c + 1), 2 ** (2 * a + 2 * b + 1))
    return PiRational(rat, -a)


def kappa_support(r: int) -> list[tuple[int, int, int]]:
    """All (a, b, c) in N_0^3 with 2a + 2b + 2c = r (empty for odd r)."""
    if r % 2:
        return []
    half = r // 2
    return [(a, b, half - a - b) for a in range(half + 1) for b in range(half - a + 1)]

def kappa_h_support(r: int) -> list[tuple[int, int, int]]:
    """All (a, b, c) in N_0^3 with 2a + (2b + 1) + c = r."""
    out = []
    for a in range(r // 2 + 1):
        for b in range((r - 2 * a - 1) // 2 + 1):
            c = r - 2 * a - (2 * b + 1)
            if c >= 0:
                out.append((a, b, c))
    return out


@dataclass(frozen=True)
class ExpansionCoefficients:
    """One family's coefficient table for fixed total order r."""

    family: str  # "kappa" or "kappa_h"
    r: int
    entries: dict

    @classmethod
    def build(cls, family: str, r: int) -> "ExpansionCoefficients":
        if family == "kappa":
            support, fn = kappa_support(r), kappa
        elif family == "kappa_h":
            support, fn = kappa_h_support(r), kappa_h
        else:
            raise ValueError(f"unknown family {family!r}")
        return cls(family=family, r=r, entries={abc: fn(*abc) for abc in support})

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["a", "b", "c", "num", "den", "pi_exp"])
            for (a, b, c), v in sorted(self.entries.items()):
                w.writerow([a, b, c, v.rational.numerator, v.rational.denominator,
                            v.pi_exponent])


# ---------------------------------------------------------------------------
# Modified Bessel functions of half-integer order
# ---------------------------------------------------------------------------

def _as_half_integer(order) -> int:
    two = 2 * float(order)
    rounded = round(two)
    if abs(two - rounded) > 1e-12 or rounded % 2 == 0:
        raise ValueError(f"order {order} is not a half-integer")
    return int(rounded)


def bessel_i_series(order, x):
    """Power-series oracle sum_m (x/2)^(2m+nu) / (m! Gamma(m+nu+1)).

    Kept independent of the closed-form/recurrence path so the two can be
    compared; terms are generated by ratio recursion to avoid overflow.
    """
    two_nu = _as_half_integer(order)
    nu = two_nu / 2.0
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0):
        raise ValueError("x must be positive")
    half = xs / 2.0
    term = half**nu / math.gamma(nu + 1.0)
    acc = term.copy() if isinstance(term, np.ndarray) else term
    quarter = half * half
    for m in range(1, 600):
        term = term * quarter / (m * (m + nu))
        acc = acc + term
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(acc), 1e-300)):
            break
    else:
        raise ConvergenceError("Bessel power series did not converge")
    return acc if isinstance(x, np.ndarray) else float(acc)


def _sqrt_prefactor(x):
    return np.sqrt(2.0 / (np.pi * x))


def _bessel_closed(two_nu: int, x):
    pre = _sqrt_prefactor(x)
    sh, ch = np.sinh(x), np.cosh(x)
    if two_nu == 1:
        return pre * sh
    if two_nu == -1:
        return pre * ch
    if two_nu == 3:
        return pre * (ch - sh / x)
    if two_nu == -3:
        return pre * (sh - ch / x)
    if two_nu == 5:
        return pre * ((3.0 / (x * x) + 1.0) * sh - 3.0 * ch / x)
    if two_nu == -5:
        return pre * ((3.0 / (x * x) + 1.0) * ch - 3.0 * sh / x)
    raise ValueError(f"no closed form wired for order {two_nu}/2")


def _bessel_miller(n: int, x, extra: int):
    """I_{n+1/2}(x) by downward recurrence normalized at I_{1/2}."""
    top = n + extra
    fp = np.zeros_like(x)
    fc = np.full_like(x, 1e-280)
    target = None
    for m in range(top, 0, -1):
        # step from order m+1/2 to m-1/2
        fm = fp + ((2 * m + 1) / x) * fc
        fp, fc = fc, fm
        if m - 1 == n:
            target = fc
        big = np.abs(fc) > 1e260
        if np.any(big):
            scale = np.where(big, 1e-260, 1.0)
            fp = fp * scale
            fc = fc * scale
            if target is not None:
                target = target * scale
    return target * _bessel_closed(1, x) / fc


def _bessel_k_half(n: int, x):
    """K_{n+1/2}(x) from its terminating sum; every term is positive."""
    acc = np.zeros_like(x)
    for j in range(n, -1, -1):
        coef = factorial(n + j) // (factorial(j) * factorial(n - j))
        acc = acc / (2.0 * x) + coef
    return np.sqrt(np.pi / (2.0 * x)) * np.exp(-x) * acc


def _bessel_positive(n: int, x):
    """I_{n+1/2}(x) by Miller's recurrence with start-depth doubling.

    The start order must clear both the target order and x itself: the
    wanted (minimal) solution only starts dominating the recurrence once
    the order exceeds the argument.
    """
    base = 24 + int(1.2 * float(np.max(x)))
    prev = None
    for extra in (base, base + 40, base + 120):
        out = _bessel_miller(n, x, extra)
        if prev is not None and np.all(
            np.abs(out - prev) <= 1e-13 * np.maximum(np.abs(out), 1e-300)
        ):
            return out
        prev = out
    raise ConvergenceError("Miller recurrence failed to stabilize")


def _bessel_negative(n: int, x):
    """I_{-(n+1/2)}(x) via the K-connection
    I_{-nu} = I_nu + (2/pi) sin(pi nu) K_nu, which for half-integer order
    is an exact two-term split with no cancellation away from the zeros of
    the left side (a raw order-decreasing recurrence loses several digits
    in the band |order| ~ x)."""
    return _bessel_positive(n, x) + (2.0 / np.pi) * (-1) ** n * _bessel_k_half(n, x)


def bessel_i(order, x):
    """I_order(x) for half-integer order and x > 0.

    Closed sinh/cosh forms cover |order| <= 5/2 (switching to the power
    series below x = |order| where the closed forms lose digits to
    cancellation); larger positive orders use a normalized downward Miller
    recurrence, larger negative orders the K-connection split.  Relative
    accuracy 1e-10 for |order| <= 31/2 and x in [1e-3, 200], away from the
    zeros of the negative-order functions.
    """
    two_nu = _as_half_integer(order)
    if abs(Fraction(two_nu, 2)) > _MAX_BESSEL_ORDER:
        raise ValueError(f"order {two_nu}/2 outside supported band")
    scalar = np.isscalar(x) or getattr(x, "ndim", 0) == 0
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0):
        raise ValueError("x must be positive")
    if abs(two_nu) <= 5:
        small = xs < abs(two_nu) / 2.0
        if np.all(small):
            out = bessel_i_series(order, xs)
        elif not np.any(small):
            out = _bessel_closed(two_nu, xs)
        else:
            out = np.where(small, bessel_i_series(order, np.where(small, xs, 1.0)),
                           _bessel_closed(two_nu, np.where(small, 1.0, xs)))
    elif two_nu > 0:
        out = _bessel_positive((two_nu - 1) // 2, xs)
    else:
        out = _bessel_negative((-two_nu - 1) // 2, xs)
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# Gaussian error integral
# ---------------------------------------------------------------------------

def gauss_error(x: float) -> float:
    """E(x) = 2 int_0^x e^(-pi u^2) du = erf(sqrt(pi) x)."""
    return math.erf(math.sqrt(math.pi) * x)


# ---------------------------------------------------------------------------
# Quadratures
# ---------------------------------------------------------------------------

def _trapezoid_real_line(f, decay: float, growth: float, freq: float,
                         strip: float, tol: float, extra_log: float = 0.0):
    """Truncated trapezoid of f over R.

    `decay` is the Gaussian rate s in e^(-s x^2), `growth` a linear rate
    bounding |f|'s non-Gaussian part, `freq` the largest local oscillation
    frequency scale, `strip` the analyticity strip half-width.  The
    truncation point puts the envelope below e^(-50) relative to its peak;
    the step obeys both the strip bound and the oscillation rate, then is
    halved until two successive refinements agree to `tol` (or to the
    roundoff floor of the node sums, whichever is larger: a cancelling
    integrand cannot do better in fixed precision).
    """
    if decay <= 0:
        raise ValueError("integrand lacks Gaussian decay on the real axis")
    peak = growth * growth / (4.0 * decay)
    if peak > 600.0:
        raise ValueError("integrand peak exceeds double-precision range")
    budget = 50.0 + extra_log
    cut = (growth + math.sqrt(growth * growth + 4.0 * decay * budget)) / (2.0 * decay)
    step = min(0.1, 0.9 * strip / 4.5, 1.0 / (6.0 * (1.0 + freq * cut)))
    prev = None
    for _ in range(10):
        m = int(math.ceil(cut / step))
        if m > 2_000_000:
            raise ConvergenceError("trapezoid needs too many nodes")
        val = 0j
        magnitude = 0.0
        for start in range(-m, m + 1, 262_144):
            xs = np.arange(start, min(start + 262_144, m + 1), dtype=float) * step
            vals = f(xs)
            val += step * complex(np.sum(vals))
            magnitude += step * float(np.sum(np.abs(vals)))
        floor = 5e-15 * magnitude
        if prev is not None and abs(val - prev) <= max(tol * max(1.0, abs(val)), floor):
            return complex(val)
        prev = val
        step /= 2.0
    raise ConvergenceError("trapezoid refinement did not converge")


def mordell_h(w: complex, z: complex, tol: float = 1e-10) -> complex:
    """Mordell integral H(w; z) = int_R e^(-pi i x^2 z - 2 pi w x) / cosh(pi x) dx.

    The Gaussian factor decays only when Im z < 0; the transformation-law
    call sites all arrive in that half-plane (as -i times a right-half-plane
    quantity).  Tolerance is absolute, relative once |H| exceeds 1.
    """
    w = complex(w)
    z = complex(z)
    decay = math.pi * (-z.imag)
    if decay <= 0:
        raise ValueError("mordell_h needs Im z < 0 for a decaying integrand")

    def f(x):
        return np.exp(-1j * math.pi * x * x * z - 2.0 * math.pi * w * x) / np.cosh(
            math.pi * x
        )

    growth = 2.0 * math.pi * abs(w.real) + math.pi  # cosh can only help
    freq = math.pi * abs(z) * 2.0 + 2.0 * math.pi * abs(w.imag)
    return _trapezoid_real_line(f, decay, growth, freq, strip=0.5, tol=tol)


def script_h(c: int, T: int, alpha, gamma: int, varrho, k: int, z: complex,
             tol: float = 1e-10) -> complex:
    """int_R x^c e^(-pi T x^2/(gamma^2 k z) + 2 pi alpha x)
    / cosh(pi (x + i rho)) dx.

    Needs Re(1/z) > 0 for decay and |rho| < 1/2 to keep the cosh zero-free
    on the contour.  The polynomial factor is x^c, not (x + i rho)^c: the
    contour shift that produces this integral moves the rho-offset out of
    the power and into the cosh alone, which a direct Taylor-coefficient
    comparison of the expanded Mordell integral confirms numerically (the
    shifted power fails it at every order with c > 0).
    """
    alpha = float(alpha)
    rho = float(varrho)
    z = complex(z)
    if c < 0:
        raise ValueError("c must be a nonnegative integer")
    if abs(rho) >= 0.5:
        raise ValueError("|varrho| must be < 1/2 (pole on the contour)")
    inv_z = 1.0 / z
    if inv_z.real <= 0:
        raise ValueError("script_h needs Re(1/z) > 0")
    rate = math.pi * T / (gamma * gamma * k)
    decay = rate * inv_z.real
    freq = rate * abs(inv_z.imag) * 2.0 + math.pi

    def f(x):
        xi = x + 1j * rho
        return x**c * np.exp(-rate * inv_z * x * x + 2.0 * math.pi * alpha * x) / np.cosh(
            math.pi * xi
        )

    growth = 2.0 * math.pi * abs(alpha) + math.pi
    extra = c * math.log(2.0 + abs(alpha) / max(decay, 1e-12) + 1.0 / max(decay, 1e-12))
    return _trapezoid_real_line(f, decay, growth, freq, strip=0.5 - abs(rho),
                                tol=tol, extra_log=extra)


@dataclass(frozen=True)
class IntegralParams:
    """Parameters of the Bessel-weighted [-1, 1] integral.

    The usual conditions: beta > 0, |varrho| < 1/2, d a half-integer with
    d + 1/2 <= 0, and 2n + delta > 0.
    """

    T: int
    alpha: Fraction
    beta: Fraction
    delta: Fraction
    varrho: Fraction
    c: int
    d: Fraction
    k: int
    n: int

    def __post_init__(self):
        if self.T < 1 or self.T % 2 == 0:
            raise ValueError("T must be odd and positive")
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        if abs(self.varrho) >= Fraction(1, 2):
            raise ValueError("|varrho| must be < 1/2")
        if (2 * self.d) % 1 != 0 or (2 * self.d) % 2 == 0:
            raise ValueError("d must be a half-integer")
        if self.d + Fraction(1, 2) > 0:
            raise ValueError("d + 1/2 must be <= 0")
        if 2 * self.n + self.delta <= 0:
            raise ValueError("2n + delta must be positive")

    @property
    def gamma_co(self) -> int:
        return self.T // gcd(self.T, self.k)

    @property
    def lam(self) -> float:
        return math.sqrt(float(self.beta) / self.T) * self.gamma_co

    @property
    def bessel_order(self) -> Fraction:
        return -self.d - 1


def bessel_integral(params: IntegralParams, tol: float = 1e-9) -> complex:
    """The [-1, 1] integral of the asymptotic formula's Mordell part.

    Gauss-Legendre panels with panel-count doubling; the integrand extends
    analytically across x = +-1 (the endpoint power (1-x^2)^((d+1)/2)
    cancels against the small-argument power of the Bessel factor), so no
    endpoint weighting is needed and interior nodes suffice.  The
    polynomial factor is (lam x)^c, inherited from `script_h`.

    The doubling test is relative; when the integrand cancels to
    essentially zero (odd symmetry), agreement at the roundoff floor of
    the node-sum magnitude counts as converged.
    """
    lam = params.lam
    rho = float(params.varrho)
    c = params.c
    half_exp = float(params.d + 1) / 2.0
    order = params.bessel_order
    arg_scale = 2.0 * math.pi * math.sqrt(float(params.beta) * float(2 * params.n + params.delta)) / params.k
    if arg_scale > 700.0:
        raise ValueError("Bessel argument overflows double range")
    alpha = float(params.alpha)

    def integrand(x):
        one_minus = 1.0 - x * x
        y = arg_scale * np.sqrt(one_minus)
        base = (lam * x) ** c if c else 1.0
        return (
            base
            * np.exp(2.0 * math.pi * lam * alpha * x)
            * one_minus**half_exp
            * bessel_i(order, y)
            / np.cosh(math.pi * (lam * x + 1j * rho))
        )

    nodes, weights = np.polynomial.legendre.leggauss(24)
    prev = None
    panels = 2
    for _ in range(9):
        total = 0j
        magnitude = 0.0
        edges = np.linspace(-1.0, 1.0, panels + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            mid, rad = (a + b) / 2.0, (b - a) / 2.0
            vals = weights * integrand(mid + rad * nodes)
            total += rad * np.sum(vals)
            magnitude += rad * float(np.sum(np.abs(vals)))
        floor = 1e-14 * magnitude
        if prev is not None and abs(total - prev) <= max(tol * abs(total), floor):
            return complex(total)
        prev = total
        panels *= 2
    raise ConvergenceError("panel doubling did not converge for bessel_integral")


def taylor_identity_check(family: str, nu: complex, z: complex, lam: complex,
                          r_max: int) -> float:
    """Numerically confirm that kappa/kappa_h are the Taylor coefficients of
    their generating functions.

    The left side's u-Taylor coefficients are extracted by a Cauchy integral
    on a small circle (uniform samples, discrete Fourier inversion) and
    compared with the assembled coefficient sums; returns the max relative
    error over r <= r_max.

    In the kappa_h family the Gaussian parameter nu pairs with the index a
    (the same index that carries pi^(-a) and part of the z-power), as a
    direct expansion of sin exp exp shows; pairing it with b reproduces the
    coefficients only through r = 2 and fails from r = 3 on.
    """
    if family == "kappa":
        def f(u):
            ratio = np.where(u == 0, complex(z), np.sin(np.pi * u) / np.sinh(np.pi * u / z))
            return np.exp(np.pi * nu * u * u / z) * ratio

        def model(r):
            return sum(
                kappa(a, b, c).to_float() * nu**a * z ** (1 - a - 2 * c)
                for (a, b, c) in kappa_support(r)
            )

        radius = min(0.45, 0.5 * abs(z))
    elif family == "kappa_h":
        def f(u):
            return np.sin(np.pi * u) * np.exp(np.pi * nu * u * u / z) * np.exp(
                -2j * np.pi * lam * u / z
            )

        def model(r):
            return 1j * sum(
                kappa_h(a, b, c).to_float() * z ** (-a - c) * nu**a * lam**c
                for (a, b, c) in kappa_h_support(r)
            )

        radius = 0.75
    else:
        raise ValueError(f"unknown family {family!r}")

    coeffs = _cauchy_taylor(f, radius, r_max)
    lhs = [coeffs[r] * factorial(r) / (2j * math.pi) ** r for r in range(r_max + 1)]
    rhs = [model(r) for r in range(r_max + 1)]
    scale = max(abs(v) for v in rhs)
    worst = 0.0
    for lv, rv in zip(lhs, rhs):
        # structurally-zero coefficients are held to an absolute floor
        worst = max(worst, abs(lv - rv) / (abs(rv) if rv else 1e-3 * scale))
    return worst


def _cauchy_taylor(f, radius: float, r_max: int, samples: int = 256) -> list[complex]:
    """Taylor coefficients of f at 0 through a sampled circle integral,
    with sample doubling as a convergence check."""
    prev = None
    n = max(samples, 8 * (r_max + 1))
    for _ in range(4):
        js = np.arange(n)
        pts = radius * np.exp(2j * np.pi * js / n)
        vals = f(pts)
        coeffs = [
            complex(np.sum(vals * np.exp(-2j * np.pi * js * r / n)) / (n * radius**r))
            for r in range(r_max + 1)
        ]
        if prev is not None:
            scale = max(max(abs(c) for c in coeffs), 1e-300)
            if all(abs(a - b) <= 1e-11 * scale for a, b in zip(coeffs, prev)):
                return coeffs
        prev = coeffs
        n *= 2
    raise ConvergenceError("Cauchy coefficient extraction did not stabilize")
