"""Main-term asymptotics for the T-rank moments and their verification.

`theorem_a_main` assembles the full circle-method main term: a Bessel
series weighted by Kloosterman sums, plus (for T > 3) a Mordell part that
sums Bessel-weighted integrals against partial Kloosterman sums over the
divisors of T.  `theorem_b_leading` gives the closed-form leading
asymptotic and `theorem_b_difference_leading` the leading term of the
difference between consecutive odd T.  `prop56_expansion_check` compares
the cusp expansion of the moment generating function against the exact
q-series, and `garvan_scan` verifies the moment inequality on exact
big-integer tables.

One transcription note that affects the assembled exponents: the
expansion-coefficient family kappa_h pairs its Gaussian parameter with
the index a (the index that also carries pi^(-a) and z^(-a)), so the
Mordell-part prefactor carries k^(a-1/2) T^(a-1/2), and the polynomial
factor inside the integrals is x^c rather than (x + i varrho)^c.  Both
are confirmed by direct Taylor-coefficient extraction (see
`specfun.taylor_identity_check` and the transformation-law suite) and by
the cusp-expansion comparison against the exact engine below.
"""

from __future__ import annotations

import cmath
import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .qseries import moment_generating_eval, moment_table
from .specfun import (
    IntegralParams,
    bernoulli_half,
    bessel_i,
    bessel_integral,
    kappa,
    kappa_h,
    kappa_h_support,
    kappa_support,
    script_h,
)
from .units import (
    I_POW_3_2,
    alpha_shift,
    chi_multiplier,
    inverse_mod,
    kloosterman_partial,
    kloosterman_sum,
    rho_residue,
    u_h_star,
)


@dataclass(frozen=True)
class AsymptoticQuery:
    """One main-term evaluation request; k_cap defaults to floor(sqrt(n))."""

    T: int
    r: int
    n: int
    k_cap: int | None = None

    def __post_init__(self):
        if self.T < 1 or self.T % 2 == 0 or self.T >= 24:
            raise ValueError("T must be an odd integer with 1 <= T < 24")
        if self.r < 2 or self.r % 2 == 1:
            raise ValueError("r must be an even integer >= 2")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def cap(self) -> int:
        return self.k_cap if self.k_cap is not None else isqrt(self.n)


def positivity_gate(T: int, gamma: int, varrho: int) -> Fraction:
    """The exact rational 1/12 - (gamma^2/T^3)(varrho^2 + T^2/4 - |varrho| T).

    A term of the Mordell part is included only when this is positive; the
    arithmetic stays in Fractions so inclusion is never a rounding call.
    """
    quad = Fraction(varrho * varrho) + Fraction(T * T, 4) - abs(varrho) * T
    return Fraction(1, 12) - Fraction(gamma * gamma, T**3) * quad


@dataclass
class TermBreakdown:
    """The assembled main term with per-term contributions.

    mu_contributions is keyed by (k, a, b, c); mordell_contributions by
    (gamma, t, varrho, k, l, a, b, c).  dropped_terms counts the
    (t, varrho, k, l) x (a, b, c) combinations excluded by the positivity
    gate.  The total is mathematically real for even r; assembly keeps
    complex accumulators and checks the imaginary part before exposing
    the real parts.
    """

    query: AsymptoticQuery
    mu_part: float = 0.0
    mordell_part: float = 0.0
    dropped_terms: int = 0
    mu_contributions: dict = field(default_factory=dict)
    mordell_contributions: dict = field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.mu_part + self.mordell_part

    def as_dict(self) -> dict:
        return {
            "T": self.query.T,
            "r": self.query.r,
            "n": self.query.n,
            "k_cap": self.query.cap,
            "mu_part": self.mu_part,
            "mordell_part": self.mordell_part,
            "total": self.total,
            "dropped_terms": self.dropped_terms,
            "mu_contributions": {
                ",".join(map(str, key)): [v.real, v.imag]
                for key, v in sorted(self.mu_contributions.items())
            },
            "mordell_contributions": {
                ",".join(map(str, key)): [v.real, v.imag]
                for key, v in sorted(self.mordell_contributions.items())
            },
        }


def _realize(value: complex, what: str) -> float:
    if abs(value.imag) > 1e-8 * max(abs(value.real), 1e-300):
        raise ArithmeticError(f"{what} has a non-negligible imaginary part: {value}")
    return value.real


def theorem_a_main(query: AsymptoticQuery) -> TermBreakdown:
    """The full main term of the moment asymptotic formula.

    The Mordell part is identically zero for T in {1, 3}: there either no
    t != 0 exists or every admissible (gamma, varrho) class has a
    nonpositive gate, so no Bessel integral is ever evaluated.
    """
    T, r, n = query.T, query.r, query.n
    out = TermBreakdown(query=query)
    mu_acc = 0j
    root = math.pi * math.sqrt(24.0 * n - 1.0) / 6.0
    for k in range(1, query.cap + 1):
        kv = kloosterman_sum(k, n).value
        if kv == 0:
            continue
        for (a, b, c) in kappa_support(r):
            coef = kappa(a, b, c)
            term = (2.0 * math.pi * kv / k
                    * coef.to_float() * (k * T) ** a
                    * (24.0 * n - 1.0) ** (-0.75 + a / 2.0 + c)
                    * bessel_i(Fraction(-3 + 2 * a + 4 * c, 2), root / k))
            mu_acc += term
            out.mu_contributions[(k, a, b, c)] = term
    out.mu_part = _realize(mu_acc, "mu part")

    h_acc = 0j
    abc = kappa_h_support(r)
    integral_cache: dict = {}
    half = (T - 1) // 2
    for gamma in (d for d in range(1, T + 1) if T % d == 0):
        betas = {rho: positivity_gate(T, gamma, rho) for rho in range(-half, half + 1)}
        for k in range(1, query.cap + 1):
            if gcd(T, k) != gamma:
                continue
            for t in range(-half, half + 1):
                if t == 0:
                    continue
                for rho, beta in betas.items():
                    if beta <= 0:
                        out.dropped_terms += (k // gamma) * len(abc)
                        continue
                    for l in range(k // gamma):
                        kv = kloosterman_partial(T, t, rho, l, k, n)
                        if kv.is_empty:
                            continue
                        alpha = alpha_shift(T, t, l, k // gamma)
                        for (a, b, c) in abc:
                            d = Fraction(-1, 2) - a - c
                            key = (alpha, beta, rho, c, d, k)
                            if key not in integral_cache:
                                integral_cache[key] = bessel_integral(IntegralParams(
                                    T=T, alpha=alpha, beta=beta,
                                    delta=Fraction(-1, 12),
                                    varrho=Fraction(rho, T),
                                    c=c, d=d, k=k, n=n,
                                ))
                            term = (2.0 * math.pi * kv.value / k
                                    * kappa_h(a, b, c).to_float()
                                    * float(k * T) ** (a - 0.5)
                                    * gamma ** (c + 0.5)
                                    * (2.0 * n - 1.0 / 12.0) ** ((a + c) / 2.0 - 0.25)
                                    * float(beta) ** (0.75 - (a + c) / 2.0)
                                    * integral_cache[key])
                            h_acc += term
                            out.mordell_contributions[(gamma, t, rho, k, l, a, b, c)] = term
    out.mordell_part = _realize(h_acc, "mordell part") if out.mordell_contributions else 0.0
    if T <= 3:
        assert out.mordell_part == 0.0 and not out.mordell_contributions
    return out


def theorem_b_leading(T: int, r: int, n: int) -> float:
    """2 sqrt(3) (-1)^(r/2) B_r(1/2) (24n)^(r/2 - 1) e^(pi sqrt(2n/3))."""
    AsymptoticQuery(T=T, r=r, n=n)  # validation only; the value is T-free
    sign = (-1) ** (r // 2)
    return (2.0 * math.sqrt(3.0) * sign * float(bernoulli_half(r))
            * (24.0 * n) ** (r / 2.0 - 1.0) * math.exp(math.pi * math.sqrt(2.0 * n / 3.0)))


def theorem_b_difference_leading(T: int, r: int, n: int) -> float:
    """Leading term of m_(T-2)^r(n) - m_T^r(n); positive for all even r."""
    AsymptoticQuery(T=T, r=r, n=n)
    sign = (-1) ** (r // 2 + 1)
    return (math.sqrt(3.0) * r * (r - 1) * sign * float(bernoulli_half(r - 2))
            * (24.0 * n) ** (r / 2.0 - 1.5) * math.exp(math.pi * math.sqrt(2.0 * n / 3.0)))


# ---------------------------------------------------------------------------
# Cusp-expansion comparison
# ---------------------------------------------------------------------------

def moment_cusp_mu(T: int, r: int, h: int, k: int, z: complex) -> complex:
    """The modular-part main term of the moment generating function near
    the cusp h/k."""
    hinv = inverse_mod(h, k)
    unit = (I_POW_3_2 * chi_multiplier(h, k).inverse()).to_complex()
    pref = (-unit * cmath.exp(1j * math.pi * (h - hinv) / (12.0 * k))
            * cmath.exp(-math.pi / (12.0 * k) * (z - 1.0 / z)))
    return pref * sum(
        kappa(a, b, c).to_float() * (k * T) ** a * z ** (0.5 - a - 2 * c)
        for (a, b, c) in kappa_support(r)
    )


def moment_cusp_mordell(T: int, r: int, t: int, l: int, h: int, k: int,
                        z: complex) -> complex:
    """One (t, l) summand of the Mordell-part main term near the cusp h/k."""
    if t == 0:
        raise ValueError("the Mordell part only has t != 0 summands")
    g = gcd(T, k)
    gco = T // g
    rho = rho_residue(T, t * gco * h)
    beta = positivity_gate(T, g, rho)  # may be <= 0 here; no gate applies
    pref = (gco ** -1.5 * math.sqrt(T / k)
            * cmath.exp(-math.pi * z / (12.0 * k))
            * cmath.exp(math.pi * float(beta) / (k * z))
            * u_h_star(T, t, l, h, k).to_complex())
    acc = 0j
    for (a, b, c) in kappa_h_support(r):
        acc += (kappa_h(a, b, c).to_float() * z ** (-0.5 - a - c) * (k * T) ** a
                * g**c
                * script_h(c, T, float(alpha_shift(T, t, l, k // g)), gco,
                           rho / T, k, z))
    return pref * acc


@dataclass(frozen=True)
class CuspExpansionReport:
    T: int
    r: int
    h: int
    k: int
    z: complex
    exact: complex
    main_mu: complex
    main_mordell: complex
    envelope: float

    @property
    def main(self) -> complex:
        return self.main_mu + self.main_mordell

    @property
    def discrepancy(self) -> float:
        return abs(self.exact - self.main)

    @property
    def ablated_discrepancy(self) -> float:
        """Discrepancy when the Mordell summands are dropped."""
        return abs(self.exact - self.main_mu)


def prop56_expansion_check(T: int, r: int, h: int, k: int, z: complex,
                           n_max: int = 600) -> CuspExpansionReport:
    """Compare the exact moment generating function at
    q = e^(2 pi i (h + iz)/k) with its cusp main term.

    Requires Re(1/z) >= k/2.  The returned envelope k^(r/2) |z|^(-r+1/2)
    is the shape of the error bound (constants not included); along a ray
    z -> 0 the discrepancy must shrink while the envelope's exponential
    improvement dominates.
    """
    z = complex(z)
    if (1.0 / z).real < k / 2.0:
        raise ValueError("the cusp expansion requires Re(1/z) >= k/2")
    if T % 2 == 0 or T < 1:
        raise ValueError("T must be odd and positive")
    q0 = cmath.exp(2j * math.pi * (h + 1j * z) / k)
    exact = moment_generating_eval(T, r, q0, n_max)
    main_mu = moment_cusp_mu(T, r, h, k, z)
    half = (T - 1) // 2
    mordell = 0j
    g = gcd(T, k)
    for t in range(-half, half + 1):
        if t == 0:
            continue
        for l in range(k // g):
            mordell += moment_cusp_mordell(T, r, t, l, h, k, z)
    return CuspExpansionReport(
        T=T, r=r, h=h, k=k, z=z, exact=exact, main_mu=main_mu,
        main_mordell=mordell,
        envelope=k ** (r / 2.0) * abs(z) ** (0.5 - r),
    )


# ---------------------------------------------------------------------------
# Exact inequality scan and comparison tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanReport:
    T: int
    r: int
    n_lo: int
    n_hi: int
    violations: tuple
    n0: int

    @property
    def holds_from_n0(self) -> bool:
        return all(v < self.n0 for v in self.violations)

    def as_dict(self) -> dict:
        return {
            "T": self.T,
            "r": self.r,
            "n_lo": self.n_lo,
            "n_hi": self.n_hi,
            "violations": list(self.violations),
            "n0": self.n0,
        }


def garvan_scan(T: int, r: int, n_lo: int, n_hi: int) -> ScanReport:
    """Exact check of m_(T-2)^r(n) > m_T^r(n) on [n_lo, n_hi].

    Returns every violating n and the smallest n0 past the last violation,
    so the inequality holds on [n0, n_hi].
    """
    if T < 3 or T % 2 == 0:
        raise ValueError("need odd T >= 3 so that T - 2 >= 1")
    if r < 2 or r % 2 == 1:
        raise ValueError("r must be even and >= 2")
    if not 1 <= n_lo <= n_hi:
        raise ValueError("need 1 <= n_lo <= n_hi")
    lower = moment_table(T - 2, r, n_hi)
    upper = moment_table(T, r, n_hi)
    violations = tuple(
        n for n in range(n_lo, n_hi + 1) if not lower[n] > upper[n]
    )
    n0 = max(n_lo, (max(violations) + 1) if violations else n_lo)
    return ScanReport(T=T, r=r, n_lo=n_lo, n_hi=n_hi, violations=violations, n0=n0)


@dataclass(frozen=True)
class ComparisonRow:
    T: int
    r: int
    n: int
    exact: int
    thm_a_main: float
    thm_b_leading: float

    @property
    def rel_err_a(self) -> float:
        return abs(self.exact - self.thm_a_main) / abs(self.exact)

    @property
    def rel_err_b(self) -> float:
        return abs(self.exact - self.thm_b_leading) / abs(self.exact)


def comparison_rows(T: int, r: int, ns) -> list[ComparisonRow]:
    """Exact values next to both main terms for each requested n."""
    ns = sorted(set(ns))
    table = moment_table(T, r, ns[-1])
    rows = []
    for n in ns:
        breakdown = theorem_a_main(AsymptoticQuery(T=T, r=r, n=n))
        rows.append(ComparisonRow(
            T=T, r=r, n=n, exact=table[n],
            thm_a_main=breakdown.total,
            thm_b_leading=theorem_b_leading(T, r, n),
        ))
    return rows


_COMPARE_HEADER = ["T", "r", "n", "exact", "thmA_main", "thmB_leading",
                   "rel_err_A", "rel_err_B"]


def comparison_to_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_COMPARE_HEADER)
        for row in rows:
            w.writerow([row.T, row.r, row.n, row.exact,
                        f"{row.thm_a_main:.17g}", f"{row.thm_b_leading:.17g}",
                        f"{row.rel_err_a:.17g}", f"{row.rel_err_b:.17g}"])


def comparison_to_json(rows, path) -> None:
    payload = [
        {
            "T": row.T, "r": row.r, "n": row.n, "exact": str(row.exact),
            "thmA_main": row.thm_a_main, "thmB_leading": row.thm_b_leading,
            "rel_err_A": row.rel_err_a, "rel_err_B": row.rel_err_b,
        }
        for row in rows
    ]
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
        fh.write("\n")
