"""Constructive witness search and verification for the boundedness machinery.

A certificate for an admissible triple (n, alpha, l) is a tuple
(theta, mu, p, q) together with ten derived interpolation exponents
(a1..a4, kappa1, kappa2, beta1, gamma1, beta2, gamma2).  Every constraint the
boundedness argument needs is a strict rational inequality in these values,
so the whole module works in exact `Fraction` arithmetic: a certificate that
verifies here verifies, full stop.

Layout of the machinery:

  h_value        -- the sign function whose negativity admits (theta, mu)
  find_theta_mu  -- geometric search toward the corner theta->1+, mu->infinity
  coeffs_ABCD    -- linear-form coefficients of the admissible p-interval
  p_interval     -- f1(q) = A q - B, f2(q) = C q - D
  q_threshold    -- smallest q beyond which f1 < f2
  choose_pq      -- picks (p, q) strictly inside all lower bounds and (f1, f2)
  exponent_set   -- the ten derived exponents, validated to lie in (0, 1)
  verify_certificate -- total re-check of every constraint, plus two
                        closed-form identities that exercise every symbol
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .rational import RealLike, as_fraction


class CertificateError(ValueError):
    """Base class for certificate construction failures."""


class ConstraintViolation(CertificateError):
    """An input lies outside its admissible range."""


class WitnessSearchError(CertificateError):
    """Search failure: budget exhausted without a witness (not a disproof)."""


class InfeasibleError(CertificateError):
    """No (p, q) satisfied all constraints within the retry cap."""


@dataclass(frozen=True)
class AuxiliaryPair:
    theta: Fraction
    mu: Fraction


@dataclass(frozen=True)
class CoefficientSet:
    A: Fraction
    B: Fraction
    C: Fraction
    D: Fraction


@dataclass(frozen=True)
class ExponentSet:
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    kappa1: Fraction
    kappa2: Fraction
    beta1: Fraction
    gamma1: Fraction
    beta2: Fraction
    gamma2: Fraction


@dataclass(frozen=True)
class Certificate:
    n: int
    alpha: Fraction
    l: Fraction
    aux: AuxiliaryPair
    p: Fraction
    q: Fraction
    exponents: Optional[ExponentSet]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        return "\n".join(
            f"check.{c.name} = {'pass' if c.passed else 'fail'}  # {c.detail}"
            for c in self.checks
        )


def _theta_upper(n: int) -> Optional[Fraction]:
    # open upper range for theta; unbounded when n = 2
    return None if n == 2 else Fraction(n, n - 2)


def _check_theta_mu(n: int, theta: Fraction, mu: Fraction):
    if theta <= 1:
        raise ConstraintViolation(f"theta must exceed 1 (got {theta})")
    hi = _theta_upper(n)
    if hi is not None and theta >= hi:
        raise ConstraintViolation(f"theta must be below n/(n-2) = {hi} (got {theta})")
    if mu <= Fraction(n, 2):
        raise ConstraintViolation(f"mu must exceed n/2 = {Fraction(n, 2)} (got {mu})")


def _aux_numerator(n: int, alpha: Fraction, theta: Fraction) -> Fraction:
    return n * (theta + 1 - 2 * alpha * theta) + 2 * theta


def h_value(n: int, alpha: RealLike, l: RealLike, theta: RealLike, mu: RealLike) -> Fraction:
    """Sign function h(theta, mu); h < 0 admits the pair for (n, alpha, l)."""
    a, ll = as_fraction(alpha), as_fraction(l)
    th, m = as_fraction(theta), as_fraction(mu)
    _check_theta_mu(n, th, m)
    den = 2 * n * th + n * n - n * n * th  # positive for theta < n/(n-2)
    return ll * (2 * m - 1) / (4 * m - n) - _aux_numerator(n, a, th) / den


def h_limit(n: int, alpha: RealLike, l: RealLike) -> Fraction:
    """Limit of h(1, mu) as mu -> infinity: l/2 - 1 + alpha - 1/n."""
    return as_fraction(l) / 2 - 1 + as_fraction(alpha) - Fraction(1, n)


def find_theta_mu(n: int, alpha: RealLike, l: RealLike, budget: int = 64) -> AuxiliaryPair:
    """Search for an admissible pair with h < 0.

    Witnesses accumulate toward theta -> 1+, mu -> infinity, so both
    coordinates approach that corner geometrically: theta_m = 1 + 2^-m
    (starting past n/(n-2) when n >= 3) with mu_m = n/2 + 2^m.  Raises
    WitnessSearchError when the budget runs out; that is a statement about
    the budget, not a disproof.
    """
    a, ll = as_fraction(alpha), as_fraction(l)
    if budget < 1:
        raise ValueError("budget must be at least 1")
    hi = _theta_upper(n)
    start = 0
    if hi is not None:
        while 1 + Fraction(1, 2**start) >= hi:
            start += 1
    half_n = Fraction(n, 2)
    for m in range(start, start + budget):
        theta = 1 + Fraction(1, 2**m)
        mu = half_n + 2**m
        if _aux_numerator(n, a, theta) <= 0:
            continue
        if h_value(n, a, ll, theta, mu) < 0:
            return AuxiliaryPair(theta=theta, mu=mu)
    raise WitnessSearchError(
        f"search failure: no (theta, mu) witness for (n={n}, alpha={a}, l={ll}) "
        f"within budget {budget}"
    )


def coeffs_ABCD(n: int, alpha: RealLike, l: RealLike, aux: AuxiliaryPair) -> CoefficientSet:
    """Linear-form coefficients; A - C = 2 h(theta, mu), B = D = 0 when n = 2."""
    a, ll = as_fraction(alpha), as_fraction(l)
    th, mu = as_fraction(aux.theta), as_fraction(aux.mu)
    _check_theta_mu(n, th, mu)
    den = 2 * n * th + n * n - n * n * th
    return CoefficientSet(
        A=2 * ll * (2 * mu - 1) / (4 * mu - n),
        B=2 * ll * mu * (n - 2) ** 2 / (n * (4 * mu - n)),
        C=(2 * n * (th + 1 - 2 * a * th) + 4 * th) / den,
        D=2 * n * th * (1 - a) * (n - 2) / den,
    )


def p_interval(coeffs: CoefficientSet, q: RealLike):
    """Admissible p-range endpoints (f1(q), f2(q)) in closed linear form."""
    qq = as_fraction(q)
    return coeffs.A * qq - coeffs.B, coeffs.C * qq - coeffs.D


def q_threshold(coeffs: CoefficientSet) -> Fraction:
    """Smallest q beyond which f1(q) < f2(q).

    The gap function k(q) = (A - C) - (B - D)/q is negative for all q >= 1
    once B - D >= 0, in which case 1 is returned; otherwise the root
    (B - D)/(A - C).
    """
    gap = coeffs.A - coeffs.C
    if gap >= 0:
        raise CertificateError(
            "no q-threshold: A - C >= 0 (the auxiliary pair does not satisfy h < 0)"
        )
    bd = coeffs.B - coeffs.D
    if bd >= 0:
        return Fraction(1)
    return bd / gap


def _q_lower_bounds(n, a, ll, th, mu, coeffs):
    theta_conj = th / (th - 1)
    mu_conj = mu / (mu - 1)
    return (
        Fraction(n - 2) * theta_conj / n,
        n / (2 * mu_conj) + 1,
        2 * n * th * (a - 1) * (2 - n) / (2 * n * (th + 1 - 2 * a * th) + 4 * th),
        q_threshold(coeffs),
    )


def _p_lower_bounds(n, a, ll, th, mu):
    return (
        2 + 1 / th,
        Fraction(2 * (n - 2)) * ll * mu / n,
        2 * th * (a - 1) * (n - 2) / (n - th * (n - 2)),
    )


def choose_pq(
    n: int,
    alpha: RealLike,
    l: RealLike,
    aux: AuxiliaryPair,
    margin: Fraction = Fraction(1, 4),
):
    """Pick (p, q) strictly satisfying every lower bound and f1(q) < p < f2(q).

    q starts at (1 + margin) times the largest lower bound; p is the midpoint
    of the residual open interval.  If the interval is empty, q doubles and
    the choice is retried (enlarging q preserves feasibility since f2 - f1
    grows linearly with positive slope -2h).
    """
    a, ll = as_fraction(alpha), as_fraction(l)
    th, mu = as_fraction(aux.theta), as_fraction(aux.mu)
    coeffs = coeffs_ABCD(n, a, ll, aux)
    q = max(_q_lower_bounds(n, a, ll, th, mu, coeffs)) * (1 + margin)
    p_floor = max(_p_lower_bounds(n, a, ll, th, mu))
    for _ in range(200):
        f1, f2 = p_interval(coeffs, q)
        lo = max(p_floor, f1)
        if lo < f2:
            return (lo + f2) / 2, q
        q *= 2
    raise InfeasibleError(
        f"empty (p, q) feasible interval for (n={n}, alpha={a}, l={ll}) after retries"
    )


def _exponents_raw(n, a, ll, th, mu, p, q) -> ExponentSet:
    # The displayed interpolation exponents; raises on degenerate denominators.
    theta_conj = th / (th - 1)
    mu_conj = mu / (mu - 1)
    half_n = Fraction(n, 2)
    a1 = (n * p / 2) * (1 - 1 / ((p + 2 * a - 2) * th)) / (1 - half_n + n * p / 2)
    a2 = n * q * (Fraction(1, n) - 1 / (2 * theta_conj)) / (1 - half_n + q)
    a3 = (n * p / (2 * ll)) * (1 - 1 / (2 * mu)) / (1 - half_n + n * p / (2 * ll))
    a4 = n * q * (Fraction(1, n) - 1 / (2 * (q - 1) * mu_conj)) / (1 - half_n + q)
    kappa1 = (n * p / 2) * (1 - 1 / p) / (1 - half_n + n * p / 2)
    kappa2 = (q - half_n) / (1 - half_n + q)
    return ExponentSet(
        a1=a1,
        a2=a2,
        a3=a3,
        a4=a4,
        kappa1=kappa1,
        kappa2=kappa2,
        beta1=(p - 2 + 2 * a) / p * a1,
        gamma1=a2 / q,
        beta2=2 * ll / p * a3,
        gamma2=(q - 1) / q * a4,
    )


def exponent_set(
    n: int,
    alpha: RealLike,
    l: RealLike,
    aux: AuxiliaryPair,
    p: RealLike,
    q: RealLike,
) -> ExponentSet:
    """Compute and validate the ten derived exponents."""
    a, ll = as_fraction(alpha), as_fraction(l)
    th, mu = as_fraction(aux.theta), as_fraction(aux.mu)
    pp, qq = as_fraction(p), as_fraction(q)
    try:
        exps = _exponents_raw(n, a, ll, th, mu, pp, qq)
    except ZeroDivisionError as exc:
        raise CertificateError(f"degenerate exponent denominator: {exc}") from exc
    for name in ("a1", "a2", "a3", "a4", "kappa1", "kappa2"):
        val = getattr(exps, name)
        if not 0 < val < 1:
            raise CertificateError(f"invalid certificate: {name} = {val} outside (0, 1)")
    for name, val in (
        ("beta1+gamma1", exps.beta1 + exps.gamma1),
        ("beta2+gamma2", exps.beta2 + exps.gamma2),
    ):
        if not 0 < val < 1:
            raise CertificateError(f"invalid certificate: {name} = {val} outside (0, 1)")
    return exps


def assemble_certificate(
    n: int,
    alpha: RealLike,
    l: RealLike,
    theta: RealLike,
    mu: RealLike,
    p: RealLike,
    q: RealLike,
) -> Certificate:
    """Build a Certificate from explicit values without validating them.

    Exponents are derived when the arithmetic permits; verification is the
    job of verify_certificate.
    """
    a, ll = as_fraction(alpha), as_fraction(l)
    th, m = as_fraction(theta), as_fraction(mu)
    pp, qq = as_fraction(p), as_fraction(q)
    try:
        exps = _exponents_raw(n, a, ll, th, m, pp, qq)
    except (ZeroDivisionError, ValueError):
        exps = None
    return Certificate(
        n=n, alpha=a, l=ll, aux=AuxiliaryPair(theta=th, mu=m), p=pp, q=qq, exponents=exps
    )


def make_certificate(n: int, alpha: RealLike, l: RealLike, budget: int = 64) -> Certificate:
    """Full pipeline: witness search, (p, q) selection, exponent derivation."""
    a, ll = as_fraction(alpha), as_fraction(l)
    aux = find_theta_mu(n, a, ll, budget=budget)
    p, q = choose_pq(n, a, ll, aux)
    exps = exponent_set(n, a, ll, aux, p, q)
    return Certificate(n=n, alpha=a, l=ll, aux=aux, p=p, q=q, exponents=exps)


def _identity_rhs_1(n, a, th, p, q):
    num = (
        n * n * (2 * (a - 1) * th + p * (th - 1))
        + 2 * n * (q * (-2 * a * th + th + 1) - th * (2 * a + p - 2))
        + 4 * q * th
    )
    return num / (th * (n * (p - 1) + 2) * (n - 2 * (q + 1)))


def _identity_rhs_2(n, ll, mu, p, q):
    num = n * p * (n - 4 * mu) - 2 * ll * (mu * (n * n - 2 * n * (q + 2) + 4) + n * q)
    return num / (mu * (n - 2 * (q + 1)) * (ll * (n - 2) - n * p))


def verify_certificate(cert: Certificate) -> VerificationReport:
    """Re-check every constraint of a certificate.  Total: never raises.

    The two closed-form identity checks compare beta1+gamma1-1 and
    beta2+gamma2-1, as composed from the exponent definitions, against their
    independent single-fraction rearrangements; together they exercise every
    symbol in the certificate exactly.
    """
    n, a, ll = cert.n, cert.alpha, cert.l
    th, mu = cert.aux.theta, cert.aux.mu
    p, q = cert.p, cert.q
    checks = []

    def add(name, fn, describe):
        try:
            ok, detail = fn()
        except (ZeroDivisionError, CertificateError, ValueError) as exc:
            ok, detail = False, f"{describe}: undefined ({exc})"
        checks.append(CheckResult(name=name, passed=ok, detail=detail))

    hi = _theta_upper(n)
    add(
        "theta_range",
        lambda: (
            th > 1 and (hi is None or th < hi),
            f"1 < theta{'' if hi is None else f' < {hi}'} (theta={th})",
        ),
        "theta range",
    )
    add(
        "mu_range",
        lambda: (mu > Fraction(n, 2), f"mu > n/2 = {Fraction(n, 2)} (mu={mu})"),
        "mu range",
    )
    add(
        "aux_numerator_positive",
        lambda: (
            _aux_numerator(n, a, th) > 0,
            f"n(theta+1-2 alpha theta)+2 theta = {_aux_numerator(n, a, th)} > 0",
        ),
        "auxiliary numerator",
    )
    add(
        "h_negative",
        lambda: (h_value(n, a, ll, th, mu) < 0, f"h = {h_value(n, a, ll, th, mu)} < 0"),
        "h sign",
    )

    def q_bound_check(idx, name):
        def fn():
            coeffs = coeffs_ABCD(n, a, ll, cert.aux)
            bound = _q_lower_bounds(n, a, ll, th, mu, coeffs)[idx]
            return q > bound, f"q = {q} > {bound}"

        add(name, fn, name)

    q_bound_check(0, "q_gt_theta_conjugate_bound")
    q_bound_check(1, "q_gt_mu_conjugate_bound")
    q_bound_check(2, "q_gt_coefficient_ratio_bound")
    q_bound_check(3, "q_gt_root_bound")

    def p_bound_check(idx, name):
        def fn():
            bound = _p_lower_bounds(n, a, ll, th, mu)[idx]
            return p > bound, f"p = {p} > {bound}"

        add(name, fn, name)

    p_bound_check(0, "p_gt_theta_bound")
    p_bound_check(1, "p_gt_production_bound")
    p_bound_check(2, "p_gt_dimension_bound")

    def interval_low():
        f1, _ = p_interval(coeffs_ABCD(n, a, ll, cert.aux), q)
        return p > f1, f"p = {p} > f1(q) = {f1}"

    def interval_high():
        _, f2 = p_interval(coeffs_ABCD(n, a, ll, cert.aux), q)
        return p < f2, f"p = {p} < f2(q) = {f2}"

    add("p_above_f1", interval_low, "p above f1")
    add("p_below_f2", interval_high, "p below f2")

    def exps_or_raise():
        return _exponents_raw(n, a, ll, th, mu, p, q)

    for name in ("a1", "a2", "a3", "a4", "kappa1", "kappa2"):
        def fn(name=name):
            val = getattr(exps_or_raise(), name)
            return 0 < val < 1, f"{name} = {val} in (0, 1)"

        add(f"{name}_in_01", fn, f"{name} range")

    def sum1():
        e = exps_or_raise()
        s = e.beta1 + e.gamma1
        return 0 < s < 1, f"beta1 + gamma1 = {s} in (0, 1)"

    def sum2():
        e = exps_or_raise()
        s = e.beta2 + e.gamma2
        return 0 < s < 1, f"beta2 + gamma2 = {s} in (0, 1)"

    add("sum1_in_01", sum1, "first exponent sum")
    add("sum2_in_01", sum2, "second exponent sum")

    def identity1():
        e = exps_or_raise()
        lhs = e.beta1 + e.gamma1 - 1
        rhs = _identity_rhs_1(n, a, th, p, q)
        return lhs == rhs, f"beta1+gamma1-1 = {lhs} == closed form {rhs} (exact)"

    def identity2():
        e = exps_or_raise()
        lhs = e.beta2 + e.gamma2 - 1
        rhs = _identity_rhs_2(n, ll, mu, p, q)
        return lhs == rhs, f"beta2+gamma2-1 = {lhs} == closed form {rhs} (exact)"

    add("identity_sum1", identity1, "first closed-form identity")
    add("identity_sum2", identity2, "second closed-form identity")

    if cert.exponents is not None:
        def consistent():
            e = exps_or_raise()
            same = e == cert.exponents
            return same, "stored exponents match recomputation"

        add("exponents_consistent", consistent, "stored exponents")

    return VerificationReport(checks=tuple(checks))


_FIELDS = ("n", "alpha", "l", "theta", "mu", "p", "q")
_EXP_FIELDS = (
    "a1", "a2", "a3", "a4", "kappa1", "kappa2",
    "beta1", "gamma1", "beta2", "gamma2",
)


def certificate_to_text(cert: Certificate, report: Optional[VerificationReport] = None) -> str:
    """Serialize as a flat key-value document (exact rationals, round-trips)."""
    lines = [
        f"n = {cert.n}",
        f"alpha = {cert.alpha}",
        f"l = {cert.l}",
        f"theta = {cert.aux.theta}",
        f"mu = {cert.aux.mu}",
        f"p = {cert.p}",
        f"q = {cert.q}",
    ]
    if cert.exponents is not None:
        lines += [f"{name} = {getattr(cert.exponents, name)}" for name in _EXP_FIELDS]
    if report is not None:
        lines += [
            f"check.{c.name} = {'pass' if c.passed else 'fail'}" for c in report.checks
        ]
    return "\n".join(lines) + "\n"


def certificate_from_text(text: str) -> Certificate:
    """Parse the flat key-value form; check.* lines are ignored (regenerated)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CertificateError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key.startswith("check."):
            continue
        if key not in _FIELDS and key not in _EXP_FIELDS:
            raise CertificateError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise CertificateError(f"line {lineno}: duplicate key {key!r}")
        values[key] = val
    missing = [k for k in _FIELDS if k not in values]
    if missing:
        raise CertificateError(f"missing keys: {', '.join(missing)}")
    n = int(values["n"])
    cert = assemble_certificate(
        n, values["alpha"], values["l"], values["theta"], values["mu"],
        values["p"], values["q"],
    )
    if any(k in values for k in _EXP_FIELDS):
        if not all(k in values for k in _EXP_FIELDS):
            raise CertificateError("exponent keys must be given all together or not at all")
        exps = ExponentSet(**{k: as_fraction(values[k]) for k in _EXP_FIELDS})
        cert = Certificate(
            n=cert.n, alpha=cert.alpha, l=cert.l, aux=cert.aux,
            p=cert.p, q=cert.q, exponents=exps,
        )
    return cert
