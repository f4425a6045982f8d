"""Modified Bessel functions I_ν and K_ν of real order for x > 0.

I_ν is summed from its ascending series (all terms share a sign once
k + ν + 1 > 0, so there is no cancellation).  K_ν uses Temme's series for
x ≤ 2 and Steed's continued fraction for x > 2 at the reduced order
|μ| ≤ ½, followed by upward recurrence; the textbook reflection formula
π(I_{−ν} − I_ν)/(2 sin νπ) cancels catastrophically for large x and is only
used by the tests as a cross-check at small x.
"""
from __future__ import annotations

import math
from math import comb

from ..expr import DomainError

_EPS = 1e-16
_MAXIT = 10000
_XMAX = 700.0
_EULER = 0.5772156649015329
_ZETA3 = 1.2020569031595942


def _rgamma(z: float) -> float:
    """1/Γ(z), zero at the poles."""
    if z <= 0 and z == math.floor(z):
        return 0.0
    return 1.0 / math.gamma(z)


def _check(x: float) -> None:
    if not x > 0:
        raise DomainError(f"modified Bessel functions need x > 0, got {x}")
    if x > _XMAX:
        raise DomainError(f"argument {x} would overflow (limit {_XMAX})")


def bessel_i(nu: float, x: float) -> float:
    _check(x)
    if nu < 0 and nu == math.floor(nu):
        nu = -nu
    half = 0.5 * x
    q = half * half
    # first term (x/2)^ν / Γ(ν+1); later terms via the ratio q / (k (k+ν))
    k0 = 0
    while k0 + nu + 1 <= 0 and (k0 + nu + 1) == math.floor(k0 + nu + 1):
        k0 += 1
    term = math.exp((2 * k0 + nu) * math.log(half) - math.lgamma(k0 + 1)) * _rgamma(k0 + nu + 1)
    total = term
    k = k0
    while k < _MAXIT:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if abs(term) <= _EPS * abs(total):
            break
    return total


def _gam12(mu: float):
    """Temme's Γ combinations: gam1, gam2, 1/Γ(1+μ), 1/Γ(1−μ)."""
    gampl = 1.0 / math.gamma(1.0 + mu)
    gammi = 1.0 / math.gamma(1.0 - mu)
    if abs(mu) < 1e-3:
        a3 = _EULER**3 / 6 - _EULER * math.pi**2 / 12 + _ZETA3 / 3
        gam1 = -(_EULER + a3 * mu * mu)
    else:
        gam1 = (gammi - gampl) / (2.0 * mu)
    gam2 = (gammi + gampl) / 2.0
    return gam1, gam2, gampl, gammi


def _k_pair(mu: float, x: float):
    """K_μ(x) and K_{μ+1}(x) for |μ| ≤ ½."""
    xi2 = 2.0 / x
    if x <= 2.0:
        x2 = 0.5 * x
        pimu = math.pi * mu
        fact = 1.0 if abs(pimu) < _EPS else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = mu * d
        fact2 = 1.0 if abs(e) < _EPS else math.sinh(e) / e
        gam1, gam2, gampl, gammi = _gam12(mu)
        ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        total = ff
        e = math.exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        total1 = p
        for i in range(1, _MAXIT):
            ff = (i * ff + p + q) / (i * i - mu * mu)
            c *= d / i
            p /= i - mu
            q /= i + mu
            delta = c * ff
            total += delta
            total1 += c * (p - i * ff)
            if abs(delta) < abs(total) * _EPS:
                break
        return total, total1 * xi2
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25 - mu * mu
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, _MAXIT):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    h = a1 * h
    kmu = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    k1 = kmu * (mu + x + 0.5 - h) / x
    return kmu, k1


def bessel_k(nu: float, x: float) -> float:
    _check(x)
    nu = abs(nu)  # K_{−ν} = K_ν
    nl = int(nu + 0.5)
    mu = nu - nl
    kmu, k1 = _k_pair(mu, x)
    xi2 = 2.0 / x
    for i in range(1, nl + 1):
        kmu, k1 = k1, (mu + i) * xi2 * k1 + kmu
    return kmu


def bessel(kind: str, order: float, x: float) -> float:
    """I_ν(x) for ``kind='I'``, K_ν(x) for ``kind='K'``."""
    if kind == "I":
        return bessel_i(order, x)
    if kind == "K":
        return bessel_k(order, x)
    raise ValueError(f"unknown Bessel kind {kind!r}")


def bessel_derivative(kind: str, order: float, x: float, n: int) -> float:
    """n-th x-derivative by the recurrences I' = (I_{ν−1}+I_{ν+1})/2, K' = −(K_{ν−1}+K_{ν+1})/2."""
    if n == 0:
        return bessel(kind, order, x)
    sign = 1.0 if kind == "I" else (-1.0) ** n
    total = 0.0
    for j in range(n + 1):
        total += comb(n, j) * bessel(kind, order - n + 2 * j, x)
    return sign * total / 2.0**n


def _numeric(kind: str):
    def fn(args, orders):
        if orders[0]:
            raise DomainError("derivatives with respect to the Bessel order are not available")
        return bessel_derivative(kind, args[0], args[1], orders[1])

    fn.__name__ = f"bessel{kind}"
    return fn


besselI = _numeric("I")
besselK = _numeric("K")

SPECIAL_FUNCTIONS = {"besselI": besselI, "besselK": besselK}
