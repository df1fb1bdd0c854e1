"""
Strong asymptotics diagnostics for Bergman polynomials.

``alpha_n`` measures how far the leading coefficient is from its model value,

    (n+1)/pi * gamma**(2(n+1)) / lambda_n**2 = 1 - alpha_n,

and ``A_n(z)`` does the same pointwise in the exterior.  Zeros are located
by Aberth-Ehrlich iteration and compared against the convex hull of the
domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
from mpmath import mpc, mpf

from .domains import Domain, ExteriorMap, UnitDisk, hull_distance, phi_derivative, phi_eval
from .numerics import Poly
from .orthogonal import OrthonormalBasis

__all__ = [
    "AsymptoticsRow", "RootReport", "RootFindingError", "alpha_n",
    "decay_exponent", "alpha_rows", "strong_error_field", "ratio_row",
    "roots", "hull_check", "root_report",
]


class RootFindingError(ArithmeticError):
    pass


@dataclass(frozen=True)
class AsymptoticsRow:
    n: int
    alpha: mpf
    s: Optional[mpf] = None
    extra: Optional[tuple] = None


@dataclass(frozen=True)
class RootReport:
    n: int
    roots: tuple
    max_hull_violation: mpf
    min_modulus_phi: Optional[mpf] = None


def alpha_n(lambda_n, gamma, n: int) -> mpf:
    """Strong asymptotic error of the leading coefficient ``lambda_n``."""
    return 1 - (n + 1) / mpmath.pi * mpf(gamma) ** (2 * (n + 1)) / mpf(lambda_n) ** 2


def decay_exponent(e_prev, e_cur, n: int, step: int = 1) -> mpf:
    """Two-point log-log slope ``s`` for the model ``e_n ~ n**-s``."""
    e_prev, e_cur = mpf(e_prev), mpf(e_cur)
    if e_prev <= 0 or e_cur <= 0:
        raise ValueError("undefined exponent")
    return mpmath.log(e_prev / e_cur) / mpmath.log(mpf(n) / (n - step))


def alpha_rows(basis: OrthonormalBasis, gamma, n_from: int, n_to: int) -> list:
    rows = []
    prev = None
    for n in range(n_from, n_to + 1):
        a = alpha_n(basis.lambdas[n], gamma, n)
        s = None
        if prev is not None and prev > 0 and a > 0:
            s = decay_exponent(prev, a, n)
        rows.append(AsymptoticsRow(n, a, s))
        prev = a
    return rows


def strong_error_field(basis: OrthonormalBasis, d: Domain, n: int, z) -> mpc:
    """``A_n(z) = p_n(z) / (sqrt((n+1)/pi) Phi(z)**n Phi'(z)) - 1``."""
    w = phi_eval(d, z)
    dphi = phi_derivative(d, z, w)
    model = mpmath.sqrt((n + 1) / mpmath.pi) * w ** n * dphi
    return basis.polys[n](z) / model - 1


def ratio_row(basis: OrthonormalBasis, n: int) -> mpf:
    """``sqrt((n+1)/(n+2)) lambda_{n+1} / lambda_n``, which tends to ``gamma``."""
    lam = basis.lambdas
    return mpmath.sqrt(mpf(n + 1) / (n + 2)) * lam[n + 1] / lam[n]


# ------------------------------------------------------------------ zeros

def _aberth_float(c: np.ndarray, z: np.ndarray, iters: int = 500) -> np.ndarray:
    dc = np.polynomial.polynomial.polyder(c)
    for _ in range(iters):
        p = np.polynomial.polynomial.polyval(z, c)
        dp = np.polynomial.polynomial.polyval(z, dc)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            step = ratio / (1 - ratio * s)
        step = np.where(np.isfinite(step), step, 0)
        z = z - step
        if np.max(np.abs(step)) < 1e-15 * max(1.0, np.max(np.abs(z))):
            break
    return z


def _horner_with_derivative(coeffs, z):
    p = mpc(0)
    dp = mpc(0)
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _initial_guesses(coeffs) -> list:
    n = len(coeffs) - 1
    lead = abs(coeffs[-1])
    radius = max((float(abs(c) / lead) ** (1.0 / (n - k)) for k, c in enumerate(coeffs[:-1]) if c != 0),
                 default=1.0)
    radius = 1.0 + radius
    return [radius * np.exp(1j * (2 * np.pi * k / n + 0.4)) for k in range(n)]


def roots(p: Poly, maxiter: int = 400) -> list:
    """
    All roots of ``p`` (with multiplicity) by Aberth-Ehrlich iteration.

    A double-precision pass from points on a circle seeds the iteration, which
    is then continued at working precision until the corrections drop below
    ``10**-(0.6 dps)``.  Exact trailing zero coefficients give exact zero roots.
    """
    if p.degree < 1:
        raise ValueError("polynomial must have degree >= 1")
    coeffs = list(p.coeffs)
    zeros = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        zeros += 1
    found = [mpc(0)] * zeros
    n = len(coeffs) - 1
    if n == 0:
        return found
    if n == 1:
        return found + [-coeffs[0] / coeffs[1]]
    seed = np.array(_initial_guesses(coeffs))
    scale = float(abs(coeffs[-1]))
    cf = np.array([complex(c) / scale for c in coeffs])
    if np.all(np.isfinite(cf)):
        seed = _aberth_float(cf, seed)
    z = [mpc(complex(x)) for x in seed]
    dps = mpmath.mp.dps
    tol = mpf(10) ** (-int(0.6 * dps))
    for _ in range(maxiter):
        biggest = mpf(0)
        new = list(z)
        for i in range(n):
            pv, dv = _horner_with_derivative(coeffs, new[i])
            if pv == 0:
                continue
            ratio = pv / dv
            s = mpc(0)
            for j in range(n):
                if j != i:
                    s += 1 / (new[i] - new[j])
            step = ratio / (1 - ratio * s)
            new[i] = new[i] - step
            biggest = max(biggest, abs(step) / max(1, abs(new[i])))
        z = new
        if biggest < tol:
            break
    else:
        raise RootFindingError("root finding failed")
    gate = mpf(10) ** (-(dps // 2))
    for r in z:
        pv, _ = _horner_with_derivative(coeffs, r)
        size = sum(abs(c) * abs(r) ** k for k, c in enumerate(coeffs))
        if abs(pv) > gate * size:
            raise RootFindingError("root finding failed")
    return found + z


def hull_check(rs, d: Domain) -> mpf:
    """Largest signed distance of the roots from the domain's convex hull (``<= 0``: inside)."""
    return max(hull_distance(r, d) for r in rs)


def root_report(basis: OrthonormalBasis, d: Domain, n: int) -> RootReport:
    rs = roots(basis.polys[n])
    violation = hull_check(rs, d)
    min_phi = None
    if isinstance(d, (UnitDisk, ExteriorMap)):
        outside = []
        for r in rs:
            if _outside(d, r):
                try:
                    outside.append(abs(phi_eval(d, r)))
                except ValueError:
                    pass
        min_phi = min(outside) if outside else None
    return RootReport(n, tuple(rs), violation, min_phi)


def _outside(d: Domain, z) -> bool:
    if isinstance(d, UnitDisk):
        return abs(z) > 1
    from shapely.geometry import Point, Polygon as ShPolygon
    ts = np.linspace(0, 2 * np.pi, 1024, endpoint=False)
    w = np.exp(1j * ts)
    curve = sum(complex(c) * w ** j for j, c in d.psi.terms().items())
    return not ShPolygon(list(zip(curve.real, curve.imag))).contains(Point(float(z.real), float(z.imag)))
