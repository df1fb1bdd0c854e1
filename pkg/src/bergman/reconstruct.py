"""
Capacity, exterior map and boundary recovery from the Bergman polynomials.

The ratio ``Phi_n = sqrt(n/(n+1)) p_n / p_{n-1}`` approximates the exterior
conformal map ``Phi``; its leading coefficient gives the capacity estimate
``b^(n)``.  Reverting the Laurent expansion of ``Phi_n`` produces a truncated
``Psi_n(w) = b w + b_0 + b_1/w + ... + b_n/w**n`` whose image of the unit
circle approximates the boundary.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

import mpmath
import numpy as np
from mpmath import mpc, mpf

from .domains import Domain, boundary_samples_of, exact_capacity
from .numerics import LaurentSeries, laurent_ratio, laurent_revert
from .orthogonal import OrthonormalBasis

__all__ = [
    "RecoveredMap", "CapacityRow", "capacity_estimate", "capacity_rows",
    "phi_approx", "revert_series", "boundary_samples", "curve_distance",
    "recovered_map_json", "boundary_csv",
]


@dataclass(frozen=True)
class RecoveredMap:
    """Truncated exterior map ``Psi_n``; ``bk[j]`` is the coefficient of ``w**-(j+1)``."""

    n: int
    b: mpf
    b0: mpc
    bk: tuple
    provenance: str = ""

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError("recovered capacity must be positive")

    def series(self) -> LaurentSeries:
        return LaurentSeries(1, [mpc(self.b), self.b0, *self.bk])

    def __call__(self, w):
        return self.series()(w)


@dataclass(frozen=True)
class CapacityRow:
    n: int
    b: mpf
    t: Optional[mpf] = None
    s: Optional[mpf] = field(default=None)


def capacity_estimate(basis: OrthonormalBasis, n: int, cap=None):
    """``(b^(n), t_n)`` with ``b^(n) = sqrt((n+1)/n) lambda_{n-1}/lambda_n``.

    ``t_n = b^(n) - cap`` when the capacity is supplied, otherwise ``None``.
    """
    if n < 1 or n > basis.n:
        raise ValueError("degree out of range")
    lam = basis.lambdas
    b = mpmath.sqrt(mpf(n + 1) / n) * lam[n - 1] / lam[n]
    t = None if cap is None else b - mpf(cap)
    return b, t


def capacity_rows(basis: OrthonormalBasis, ns, cap=None) -> list:
    """Rows ``(n, b, t, s)``; ``s`` is the log-log slope of ``t`` between consecutive rows."""
    from .asymptotics import decay_exponent

    rows = []
    prev = None
    for n in ns:
        b, t = capacity_estimate(basis, n, cap)
        s = None
        if prev is not None and t is not None and prev.t is not None and prev.t > 0 and t > 0:
            s = decay_exponent(prev.t, t, n, n - prev.n)
        row = CapacityRow(n, b, t, s)
        rows.append(row)
        prev = row
    return rows


def phi_approx(basis: OrthonormalBasis, n: int, T: int | None = None) -> LaurentSeries:
    """Laurent expansion about infinity of ``Phi_n`` with ``T`` terms (default ``n + 2``)."""
    if n < 1 or n > basis.n:
        raise ValueError("degree out of range")
    T = n + 2 if T is None else T
    ratio = laurent_ratio(basis.polys[n], basis.polys[n - 1], T)
    return ratio * mpmath.sqrt(mpf(n) / (n + 1))


def revert_series(phi_n: LaurentSeries, n: int, provenance: str = "") -> RecoveredMap:
    """
    Revert ``Phi_n = gamma z + gamma_0 + ...`` into ``Psi_n`` of degree ``n``.

    ``b = 1/gamma``, ``b_0 = -gamma_0/gamma`` and ``-k b_k = [z**-1] Phi_n**k``.
    Needs ``n + 2`` terms of ``phi_n``.
    """
    if phi_n.top != 1 or phi_n.coeff(1) == 0:
        raise ValueError("series must start with a nonzero z**1 term")
    psi = laurent_revert(phi_n, n + 2)
    b = psi.coeff(1)
    if abs(b.imag) > mpf(10) ** (-(mpmath.mp.dps // 2)) * abs(b):
        raise ValueError("leading coefficient is not real")
    return RecoveredMap(n, b.real, psi.coeff(0), tuple(psi.coeff(-k) for k in range(1, n + 1)), provenance)


def boundary_samples(rmap: RecoveredMap, count: int) -> list:
    """``Psi_n`` at ``count`` equispaced points of the unit circle."""
    if count < 3:
        raise ValueError("count must be at least 3")
    series = rmap.series()
    out = []
    for j in range(count):
        w = mpmath.expjpi(mpf(2 * j) / count)
        out.append(series(w))
    return out


def _to_array(points) -> np.ndarray:
    return np.array([complex(p) for p in points], dtype=complex)


def _point_to_polyline(points: np.ndarray, ring: np.ndarray) -> np.ndarray:
    a = ring
    c = np.roll(ring, -1)
    h = c - a
    hh = np.abs(h) ** 2
    hh[hh == 0] = 1.0
    out = np.empty(len(points))
    for i, p in enumerate(points):
        t = np.clip(((p - a) * np.conj(h)).real / hh, 0.0, 1.0)
        out[i] = np.min(np.abs(p - (a + t * h)))
    return out


def curve_distance(samples, d: Domain, m: int = 2048) -> float:
    """
    Discrete Hausdorff distance between a sampled closed curve and the
    boundary of ``d`` (sampled at ``m`` probes), each treated as a polyline.
    """
    A = _to_array(samples)
    B = _to_array(boundary_samples_of(d, m))
    if len(A) == 0:
        raise ValueError("no samples")
    return float(max(_point_to_polyline(A, B).max(), _point_to_polyline(B, A).max()))


def recover(basis: OrthonormalBasis, n: int, T: int | None = None) -> RecoveredMap:
    return revert_series(phi_approx(basis, n, T), n, basis.domain_tag)


# ------------------------------------------------------------------ output

def _pair(c) -> list:
    c = mpc(c)
    return [float(c.real), float(c.imag)]


def recovered_map_json(rmap: RecoveredMap) -> str:
    obj = {"n": rmap.n, "b": float(rmap.b), "b0": _pair(rmap.b0), "bk": [_pair(c) for c in rmap.bk]}
    return json.dumps(obj, indent=2)


def boundary_csv(rmap: RecoveredMap, count: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "re", "im"])
    for j, z in enumerate(boundary_samples(rmap, count)):
        writer.writerow([repr(j / count), mpmath.nstr(z.real, 17), mpmath.nstr(z.imag, 17)])
    return buf.getvalue()


def default_capacity(d: Domain):
    cap = exact_capacity(d)
    return None if cap is None else mpf(mpmath.re(cap))
