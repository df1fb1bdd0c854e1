"""
Planar Jordan domains and their complex area moments.

A domain is one of :class:`UnitDisk`, :class:`HalfDisk` (the upper half of
the unit disk), :class:`Polygon` or :class:`ExteriorMap` (the bounded region
enclosed by ``Psi(e^{it})`` for a Laurent polynomial ``Psi``).  Moments

    mu[m, k] = integral over G of z**m * conj(z)**k dA

are computed in closed form at working precision, through the boundary
identity ``mu[m, k] = 1/(2i(k+1)) * contour integral of z**m conj(z)**(k+1) dz``
for polygons and exterior maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import mpmath
import numpy as np
from mpmath import mpc, mpf

from .numerics import LaurentSeries, to_complex

__all__ = [
    "DomainError", "UnitDisk", "HalfDisk", "Polygon", "ExteriorMap", "Domain",
    "MomentMatrix", "square", "hypocycloid", "ellipse", "from_name",
    "from_json", "to_json", "moment", "moment_matrix", "boundary_point",
    "exact_capacity", "exact_psi", "phi_eval", "phi_derivative",
    "sup_norm_on_boundary", "area", "hull_distance", "boundary_samples_of",
]


class DomainError(ValueError):
    """Raised for malformed domain descriptions."""

    def __init__(self, detail: str = ""):
        super().__init__("invalid domain" + (f": {detail}" if detail else ""))


@dataclass(frozen=True)
class UnitDisk:
    tag: str = "unit_disk"


@dataclass(frozen=True)
class HalfDisk:
    """Upper half-disk ``{|z| < 1, Im z > 0}``."""

    tag: str = "half_disk"


@dataclass(frozen=True)
class Polygon:
    """Simple polygon with positively oriented vertices."""

    vertices: tuple
    tag: str = "polygon"

    def __post_init__(self):
        verts = tuple(to_complex(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise DomainError("a polygon needs at least 3 vertices")
        pts = [(float(v.real), float(v.imag)) for v in verts]
        if len(set(pts)) != len(pts):
            raise DomainError("repeated polygon vertex")
        if not _is_simple_closed(pts):
            raise DomainError("polygon boundary self-intersects")
        if _signed_area(verts) <= 0:
            raise DomainError("polygon vertices must be positively oriented")

    def edges(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]


@dataclass(frozen=True)
class ExteriorMap:
    """Domain bounded by ``Psi(e^{it})`` with ``Psi(w) = b w + b0 + sum b_k w**-k``."""

    psi: LaurentSeries
    tag: str = "exterior_map"

    def __post_init__(self):
        psi = self.psi
        if not psi.exact or psi.top != 1 or psi.coeff(1) == 0:
            raise DomainError("Psi must be a Laurent polynomial b*w + b0 + ... with b != 0")
        ts = np.linspace(0.0, 2 * np.pi, 512, endpoint=False)
        w = np.exp(1j * ts)
        z = sum(complex(c) * w ** j for j, c in psi.terms().items())
        if not _is_simple_closed(list(zip(z.real, z.imag))):
            raise DomainError("Psi(e^{it}) is not a Jordan curve")
        if _signed_area([mpc(complex(x)) for x in z]) <= 0:
            raise DomainError("Psi(e^{it}) must be positively oriented")

    @property
    def b(self) -> mpc:
        return self.psi.coeff(1)

    @property
    def span(self) -> int:
        """Top power minus lowest power of ``Psi``."""
        return 1 - self.psi.lowest_power


Domain = Union[UnitDisk, HalfDisk, Polygon, ExteriorMap]


def _signed_area(verts) -> mpf:
    n = len(verts)
    acc = mpf(0)
    for i in range(n):
        a, c = verts[i], verts[(i + 1) % n]
        acc += a.real * c.imag - c.real * a.imag
    return acc / 2


def _is_simple_closed(pts) -> bool:
    from shapely.geometry import LinearRing
    return LinearRing(pts).is_simple


def square() -> Polygon:
    """The canonical square with vertices ``1, i, -1, -i``."""
    return Polygon((1, 1j, -1, -1j), tag="square")


def hypocycloid(m: int) -> ExteriorMap:
    """Symmetric ``m``-cusped hypocycloid, ``Psi(w) = w + 1/((m-1) w**(m-1))``."""
    if m < 3:
        raise DomainError("hypocycloid needs m >= 3")
    psi = LaurentSeries.from_terms({1: 1, 1 - m: mpf(1) / (m - 1)})
    return ExteriorMap(psi, tag=f"hypocycloid:{m}")


def ellipse(c) -> ExteriorMap:
    """Ellipse traced by ``Psi(w) = w + c/w``, ``|c| < 1``."""
    c = to_complex(c)
    if abs(c) >= 1:
        raise DomainError("ellipse parameter must satisfy |c| < 1")
    return ExteriorMap(LaurentSeries.from_terms({1: 1, -1: c}), tag=f"ellipse:{mpmath.nstr(c.real, 15) if c.imag == 0 else c}")


def from_name(name: str) -> Domain:
    """Resolve ``unit_disk``, ``half_disk``, ``square``, ``hypocycloid:m`` or ``ellipse:c``."""
    key, _, arg = name.partition(":")
    if key == "unit_disk" and not arg:
        return UnitDisk()
    if key == "half_disk" and not arg:
        return HalfDisk()
    if key == "square" and not arg:
        return square()
    if key == "hypocycloid" and arg:
        return hypocycloid(int(arg))
    if key == "ellipse" and arg:
        return ellipse(mpmath.mpmathify(arg))
    raise DomainError(f"unknown builtin {name!r}")


def from_json(obj: dict) -> Domain:
    """Build a domain from its JSON description."""
    try:
        kind = obj["type"]
        if kind == "unit_disk":
            return UnitDisk()
        if kind == "half_disk":
            return HalfDisk()
        if kind == "polygon":
            return Polygon(tuple(to_complex(v) for v in obj["vertices"]))
        if kind == "exterior_map":
            terms = {1: to_complex(obj["b"]), 0: to_complex(obj.get("b0", 0))}
            for k, re, im in obj.get("bk", []):
                terms[-int(k)] = to_complex((re, im))
            return ExteriorMap(LaurentSeries.from_terms(terms))
    except DomainError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(str(exc)) from exc
    raise DomainError(f"unknown type {obj.get('type')!r}")


def _pair(c) -> list:
    return [float(c.real), float(c.imag)]


def to_json(d: Domain) -> dict:
    if isinstance(d, UnitDisk):
        return {"type": "unit_disk"}
    if isinstance(d, HalfDisk):
        return {"type": "half_disk"}
    if isinstance(d, Polygon):
        return {"type": "polygon", "vertices": [_pair(v) for v in d.vertices]}
    if isinstance(d, ExteriorMap):
        terms = d.psi.terms()
        return {"type": "exterior_map", "b": _pair(terms.get(1, 0)),
                "b0": _pair(d.psi.coeff(0)),
                "bk": [[-j] + _pair(c) for j, c in sorted(terms.items(), reverse=True) if j < 0]}
    raise DomainError(type(d).__name__)


# ---------------------------------------------------------------- moments

def _check(d):
    if not isinstance(d, (UnitDisk, HalfDisk, Polygon, ExteriorMap)):
        raise DomainError(type(d).__name__)


def moment(d: Domain, m: int, k: int) -> mpc:
    """Exact complex moment ``mu[m, k]`` of ``d``."""
    _check(d)
    if m < 0 or k < 0:
        raise ValueError("moment indices must be nonnegative")
    if isinstance(d, UnitDisk):
        return mpc(mpmath.pi / (m + 1)) if m == k else mpc(0)
    if isinstance(d, HalfDisk):
        return _half_disk_angular(m - k) / (m + k + 2)
    if isinstance(d, Polygon):
        total = mpc(0)
        for a, c in d.edges():
            total += _edge_integral_binomial(a, c, m, k + 1)
        return total / (2j * (k + 1))
    return _trapezoid_moment(d, m, k)


def _half_disk_angular(dd: int) -> mpc:
    # integral of e^{i dd theta} over [0, pi]
    if dd == 0:
        return mpc(mpmath.pi)
    return mpc((-1) ** dd - 1) / mpc(0, dd)


def _edge_integral_binomial(a, c, m: int, K: int) -> mpc:
    """Integral of ``z**m conj(z)**K dz`` along the segment ``a -> c``."""
    h = c - a
    ac, hc = a.conjugate(), h.conjugate()
    apow = [a ** (m - i) for i in range(m + 1)]
    acpow = [ac ** (K - j) for j in range(K + 1)]
    total = mpc(0)
    for i in range(m + 1):
        hi = mpmath.binomial(m, i) * apow[i] * h ** i
        for j in range(K + 1):
            total += hi * mpmath.binomial(K, j) * acpow[j] * hc ** j / (i + j + 1)
    return h * total


def _edge_table(a, c, n: int):
    """
    ``J[K][m]`` = integral of ``z**m conj(z)**K dz`` along ``a -> c`` for
    ``K <= n + 1`` and ``m <= n``, from the integration-by-parts recurrence

        (m+1) J(m, K) = c**(m+1) conj(c)**K - a**(m+1) conj(a)**K - K r J(m+1, K-1)

    with ``r = conj(h)/h`` and ``h = c - a``.
    """
    h = c - a
    r = h.conjugate() / h
    top = 2 * n + 2
    cp, ap = [mpc(1)], [mpc(1)]
    for _ in range(top + 1):
        cp.append(cp[-1] * c)
        ap.append(ap[-1] * a)
    ccp = [x.conjugate() for x in cp]
    acp = [x.conjugate() for x in ap]
    prev = [(cp[m + 1] - ap[m + 1]) / (m + 1) for m in range(top)]
    table = [prev]
    for K in range(1, n + 2):
        cur = []
        for m in range(top - K):
            val = cp[m + 1] * ccp[K] - ap[m + 1] * acp[K] - K * r * prev[m + 1]
            cur.append(val / (m + 1))
        table.append(cur)
        prev = cur
    return table


def _trapezoid_moment(d: ExteriorMap, m: int, k: int) -> mpc:
    # trapezoid rule on the unit circle, exact for the trigonometric polynomial integrand
    N = (m + k + 2) * d.span + 8
    psi = d.psi
    acc = mpc(0)
    for q in range(N):
        w = mpmath.expjpi(mpf(2 * q) / N)
        z = psi(w)
        acc += z ** m * z.conjugate() ** (k + 1) * psi.derivative_at(w) * w
    return mpmath.pi * acc / (N * (k + 1))


def _rotation_order(psi: LaurentSeries) -> int:
    """Largest r with Psi(e^{2 pi i/r} w) = e^{2 pi i/r} Psi(w)."""
    r = 0
    for j in psi.terms():
        r = math.gcd(r, 1 - j)
    return r or 1


@dataclass(frozen=True)
class MomentMatrix:
    """Hermitian section ``[mu[m, k]]`` for ``0 <= m, k <= n``."""

    n: int
    entries: tuple
    domain_tag: str = ""

    def __post_init__(self):
        cols = tuple(tuple(self.entries[m][k] for m in range(self.n + 1))
                     for k in range(self.n + 1))
        object.__setattr__(self, "columns", cols)

    def __getitem__(self, idx) -> mpc:
        m, k = idx
        return self.entries[m][k]

    def truncate(self, n: int) -> "MomentMatrix":
        if n > self.n:
            raise ValueError("cannot enlarge a moment matrix")
        return MomentMatrix(n, tuple(row[:n + 1] for row in self.entries[:n + 1]),
                            self.domain_tag)


def moment_matrix(d: Domain, n: int) -> MomentMatrix:
    """Moment section of size ``(n+1) x (n+1)``, Hermitian by construction."""
    _check(d)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if isinstance(d, Polygon):
        tables = [_edge_table(a, c, n) for a, c in d.edges()]

        def entry(m, k):
            return sum((t[k + 1][m] for t in tables), mpc(0)) / (2j * (k + 1))
    elif isinstance(d, ExteriorMap):
        entry = _exterior_entries(d, n)
    else:
        def entry(m, k):
            return moment(d, m, k)
    rows = [[None] * (n + 1) for _ in range(n + 1)]
    for m in range(n + 1):
        for k in range(m + 1):
            v = entry(m, k)
            if m == k:
                v = mpc(v.real, 0)
            rows[m][k] = v
            rows[k][m] = v.conjugate()
    return MomentMatrix(n, tuple(tuple(r) for r in rows), d.tag)


def _exterior_entries(d: ExteriorMap, n: int):
    """
    Moments from the coefficients of powers of Psi:

        mu[m, k] = pi/((m+1)(k+1)) * sum_l l * B[m+1]_l * conj(B[k+1]_l)

    where ``B[j]_l`` is the coefficient of ``w**l`` in ``Psi(w)**j``.
    """
    psi = d.psi
    r = _rotation_order(psi)
    powers = [LaurentSeries.from_terms({0: 1})]
    for _ in range(n + 1):
        powers.append(powers[-1] * psi)
    # dense, top-down arrays; B[j] starts at power j (leading coefficient b**j)
    dense = [[p.coeff(j - i) for i in range(j - p.lowest_power + 1)] if j else [mpc(1)]
             for j, p in enumerate(powers)]
    weighted = [[(j - i) * c for i, c in enumerate(row)] for j, row in enumerate(dense)]
    span = d.span

    def entry(m, k):
        if (m - k) % r:
            return mpc(0)
        j1, j2 = m + 1, k + 1
        # common powers run from j2 down to -j2*(span-1)
        length = j2 * span + 1
        a = weighted[j1][j1 - j2: j1 - j2 + length: r]
        b = dense[j2][0:length:r]
        return mpmath.pi * mpmath.fdot(a, b, conjugate=True) / (j1 * j2)

    return entry


def area(d: Domain) -> mpf:
    return moment(d, 0, 0).real


# ---------------------------------------------------------- geometry & maps

def boundary_point(d: Domain, t) -> mpc:
    """Point of the boundary at parameter ``t`` in ``[0, 1)``, positively oriented."""
    _check(d)
    t = mpmath.mpf(t)
    if isinstance(d, UnitDisk):
        return mpmath.expjpi(2 * t)
    if isinstance(d, ExteriorMap):
        return d.psi(mpmath.expjpi(2 * t))
    if isinstance(d, HalfDisk):
        total = mpmath.pi + 2
        s = t * total
        if s <= mpmath.pi:
            return mpmath.expj(s)
        return mpc(-1 + (s - mpmath.pi), 0)
    edges = d.edges()
    lengths = [abs(c - a) for a, c in edges]
    s = t * sum(lengths)
    for (a, c), ell in zip(edges, lengths):
        if s <= ell:
            return a + (c - a) * (s / ell)
        s -= ell
    return edges[-1][1]


def boundary_samples_of(d: Domain, count: int) -> list:
    return [boundary_point(d, mpf(i) / count) for i in range(count)]


def _is_canonical_square(d: Polygon) -> bool:
    target = {mpc(1), mpc(1j), mpc(-1), mpc(-1j)}
    return len(d.vertices) == 4 and set(d.vertices) == target


def exact_capacity(d: Domain):
    """Known logarithmic capacity of ``d``, or ``None`` when unknown."""
    _check(d)
    if isinstance(d, UnitDisk):
        return mpf(1)
    if isinstance(d, HalfDisk):
        return 4 / (3 * mpmath.sqrt(3))
    if isinstance(d, ExteriorMap):
        return abs(d.b)
    if _is_canonical_square(d):
        return square_capacity()
    return None


def square_capacity() -> mpf:
    # side sqrt(2); the unit-side square has capacity Gamma(1/4)^2 / (4 pi^{3/2})
    return mpmath.sqrt(2) * mpmath.gamma(mpf(1) / 4) ** 2 / (4 * mpmath.pi ** mpf(1.5))


def square_psi_coefficient(n: int) -> mpf:
    """Coefficient ``b_n`` of ``w**-n`` in the exterior map of the canonical square."""
    if n < 1 or n % 4 != 3:
        return mpf(0)
    k = (n + 1) // 4
    return square_capacity() * (-1) ** (k + 1) * mpmath.binomial(mpf(1) / 2, k) / n


def exact_psi(d: Domain, count: int = 32):
    """Exterior map ``Psi`` where known (``count`` terms for infinite series), else ``None``."""
    _check(d)
    if isinstance(d, UnitDisk):
        return LaurentSeries.from_terms({1: 1})
    if isinstance(d, ExteriorMap):
        return d.psi
    if isinstance(d, Polygon) and _is_canonical_square(d):
        coeffs = [square_capacity(), mpf(0)] + [square_psi_coefficient(n) for n in range(1, count - 1)]
        return LaurentSeries(1, coeffs[:count])
    return None


def phi_eval(d: Domain, z, maxiter: int = 200) -> mpc:
    """Exterior conformal map ``Phi(z)``, solving ``Psi(w) = z`` by Newton's method."""
    z = to_complex(z)
    if isinstance(d, UnitDisk):
        if abs(z) <= 1:
            raise ValueError("inversion failed: point not exterior")
        return z
    if not isinstance(d, ExteriorMap):
        raise ValueError("inversion failed: no exterior map for this domain")
    psi = d.psi
    w = (z - psi.coeff(0)) / d.b
    tol = mpf(10) ** (-(mpmath.mp.dps - 10))
    for _ in range(maxiter):
        f = psi(w) - z
        if abs(f) < tol:
            break
        w = w - f / psi.derivative_at(w)
    else:
        raise ValueError("inversion failed")
    if abs(w) <= 1:
        raise ValueError("inversion failed: preimage not exterior to the unit circle")
    return w


def phi_derivative(d: Domain, z, w=None) -> mpc:
    """``Phi'(z) = 1 / Psi'(Phi(z))``."""
    if isinstance(d, UnitDisk):
        return mpc(1)
    w = phi_eval(d, z) if w is None else w
    return 1 / d.psi.derivative_at(w)


def sup_norm_on_boundary(d: Domain) -> mpf:
    """``max |z|`` over the boundary."""
    _check(d)
    if isinstance(d, (UnitDisk, HalfDisk)):
        return mpf(1)
    if isinstance(d, Polygon):
        return max(abs(v) for v in d.vertices)
    psi = d.psi
    count = 4096
    vals = [abs(psi(mpmath.expjpi(mpf(2 * i) / count))) for i in range(count)]
    i = max(range(count), key=lambda j: vals[j])
    f = lambda t: -abs(psi(mpmath.expj(t)))
    h = 2 * mpmath.pi / count
    return -_golden_min(f, (i - 1) * h, (i + 1) * h)


def _golden_min(f, a, b, iters: int = 400):
    g = (mpmath.sqrt(5) - 1) / 2
    c, e = b - g * (b - a), a + g * (b - a)
    fc, fe = f(c), f(e)
    tol = mpf(10) ** (-(mpmath.mp.dps // 2))
    for _ in range(iters):
        if b - a < tol:
            break
        if fc < fe:
            b, e, fe = e, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + g * (b - a)
            fe = f(e)
    return min(fc, fe)


# ------------------------------------------------------------ convex hull

def _convex_hull(points) -> list:
    """Counter-clockwise convex hull vertices (mpc) of ``points``."""
    from scipy.spatial import ConvexHull
    arr = np.array([[float(p.real), float(p.imag)] for p in points])
    hull = ConvexHull(arr)
    return [points[i] for i in hull.vertices]  # qhull returns 2-D hulls counter-clockwise


def _segment_distance(p, a, c) -> mpf:
    h = c - a
    t = ((p - a) * h.conjugate()).real / abs(h) ** 2
    t = min(max(t, mpf(0)), mpf(1))
    return abs(p - (a + t * h))


def _convex_polygon_signed_distance(p, hull) -> mpf:
    n = len(hull)
    outward = []
    for i in range(n):
        a, c = hull[i], hull[(i + 1) % n]
        h = c - a
        # positive to the right of a counter-clockwise edge, i.e. outside
        outward.append(((p - a) * h.conjugate()).imag / abs(h) * -1)
    worst = max(outward)
    if worst <= 0:
        return worst
    return min(_segment_distance(p, hull[i], hull[(i + 1) % n]) for i in range(n))


def hull_distance(p, d: Domain, samples: int = 2048) -> mpf:
    """
    Signed distance from ``p`` to the boundary of the convex hull of ``d``:
    negative inside, positive outside.
    """
    p = to_complex(p)
    if isinstance(d, UnitDisk):
        return abs(p) - 1
    if isinstance(d, HalfDisk):
        inside = p.imag >= 0 and abs(p) <= 1
        if inside:
            return -min(p.imag, 1 - abs(p))
        arc = abs(abs(p) - 1) if p.imag >= 0 else min(abs(p - 1), abs(p + 1))
        return min(arc, _segment_distance(p, mpc(-1), mpc(1)))
    if isinstance(d, Polygon):
        hull = _convex_hull(list(d.vertices))
    else:
        hull = _convex_hull(boundary_samples_of(d, samples))
    return _convex_polygon_signed_distance(p, hull)
