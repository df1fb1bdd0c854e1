import math

import mpmath
import numpy as np
import pytest
from mpmath import mpc, mpf
from scipy import integrate, optimize

from bergman import domains as D
from bergman.numerics import LaurentSeries

BUILTINS = ["unit_disk", "half_disk", "square", "hypocycloid:3", "ellipse:0.25"]


def close(a, b, tol):
    return abs(a - b) <= tol


# ---------------------------------------------------------------- oracle

def _radius_function(name):
    """Boundary in polar form ``r = R(theta)`` about 0 plus the theta range and kinks."""
    if name == "unit_disk":
        return (lambda th: 1.0), (0.0, 2 * math.pi), []
    if name == "half_disk":
        return (lambda th: 1.0), (0.0, math.pi), []
    if name == "square":
        return (lambda th: 1.0 / (abs(math.cos(th)) + abs(math.sin(th)))), (0.0, 2 * math.pi), \
            [k * math.pi / 2 for k in range(1, 4)]
    if name == "ellipse:0.25":
        a, b = 1.25, 0.75
        return (lambda th: 1.0 / math.hypot(math.cos(th) / a, math.sin(th) / b)), (0.0, 2 * math.pi), []
    if name == "hypocycloid:3":
        def curve(t):
            w = complex(math.cos(t), math.sin(t))
            return w + 1 / (2 * w * w)

        def arg_unwrapped(t):
            # the deltoid is star-shaped about 0 and its argument increases with t
            z = curve(t)
            base = math.atan2(z.imag, z.real)
            # shift by the sector index so the argument is continuous
            return base + 2 * math.pi * round((t - base) / (2 * math.pi))

        def R(th):
            if th in (0.0, 2 * math.pi):
                return abs(curve(0.0))
            t = optimize.brentq(lambda t: arg_unwrapped(t) - th, 0.0, 2 * math.pi, xtol=1e-15, rtol=1e-15)
            return abs(curve(t))

        return R, (0.0, 2 * math.pi), [2 * math.pi / 3, 4 * math.pi / 3]
    raise KeyError(name)


def quadrature_moments(name, top=6):
    """Area moments by nested 2-D quadrature: adaptive in theta, Gauss-Legendre in r."""
    R, (lo, hi), kinks = _radius_function(name)
    x, w = np.polynomial.legendre.leggauss(16)
    u, wu = (x + 1) / 2, w / 2
    pairs = [(m, k) for m in range(top + 1) for k in range(top + 1)]

    def inner(th):
        r = R(th) * u
        z = r * np.exp(1j * th)
        jac = r * R(th) * wu
        return np.array([np.sum(z ** m * np.conj(z) ** k * jac) for m, k in pairs])

    pts = [lo, *kinks, hi]
    total = np.zeros(len(pairs), dtype=complex)
    n = len(pairs)
    for a, b in zip(pts[:-1], pts[1:]):
        val, _ = integrate.quad_vec(lambda t: inner(t).view(float), a, b, epsabs=1e-14, epsrel=1e-13)
        total += val[0::2] + 1j * val[1::2]
    assert len(total) == n
    return dict(zip(pairs, total))


@pytest.mark.parametrize("name", BUILTINS)
def test_moments_match_quadrature_oracle(name):
    d = D.from_name(name)
    oracle = quadrature_moments(name)
    scale = abs(oracle[(0, 0)])
    for (m, k), q in oracle.items():
        exact = complex(D.moment(d, m, k))
        assert abs(exact - q) <= 1e-10 * max(abs(q), 1e-3 * scale), (m, k, exact, q)


# ----------------------------------------------------------- closed forms

def test_named_examples():
    assert close(D.moment(D.UnitDisk(), 2, 2), mpmath.pi / 3, mpf(10) ** -55)
    assert close(D.moment(D.HalfDisk(), 0, 0), mpmath.pi / 2, mpf(10) ** -55)
    assert close(D.moment(D.HalfDisk(), 1, 0), mpc(0, 2) / 3, mpf(10) ** -55)
    assert D.moment(D.square(), 0, 0) == 2
    assert close(D.moment(D.hypocycloid(3), 0, 0), mpmath.pi / 2, mpf(10) ** -55)


def test_small_matrices():
    M = D.moment_matrix(D.UnitDisk(), 2)
    for m in range(3):
        for k in range(3):
            assert close(M[m, k], mpmath.pi / (m + 1) if m == k else 0, mpf(10) ** -55)
    S = D.moment_matrix(D.square(), 1)
    assert S[0, 0] == 2 and S[1, 0] == 0
    assert close(S[1, 1], mpf(2) / 3, mpf(10) ** -55)
    H = D.moment_matrix(D.HalfDisk(), 1)
    assert close(H[0, 1], mpc(0, -2) / 3, mpf(10) ** -55)
    assert close(H[1, 1], mpmath.pi / 4, mpf(10) ** -55)


@pytest.mark.parametrize("name", BUILTINS)
def test_matrix_hermitian_positive_definite(name):
    M = D.moment_matrix(D.from_name(name), 10)
    A = mpmath.matrix([[M[m, k] for k in range(11)] for m in range(11)])
    for m in range(11):
        assert M[m, m].imag == 0
        for k in range(11):
            assert M[k, m] == mpmath.conj(M[m, k])
    mpmath.cholesky(A)


def test_polygon_routes_agree():
    d = D.Polygon((mpc(0, 0), mpc(2, 0), mpc(3, 1), mpc(1, 2), mpc(-1, 1)))
    M = D.moment_matrix(d, 12)
    for m in range(13):
        for k in range(13):
            assert close(M[m, k], D.moment(d, m, k), mpf(10) ** -40 * (1 + abs(M[m, k])))


@pytest.mark.parametrize("name", ["hypocycloid:3", "ellipse:0.25", "hypocycloid:5"])
def test_exterior_routes_agree(name):
    d = D.from_name(name)
    M = D.moment_matrix(d, 12)
    for m in range(13):
        for k in range(13):
            assert close(M[m, k], D.moment(d, m, k), mpf(10) ** -50)


def test_polygon_similarity_covariance():
    base = D.Polygon((mpc(0, 0), mpc(2, 0), mpc(1, 1), mpc(0, 2)))
    rho = mpf(3) / 2
    scaled = D.Polygon(tuple(rho * v for v in base.vertices))
    for m in range(5):
        for k in range(5):
            expect = rho ** (m + k + 2) * D.moment(base, m, k)
            assert close(D.moment(scaled, m, k), expect, mpf(10) ** -50 * (1 + abs(expect)))


def test_invalid_domains():
    with pytest.raises(D.DomainError, match="invalid domain"):
        D.Polygon((mpc(0), mpc(1), mpc(0, 1), mpc(1, 1)))  # self-intersecting
    with pytest.raises(D.DomainError, match="invalid domain"):
        D.Polygon((mpc(0), mpc(0, 1), mpc(1)))  # clockwise
    with pytest.raises(D.DomainError):
        D.Polygon((mpc(0), mpc(1)))
    with pytest.raises(D.DomainError):
        D.ExteriorMap(LaurentSeries.from_terms({1: 1, -1: 2}))  # not a Jordan curve
    with pytest.raises(D.DomainError):
        D.from_name("pentagon")


def test_json_round_trip():
    for name in BUILTINS:
        d = D.from_name(name)
        again = D.from_json(D.to_json(d))
        assert D.moment(again, 3, 1) == D.moment(d, 3, 1)
    obj = {"type": "exterior_map", "b": 1, "b0": 0, "bk": [[1, 0.25, 0]]}
    assert D.from_json(obj).psi.coeff(-1) == mpf("0.25")


def test_boundary_points():
    assert close(D.boundary_point(D.UnitDisk(), mpf(1) / 4), mpc(0, 1), mpf(10) ** -55)
    assert D.boundary_point(D.square(), 0) == 1
    assert close(D.boundary_point(D.hypocycloid(3), 0), mpf(3) / 2, mpf(10) ** -55)


def test_capacities_and_maps():
    assert D.exact_capacity(D.UnitDisk()) == 1
    assert mpmath.nstr(D.exact_capacity(D.square()), 15) == "0.834626841674073"
    assert close(D.exact_capacity(D.HalfDisk()), 4 / (3 * mpmath.sqrt(3)), mpf(10) ** -55)
    assert D.exact_capacity(D.Polygon((mpc(0), mpc(1), mpc(1, 1), mpc(0, 1)))) is None
    psi = D.exact_psi(D.square())
    cap = D.square_capacity()
    assert close(psi.coeff(-3), cap / 6, mpf(10) ** -55)
    assert psi.coeff(-2) == 0 and psi.coeff(-1) == 0
    assert D.exact_psi(D.UnitDisk()).terms() == {1: 1}
    assert D.exact_psi(D.HalfDisk()) is None


def test_phi_eval_inverts_psi():
    assert D.phi_eval(D.UnitDisk(), 2) == 2
    e = D.ellipse(mpf(1) / 4)
    assert close(D.phi_eval(e, mpf("2.125")), 2, mpf(10) ** -50)
    h = D.hypocycloid(3)
    w = D.phi_eval(h, mpf("1.6"))
    assert abs(w) > 1 and abs(h.psi(w) - mpf("1.6")) < mpf(10) ** -30
    for d in (e, h):
        for j in range(8):
            w0 = mpf("1.3") * mpmath.expjpi(mpf(j) / 4 + mpf("0.1"))
            assert close(D.phi_eval(d, d.psi(w0)), w0, mpf(10) ** -45)


def test_sup_norms():
    assert D.sup_norm_on_boundary(D.square()) == 1
    assert D.sup_norm_on_boundary(D.UnitDisk()) == 1
    assert close(D.sup_norm_on_boundary(D.hypocycloid(3)), mpf(3) / 2, mpf(10) ** -20)


def test_hull_distance_signs():
    assert D.hull_distance(mpc(0), D.UnitDisk()) == -1
    assert close(D.hull_distance(mpc(2), D.square()), 1, mpf(10) ** -50)
    assert D.hull_distance(mpc(0, mpf("0.5")), D.HalfDisk()) < 0
    assert D.hull_distance(mpc(0, -1), D.HalfDisk()) > 0
