import mpmath
import pytest
from mpmath import mpc, mpf

from bergman import domains as D
from bergman.numerics import LaurentSeries, TruncationError, laurent_revert
from bergman.orthogonal import build_basis
from bergman.reconstruct import (RecoveredMap, boundary_csv, boundary_samples, capacity_estimate,
                                 capacity_rows, curve_distance, phi_approx, recover,
                                 recovered_map_json, revert_series)


@pytest.fixture(scope="module")
def square_basis():
    with mpmath.workdps(80):
        yield build_basis(D.moment_matrix(D.square(), 20), 20)


def test_disk_capacity_and_phi():
    B = build_basis(D.moment_matrix(D.UnitDisk(), 8), 8)
    for n in range(1, 9):
        b, t = capacity_estimate(B, n, 1)
        assert abs(b - 1) < mpf(10) ** -50 and abs(t) < mpf(10) ** -50
    phi = phi_approx(B, 6)
    assert abs(phi.coeff(1) - 1) < mpf(10) ** -50
    assert all(abs(phi.coeff(j)) < mpf(10) ** -50 for j in range(0, -7, -1))


def test_capacity_estimate_without_reference(square_basis):
    b, t = capacity_estimate(square_basis, 10)
    assert t is None and b > D.square_capacity()


def test_square_phi_identity(square_basis):
    b, _ = capacity_estimate(square_basis, 16)
    phi = phi_approx(square_basis, 16)
    assert abs(phi.coeff(1) - 1 / b) < mpf(10) ** -50


def test_ellipse_phi_approaches_exact():
    e = D.ellipse(mpf(1) / 4)
    B = build_basis(D.moment_matrix(e, 8), 8)
    phi = phi_approx(B, 8)
    exact = laurent_revert(e.psi, 10)
    assert abs(phi.coeff(1) - exact.coeff(1)) < 1e-3
    assert abs(phi.coeff(0) - exact.coeff(0)) < 1e-3


def test_revert_identity_and_ellipse():
    ident = revert_series(LaurentSeries.from_terms({1: 1}), 4)
    assert ident.b == 1 and ident.b0 == 0 and all(c == 0 for c in ident.bk)
    c = mpf(1) / 4
    phi = laurent_revert(D.ellipse(c).psi, 12)
    rmap = revert_series(phi, 10)
    tol = mpf(10) ** -(mpmath.mp.dps // 2)
    assert abs(rmap.b - 1) < tol and abs(rmap.bk[0] - c) < tol
    assert all(abs(x) < tol for x in rmap.bk[1:])


def test_revert_needs_enough_terms():
    phi = LaurentSeries(1, [mpf(1), 0, mpf("0.1")])
    with pytest.raises(TruncationError, match="truncation too shallow"):
        revert_series(phi, 5)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_reversion_round_trip_hypocycloid(m):
    psi = D.hypocycloid(m).psi
    n = 14
    rmap = revert_series(laurent_revert(psi, n + 2), n)
    tol = mpf(10) ** -(mpmath.mp.dps // 2)
    for k in range(1, n + 1):
        assert abs(rmap.bk[k - 1] - psi.coeff(-k)) < tol


def test_composition_is_identity_to_truncation(square_basis):
    n = 12
    phi = phi_approx(square_basis, n)
    rmap = revert_series(phi, n)
    # Psi_n(Phi_n(z)) - z should be small at a point far from the square
    z = mpc(6, 2)
    assert abs(rmap(phi(z)) - z) < 1e-6


def test_boundary_samples_identity():
    rm = RecoveredMap(3, mpf(1), mpc(0), (mpc(0),) * 3)
    pts = boundary_samples(rm, 4)
    expected = [1, 1j, -1, -1j]
    assert all(abs(p - q) < mpf(10) ** -50 for p, q in zip(pts, expected))
    with pytest.raises(ValueError):
        boundary_samples(rm, 2)


def test_curve_distance_basics():
    pts = D.boundary_samples_of(D.UnitDisk(), 512)
    assert curve_distance(pts, D.UnitDisk(), 512) < 1e-12
    bigger = [1.1 * p for p in pts]
    assert abs(curve_distance(bigger, D.UnitDisk(), 2048) - 0.1) < 1e-3


def test_ellipse_recovery_close():
    e = D.ellipse(mpf(1) / 4)
    B = build_basis(D.moment_matrix(e, 3), 3)
    rmap = recover(B, 3)
    pts = boundary_samples(rmap, 256)
    true = [e.psi(mpmath.expjpi(mpf(2 * j) / 256)) for j in range(256)]
    assert max(abs(p - q) for p, q in zip(pts, true)) < 1e-2


def test_square_recovery_improves(square_basis):
    d = D.square()
    dist = {n: curve_distance(boundary_samples(recover(square_basis, n), 1024), d) for n in (8, 16)}
    assert dist[16] < dist[8]


def test_hypocycloid_recovery_improves():
    h = D.hypocycloid(3)
    B = build_basis(D.moment_matrix(h, 20), 20)
    dist = {n: curve_distance(boundary_samples(recover(B, n), 1024), h) for n in (10, 20)}
    assert dist[20] < dist[10]


def test_capacity_rows_slope(square_basis):
    rows = capacity_rows(square_basis, [10, 15, 20], D.square_capacity())
    assert rows[0].s is None
    assert all(r.t > 0 for r in rows)
    assert rows[1].s > 0
    assert rows[0].b > rows[1].b > rows[2].b


def test_emitters(square_basis):
    rm = recover(square_basis, 4)
    import json
    obj = json.loads(recovered_map_json(rm))
    assert obj["n"] == 4 and len(obj["bk"]) == 4 and len(obj["b0"]) == 2
    text = boundary_csv(rm, 8)
    lines = text.strip().split("\n")
    assert lines[0] == "t,re,im" and len(lines) == 9
