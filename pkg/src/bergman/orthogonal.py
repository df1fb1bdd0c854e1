"""
Bergman orthonormal polynomials from a moment matrix.

Two Gram-Schmidt variants are provided.  The *conventional* one
orthonormalizes the monomials ``1, z, z**2, ...``; the *Arnoldi* one builds
``p_k`` from ``z * p_{k-1}``, which keeps the instability indicator bounded.
All inner products go through the moment matrix:

    <p, q> = sum_{m,k} p_m conj(q_k) mu[m, k]
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
from mpmath import mpc, mpf

from .domains import MomentMatrix
from .numerics import Poly

__all__ = [
    "PrecisionExhausted", "OrthonormalBasis", "inner_product", "poly_norm",
    "build_basis", "instability_indicator", "instability_closed_form",
    "orthonormality_residual", "ARNOLDI", "CONVENTIONAL",
]

ARNOLDI = "arnoldi"
CONVENTIONAL = "conventional"


class PrecisionExhausted(ArithmeticError):
    """The Gram-Schmidt residual fell below the breakdown threshold."""

    def __init__(self, step: int):
        super().__init__(f"precision exhausted at step {step}")
        self.step = step


def _coeffs(p) -> list:
    return list(p.coeffs) if isinstance(p, Poly) else list(p)


def _row_products(M: MomentMatrix, c: list, width: int | None = None) -> list:
    """``u[k] = sum_m c[m] mu[m, k]`` for ``k < width`` (default ``len(c)``)."""
    d = len(c)
    width = d if width is None else width
    if max(d, width) - 1 > M.n:
        raise ValueError("moment matrix too small")
    return [mpmath.fdot(c, col[:d]) for col in M.columns[:width]]


def _ip(u: list, q: list) -> mpc:
    return mpmath.fdot(u[:len(q)], q, conjugate=True)


def inner_product(M: MomentMatrix, p, q) -> mpc:
    """``<p, q>`` over the domain whose moments are ``M``."""
    pc, qc = _coeffs(p), _coeffs(q)
    if max(len(pc), len(qc)) - 1 > M.n:
        raise ValueError("moment matrix too small")
    if not pc or not qc:
        return mpc(0)
    return _ip(_row_products(M, pc, len(qc)), qc)


def poly_norm(M: MomentMatrix, p) -> mpf:
    return mpmath.sqrt(max(inner_product(M, p, p).real, mpf(0)))


@dataclass(frozen=True)
class OrthonormalBasis:
    """Orthonormal ``p_0 .. p_n``; ``lambdas[k]`` is the leading coefficient of ``p_k``."""

    polys: tuple
    lambdas: tuple
    method: str
    domain_tag: str = ""
    # squared norm of the start vector and of its residual, per step
    start_norms: tuple = field(default=(), repr=False)
    residual_norms: tuple = field(default=(), repr=False)

    @property
    def n(self) -> int:
        return len(self.polys) - 1

    def __getitem__(self, k: int) -> Poly:
        return self.polys[k]


def _orthogonalize(M, P, basis_coeffs):
    """One classical GS pass of ``P`` against ``basis_coeffs``; returns residual."""
    u = _row_products(M, P, len(basis_coeffs[-1]))
    r = list(P)
    for q in basis_coeffs:
        c = _ip(u, q)
        for i, x in enumerate(q):
            r[i] -= c * x
    return r


def build_basis(M: MomentMatrix, n: int, method: str = ARNOLDI) -> OrthonormalBasis:
    """
    Orthonormal polynomials ``p_0 .. p_n`` by Arnoldi or conventional GS.

    Each step runs classical Gram-Schmidt followed by one reorthogonalization
    pass.  Raises :class:`PrecisionExhausted` when the residual norm drops to
    ``10**-(2*dps - 40)`` relative to the start vector.
    """
    if method not in (ARNOLDI, CONVENTIONAL):
        raise ValueError(f"unknown method {method!r}")
    if n > M.n:
        raise ValueError("moment matrix too small")
    dps = mpmath.mp.dps
    threshold = mpf(10) ** (-(2 * dps - 40))
    mu00 = M[0, 0].real
    if mu00 <= 0:
        raise PrecisionExhausted(0)
    p0 = [mpc(1 / mpmath.sqrt(mu00))]
    coeffs, lambdas = [p0], [p0[0].real]
    starts, residuals = [mu00], [mu00]
    for k in range(1, n + 1):
        if method == ARNOLDI:
            P = [mpc(0)] + coeffs[-1]
        else:
            P = [mpc(0)] * k + [mpc(1)]
        start = _ip(_row_products(M, P), P).real
        r = _orthogonalize(M, P, coeffs)
        r = _orthogonalize(M, r, coeffs)
        norm2 = _ip(_row_products(M, r), r).real
        if not norm2 > threshold * start:
            raise PrecisionExhausted(k)
        lead = r[-1]
        # rotate so the leading coefficient is real and positive
        scale = (abs(lead) / lead) / mpmath.sqrt(norm2)
        pk = [x * scale for x in r]
        pk[-1] = mpc(pk[-1].real, 0)
        coeffs.append(pk)
        lambdas.append(pk[-1].real)
        starts.append(start)
        residuals.append(norm2)
    return OrthonormalBasis(tuple(Poly(c) for c in coeffs), tuple(lambdas), method,
                            M.domain_tag, tuple(starts), tuple(residuals))


def _start_vector(basis: OrthonormalBasis, method: str, k: int) -> Poly:
    if method == ARNOLDI:
        return basis.polys[k - 1].shift(1)
    return Poly.monomial(k)


def instability_indicator(M: MomentMatrix, basis: OrthonormalBasis, method: str, k: int) -> mpf:
    """
    ``I_k = ||P_k||**2 / dist(P_k, span{p_0..p_{k-1}})**2`` with ``P_k`` the
    step-``k`` start vector (``z**k`` or ``z p_{k-1}``), the distance taken as
    the norm of the residual after full orthogonal projection.
    """
    if k < 1 or k > basis.n:
        raise ValueError("step out of range")
    P = list(_start_vector(basis, method, k).coeffs)
    prev = [list(p.coeffs) for p in basis.polys[:k]]
    r = _orthogonalize(M, P, prev)
    r = _orthogonalize(M, r, prev)
    dist2 = inner_product(M, r, r).real
    return inner_product(M, P, P).real / dist2


def instability_closed_form(M: MomentMatrix, basis: OrthonormalBasis, method: str, k: int) -> mpf:
    """``mu[k,k] lambda_k**2`` (conventional) or ``||z p_{k-1}||**2 lambda_k**2 / lambda_{k-1}**2``."""
    lam = basis.lambdas
    if method == CONVENTIONAL:
        return M[k, k].real * lam[k] ** 2
    P = _start_vector(basis, ARNOLDI, k)
    return inner_product(M, P, P).real * lam[k] ** 2 / lam[k - 1] ** 2


def orthonormality_residual(M: MomentMatrix, basis: OrthonormalBasis) -> mpf:
    """``max |<p_j, p_k> - delta_jk|`` over the basis."""
    worst = mpf(0)
    coeffs = [list(p.coeffs) for p in basis.polys]
    for j, pj in enumerate(coeffs):
        u = _row_products(M, pj, len(coeffs[-1]))
        for k in range(j, len(coeffs)):
            v = _ip(u, coeffs[k]) - (1 if j == k else 0)
            worst = max(worst, abs(v))
    return worst
