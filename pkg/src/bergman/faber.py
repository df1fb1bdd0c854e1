"""
Faber polynomials of a domain with known exterior map ``Psi``.

``F_n`` is the polynomial part of ``Phi(z)**n`` and ``G_n = F'_{n+1}/(n+1)``
(second kind) is the polynomial part of ``Phi**n Phi'``.  Together with the
Bergman polynomials they give the auxiliary polynomial
``q_{n-1} = G_n - gamma**(n+1)/lambda_n p_n`` and the decomposition of the
strong asymptotic error ``alpha_n = beta_n + eps_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import mpmath
from mpmath import mpc, mpf

from .domains import MomentMatrix
from .numerics import LaurentSeries, Poly, laurent_pow, laurent_revert
from .orthogonal import OrthonormalBasis, poly_norm

__all__ = [
    "FaberSet", "Decomposition", "faber_first_kind", "faber_by_laurent_power",
    "faber_second_kind", "faber_set", "q_poly", "beta_eps", "singular_parts",
]


def _check_psi(psi: LaurentSeries):
    if psi.top != 1 or psi.coeff(1) == 0:
        raise ValueError("degenerate map")
    if not psi.exact:
        raise ValueError("Psi must be a Laurent polynomial")


def faber_first_kind(psi: LaurentSeries, N: int) -> list:
    """
    ``F_0 .. F_N`` from the recurrence

        b F_{n+1} = (z - b_0) F_n - sum_{k=1}^{n} b_k F_{n-k} - n b_n.
    """
    _check_psi(psi)
    b, b0 = psi.coeff(1), psi.coeff(0)
    bk = [None] + [psi.coeff(-k) for k in range(1, N + 1)]
    F = [Poly([1])]
    z_minus_b0 = Poly([-b0, 1])
    for n in range(N):
        nxt = z_minus_b0 * F[n]
        for k in range(1, n + 1):
            if bk[k] != 0:
                nxt = nxt - F[n - k] * bk[k]
        if n >= 1 and bk[n] != 0:
            nxt = nxt - Poly([n * bk[n]])
        F.append(nxt * (1 / b))
    return F


def faber_by_laurent_power(psi: LaurentSeries, n: int, extra: int = 10) -> Poly:
    """Polynomial part of ``Phi**n`` with ``Phi`` obtained by reverting ``Psi``."""
    _check_psi(psi)
    if n == 0:
        return Poly([1])
    count = n + extra
    phi = laurent_revert(psi, count)
    return laurent_pow(phi, n, count).polynomial_part()


def faber_second_kind(F) -> list:
    """``G_n = F'_{n+1}/(n+1)`` for ``n = 0 .. len(F) - 2``."""
    return [F[n + 1].derivative() * (mpf(1) / (n + 1)) for n in range(len(F) - 1)]


@dataclass(frozen=True)
class FaberSet:
    F: tuple
    G2: tuple
    psi: LaurentSeries


def faber_set(psi: LaurentSeries, N: int) -> FaberSet:
    F = faber_first_kind(psi, N)
    return FaberSet(tuple(F), tuple(faber_second_kind(F)), psi)


def q_poly(G_n: Poly, p_n: Poly, gamma, lambda_n) -> Poly:
    """``q_{n-1} = G_n - gamma**(n+1)/lambda_n * p_n``, of degree at most ``n - 1``."""
    n = p_n.degree
    if G_n.degree != n:
        raise ValueError("G_n and p_n must have the same degree")
    q = G_n - p_n * (mpf(gamma) ** (n + 1) / lambda_n)
    lead = q.coeffs[n] if q.degree == n else mpc(0)
    tol = mpf(10) ** (-(mpmath.mp.dps - 20)) * max(abs(G_n.leading), 1)
    if abs(lead) > tol:
        raise ValueError("inconsistent gamma/lambda")
    return Poly(q.coeffs[:n])


class Decomposition(NamedTuple):
    """``alpha_n``, ``beta_n`` and ``eps_n = alpha_n - beta_n``.

    ``eps_from_norm`` is ``1 - (n+1)/pi ||G_n||**2``, an independent route to
    ``eps_n``; ``residual`` compares the two.
    """

    alpha: mpf
    beta: mpf
    eps: mpf
    eps_from_norm: mpf

    @property
    def residual(self) -> mpf:
        return abs(self.alpha - self.beta - self.eps_from_norm)


def beta_eps(M: MomentMatrix, basis: OrthonormalBasis, faber: FaberSet, gamma, n: int) -> Decomposition:
    from .asymptotics import alpha_n as _alpha

    gamma = mpf(gamma)
    lam = basis.lambdas[n]
    alpha = _alpha(lam, gamma, n)
    G = faber.G2[n]
    q = q_poly(G, basis.polys[n], gamma, lam)
    beta = (n + 1) / mpmath.pi * poly_norm(M, q) ** 2
    eps = alpha - beta
    eps_norm = 1 - (n + 1) / mpmath.pi * poly_norm(M, G) ** 2
    if eps < -mpf(10) ** (-(mpmath.mp.dps // 2)):
        raise ArithmeticError("decomposition violated")
    return Decomposition(alpha, beta, eps, eps_norm)


def singular_parts(psi: LaurentSeries, n: int, count: int) -> tuple:
    """
    ``(E_n, H_n)`` to ``count`` terms: ``E_n = F_n - Phi**n`` (from ``z**-1``)
    and ``H_n = E'_{n+1}/(n+1)`` (from ``z**-2``).
    """
    _check_psi(psi)
    depth = n + count + 3
    phi = laurent_revert(psi, depth)
    F = faber_first_kind(psi, n + 1)

    def E(k):
        if k == 0:
            return LaurentSeries(-1, [mpc(0)] * count)
        power = laurent_pow(phi, k, depth)
        return (LaurentSeries.from_poly(F[k]) - power).singular_part()

    E_n = E(n)
    E_next = E(n + 1)
    H_n = E_next.derivative() * (mpf(1) / (n + 1))
    return _window(E_n, -1, count), _window(H_n, -2, count)


def _window(L: LaurentSeries, top: int, count: int) -> LaurentSeries:
    return LaurentSeries(top, [L.coeff(j) for j in range(top, top - count, -1)])
