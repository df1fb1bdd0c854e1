"""
Arbitrary-precision scalars, polynomials and Laurent series about infinity.

Every number is an :class:`mpmath.mpc` evaluated in the current mpmath
context, so one :func:`precision` block fixes the working precision of a
whole computation.  Polynomials are stored in the monomial basis with
ascending coefficients; Laurent series are stored from their top power
downwards and remember how deep their coefficients can be trusted.
"""

from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass
from typing import Sequence

import mpmath
from mpmath import mpc, mpf

DEFAULT_PRECISION = 200

__all__ = [
    "DEFAULT_PRECISION", "Poly", "LaurentSeries", "TruncationError",
    "precision", "default_precision", "to_complex", "poly_eval",
    "laurent_ratio", "laurent_pow", "laurent_revert",
]


class TruncationError(ArithmeticError):
    """A coefficient was requested below the reliably retained range."""


def default_precision() -> int:
    """Working precision in decimal digits, honouring ``BERGMAN_PRECISION``."""
    value = os.environ.get("BERGMAN_PRECISION")
    return int(value) if value else DEFAULT_PRECISION


@contextlib.contextmanager
def precision(dps: int | None = None):
    """Run a block at ``dps`` decimal digits (default: :func:`default_precision`)."""
    with mpmath.workdps(dps if dps is not None else default_precision()):
        yield


def to_complex(x) -> mpc:
    """Coerce numbers, ``[re, im]`` pairs and numeric strings to ``mpc``."""
    if isinstance(x, mpc):
        return x
    if isinstance(x, (list, tuple)):
        re, im = x
        return mpc(mpmath.mpmathify(re), mpmath.mpmathify(im))
    return mpc(mpmath.mpmathify(x))


ZERO = mpc(0)


def _trim(coeffs: Sequence) -> tuple:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


@dataclass(frozen=True)
class Poly:
    """Dense polynomial ``sum(coeffs[j] * z**j)``; exact zeros are trimmed."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           _trim([to_complex(c) for c in self.coeffs]))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls((ZERO,) * k + (to_complex(c),))

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> mpc:
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z):
        return poly_eval(self, z)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = to_complex(other)
            return Poly([c * x for x in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "Poly":
        """Multiply by ``z**k``."""
        if self.is_zero():
            return self
        return Poly((ZERO,) * k + self.coeffs)

    def derivative(self) -> "Poly":
        return Poly([j * c for j, c in enumerate(self.coeffs)][1:])

    def max_abs_coeff(self) -> mpf:
        return max((abs(c) for c in self.coeffs), default=mpf(0))


def poly_eval(p: Poly, z) -> mpc:
    """Horner evaluation of ``p`` at ``z``."""
    z = to_complex(z)
    acc = ZERO
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class LaurentSeries:
    """
    Truncated Laurent series ``sum_{j <= top} c_j z**j`` about infinity.

    ``coeffs`` holds ``c_top, c_{top-1}, ...``.  When ``exact`` is false the
    series is known only down to ``low = top - len(coeffs) + 1`` and asking
    for anything deeper raises :class:`TruncationError`; when it is true the
    omitted coefficients are zero (a Laurent polynomial).
    """

    top: int
    coeffs: tuple
    exact: bool = False

    def __post_init__(self):
        coeffs = [to_complex(c) for c in self.coeffs]
        top = self.top
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
            top -= 1
        if self.exact:
            coeffs = list(_trim(coeffs))
            if not coeffs:
                top = 0
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "top", top)

    @classmethod
    def from_terms(cls, terms: dict, exact: bool = True) -> "LaurentSeries":
        """Build from a ``{power: coefficient}`` mapping."""
        terms = {int(j): to_complex(c) for j, c in terms.items() if c != 0}
        if not terms:
            return cls(0, (), exact=exact)
        top, bottom = max(terms), min(terms)
        return cls(top, [terms.get(j, ZERO) for j in range(top, bottom - 1, -1)],
                   exact=exact)

    @classmethod
    def from_poly(cls, p: Poly) -> "LaurentSeries":
        return cls(p.degree, tuple(reversed(p.coeffs)), exact=True)

    @property
    def count(self) -> int:
        """Number of retained terms."""
        return len(self.coeffs)

    @property
    def low(self):
        """Lowest reliable power (``-inf`` for exact series)."""
        return -mpmath.inf if self.exact else self.top - len(self.coeffs) + 1

    @property
    def lowest_power(self) -> int:
        """Lowest power carrying a stored coefficient."""
        return self.top - len(self.coeffs) + 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> mpc:
        return self.coeffs[0] if self.coeffs else ZERO

    def coeff(self, j: int) -> mpc:
        if j > self.top:
            return ZERO
        if j < self.lowest_power:
            if self.exact:
                return ZERO
            raise TruncationError(f"coefficient of z^{j} lies below the retained "
                                  f"range (lowest reliable power z^{self.low})")
        return self.coeffs[self.top - j]

    def terms(self) -> dict:
        return {self.top - i: c for i, c in enumerate(self.coeffs) if c != 0}

    def truncate(self, count: int) -> "LaurentSeries":
        """Keep ``count`` terms below (and including) the top power."""
        if self.exact:
            stored = list(self.coeffs[:count])
            stored += [ZERO] * (count - len(stored))
            return LaurentSeries(self.top, stored)
        if count > len(self.coeffs):
            raise TruncationError(f"only {len(self.coeffs)} terms retained")
        return LaurentSeries(self.top, self.coeffs[:count])

    def _span(self, low: int, top: int) -> list:
        return [self.coeff(j) for j in range(top, low - 1, -1)]

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries(0, (to_complex(other),), exact=True)
        exact = self.exact and other.exact
        top = max(self.top, other.top)
        if exact:
            low = min(self.lowest_power, other.lowest_power)
        else:
            low = int(max(self.low, other.low))
        vals = [x + y for x, y in zip(self._span(low, top), other._span(low, top))]
        out = LaurentSeries(top, vals, exact=exact)
        if not exact and out.is_zero():
            return LaurentSeries(low - 1, (), exact=False)
        return out

    __radd__ = __add__

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.top, [-c for c in self.coeffs], exact=self.exact)

    def __sub__(self, other) -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            c = to_complex(other)
            return LaurentSeries(self.top, [c * x for x in self.coeffs], exact=self.exact)
        exact = self.exact and other.exact
        top = self.top + other.top
        if exact:
            n = len(self.coeffs) + len(other.coeffs) - 1
        else:
            n = min(self.count if not self.exact else mpmath.inf,
                    other.count if not other.exact else mpmath.inf)
            n = int(n)
        a, b = self.coeffs, other.coeffs
        out = []
        for i in range(max(n, 0)):
            acc = ZERO
            for j in range(max(0, i - len(b) + 1), min(i, len(a) - 1) + 1):
                acc += a[j] * b[i - j]
            out.append(acc)
        return LaurentSeries(top, out, exact=exact)

    __rmul__ = __mul__

    def derivative(self) -> "LaurentSeries":
        vals = [(self.top - i) * c for i, c in enumerate(self.coeffs)]
        return LaurentSeries(self.top - 1, vals, exact=self.exact)

    def reciprocal(self, count: int | None = None) -> "LaurentSeries":
        """``1/L`` to ``count`` terms (default: the retained depth of ``L``)."""
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of a zero series")
        if count is None:
            if self.exact:
                raise ValueError("an exact series needs an explicit term count")
            count = self.count
        elif not self.exact and count > self.count:
            raise TruncationError(f"only {self.count} terms retained")
        a = self.coeffs
        inv0 = 1 / a[0]
        out = [inv0]
        for i in range(1, count):
            acc = ZERO
            for j in range(1, min(i, len(a) - 1) + 1):
                acc += a[j] * out[i - j]
            out.append(-acc * inv0)
        return LaurentSeries(-self.top, out)

    def __call__(self, z):
        """Evaluate the retained terms at ``z``."""
        z = to_complex(z)
        acc = ZERO
        for j, c in self.terms().items():
            acc += c * z ** j
        return acc

    def derivative_at(self, z):
        z = to_complex(z)
        acc = ZERO
        for j, c in self.terms().items():
            if j:
                acc += j * c * z ** (j - 1)
        return acc

    def polynomial_part(self) -> Poly:
        if self.top < 0:
            return Poly()
        return Poly([self.coeff(j) for j in range(self.top + 1)])

    def singular_part(self) -> "LaurentSeries":
        """Terms with negative powers only (same truncation depth)."""
        if self.top < 0:
            return self
        if not self.exact and self.low > -1:
            return LaurentSeries(int(self.low) - 1, (), exact=False)
        vals = [c for i, c in enumerate(self.coeffs) if self.top - i < 0]
        return LaurentSeries(-1, vals, exact=self.exact)


def laurent_ratio(num: Poly, den: Poly, count: int) -> LaurentSeries:
    """Laurent expansion of ``num/den`` about infinity, ``count`` terms, by long division."""
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        return LaurentSeries(-count - den.degree, (), exact=False)
    n = list(reversed(num.coeffs))
    d = list(reversed(den.coeffs))
    inv = 1 / d[0]
    q = []
    for i in range(count):
        acc = n[i] if i < len(n) else ZERO
        for j in range(1, min(i, len(d) - 1) + 1):
            acc -= d[j] * q[i - j]
        q.append(acc * inv)
    return LaurentSeries(num.degree - den.degree, q)


def laurent_pow(L: LaurentSeries, k: int, count: int | None = None) -> LaurentSeries:
    """``L**k`` truncated to ``count`` terms below its top power ``k*L.top``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    base = L if count is None else L.truncate(count)
    out = base
    for _ in range(k - 1):
        out = out * base
    return out


def laurent_revert(L: LaurentSeries, count: int) -> LaurentSeries:
    """
    Compositional inverse of ``L(z) = c z + c0 + c1/z + ...`` about infinity.

    Returns ``M(w) = d w + d0 + d1/w + ...`` with ``count`` terms (powers
    ``w, 1, ..., w**(2-count)``) such that ``L(M(w)) = w``.  Uses the residue
    identity ``-k d_k = [z**-1] L(z)**k`` together with ``d = 1/c`` and
    ``d0 = -c0/c``.
    """
    if L.top != 1 or L.is_zero():
        raise ValueError("series must have top power z**1 with nonzero coefficient")
    if count < 1:
        raise ValueError("count must be positive")
    if not L.exact and L.count < count:
        raise TruncationError("truncation too shallow: need "
                              f"{count} terms of the series, have {L.count}")
    d = 1 / L.coeff(1)
    vals = [d]
    if count > 1:
        vals.append(-L.coeff(0) * d)
    base = L.truncate(count)
    power = base
    for k in range(1, count - 1):
        if k > 1:
            power = power * base
        vals.append(-power.coeff(-1) / k)
    return LaurentSeries(1, vals)
