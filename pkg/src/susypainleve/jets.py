"""Truncated Taylor-jet arithmetic.

A jet holds the value and first K derivatives of a scalar function at a
point: ``d[k] = f^(k)(x0)``.  Jets propagate *exact* derivatives through all
compositions, so every ODE residual downstream is computed without finite
differences.

Derivative values (not Taylor coefficients) are stored: that matches the
prime-notation formulas the package implements; the two conventions differ
by a factorial rescaling only, applied internally where series composition
is cheaper in coefficient form.

Jets are immutable value types; no operation mutates its operands, so they
are safe to cache and to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import POLE_GUARD

DEFAULT_ORDER = 5

Number = float


class JetError(ArithmeticError):
    """Base class for jet arithmetic failures."""


class OrderMismatchError(JetError):
    """Binary operation applied to jets of different orders."""


class PoleError(JetError):
    """Divisor (or log-derivative argument) vanishes at the expansion point.

    Signals a pole of the target expression, not a bug: callers treat it as
    "this grid point is guarded".
    """


class DomainError(JetError):
    """Argument outside the domain of the lifted function (ln, sqrt, ...)."""


@dataclass(frozen=True)
class Jet:
    """Value plus derivatives: d[k] = f^(k)(x0), k = 0..order."""

    d: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.d:
            raise ValueError("a jet needs at least its value entry")
        for v in self.d:
            if not math.isfinite(v):
                raise DomainError(f"non-finite jet entry in {self.d!r}")

    @property
    def order(self) -> int:
        return len(self.d) - 1

    @property
    def value(self) -> float:
        return self.d[0]

    def truncate(self, order: int) -> "Jet":
        """Forget derivatives above `order`."""
        if order < 0 or order > self.order:
            raise OrderMismatchError(
                f"cannot truncate order-{self.order} jet to order {order}"
            )
        return Jet(self.d[: order + 1])

    def deriv(self, times: int = 1) -> "Jet":
        """Jet of the `times`-th derivative (order drops by `times`).

        With derivative-value storage this is a pure shift of entries.
        """
        if times < 0 or times > self.order:
            raise OrderMismatchError(
                f"order-{self.order} jet cannot supply derivative {times}"
            )
        return Jet(self.d[times:])

    # -- operators ---------------------------------------------------------

    def __add__(self, other) -> "Jet":
        other = _lift(other, self.order)
        _check_orders(self, other)
        return Jet(tuple(a + b for a, b in zip(self.d, other.d)))

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(tuple(-a for a in self.d))

    def __sub__(self, other) -> "Jet":
        return self + (-_lift(other, self.order))

    def __rsub__(self, other) -> "Jet":
        return (-self) + _lift(other, self.order)

    def __mul__(self, other) -> "Jet":
        if isinstance(other, (int, float)):
            return Jet(tuple(a * other for a in self.d))
        return jet_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        if isinstance(other, (int, float)):
            return Jet(tuple(a / other for a in self.d))
        return jet_div(self, other)

    def __rtruediv__(self, other) -> "Jet":
        return jet_div(_lift(other, self.order), self)

    def __pow__(self, n: int) -> "Jet":
        if not isinstance(n, int) or n < 0:
            raise ValueError("jet powers are nonnegative integers")
        out = jet_const(1.0, self.order)
        for _ in range(n):
            out = jet_mul(out, self)
        return out


def _lift(x, order: int) -> Jet:
    if isinstance(x, Jet):
        return x
    return jet_const(float(x), order)


def _check_orders(a: Jet, b: Jet) -> None:
    if a.order != b.order:
        raise OrderMismatchError(f"jet orders differ: {a.order} vs {b.order}")


def jet_const(c: float, order: int) -> Jet:
    """Jet of the constant function c."""
    if order < 0:
        raise ValueError("order must be >= 0")
    return Jet((float(c),) + (0.0,) * order)


def jet_var(x0: float, order: int) -> Jet:
    """Jet of the identity x -> x at x0; requires order >= 1."""
    if order < 1:
        raise ValueError("jet_var needs order >= 1")
    return Jet((float(x0), 1.0) + (0.0,) * (order - 1))


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Leibniz product: d[k] = sum_j C(k,j) a[j] b[k-j]."""
    _check_orders(a, b)
    ad, bd = a.d, b.d
    out = []
    for k in range(len(ad)):
        s = 0.0
        for j in range(k + 1):
            s += math.comb(k, j) * ad[j] * bd[k - j]
        out.append(s)
    return Jet(tuple(out))


def jet_div(a: Jet, b: Jet, guard: float = POLE_GUARD) -> Jet:
    """Quotient jet via recursive Leibniz inversion.

    Raises PoleError when |b(x0)| <= guard: the quotient has (or grazes) a
    pole at the expansion point.
    """
    _check_orders(a, b)
    if abs(b.d[0]) <= guard:
        raise PoleError(f"divisor value {b.d[0]!r} below pole guard {guard!r}")
    ad, bd = a.d, b.d
    q: list[float] = []
    for k in range(len(ad)):
        s = ad[k]
        for j in range(k):
            s -= math.comb(k, j) * q[j] * bd[k - j]
        q.append(s / bd[0])
    return Jet(tuple(q))


def jet_exp(a: Jet) -> Jet:
    """exp(a): e[k] = sum_{j<k} C(k-1,j) e[j] a[k-j]."""
    e = [math.exp(a.d[0])]
    for k in range(1, len(a.d)):
        s = 0.0
        for j in range(k):
            s += math.comb(k - 1, j) * e[j] * a.d[k - j]
        e.append(s)
    return Jet(tuple(e))


def jet_ln(a: Jet) -> Jet:
    """ln(a); requires a(x0) > 0."""
    if a.d[0] <= 0.0:
        raise DomainError(f"ln of non-positive jet value {a.d[0]!r}")
    if a.order == 0:
        return Jet((math.log(a.d[0]),))
    m = jet_div(a.deriv(), a.truncate(a.order - 1))  # (ln a)' = a'/a
    return Jet((math.log(a.d[0]),) + m.d)


def jet_sqrt(a: Jet) -> Jet:
    """sqrt(a); requires a(x0) > 0."""
    if a.d[0] <= 0.0:
        raise DomainError(f"sqrt of non-positive jet value {a.d[0]!r}")
    s = [math.sqrt(a.d[0])]
    for k in range(1, len(a.d)):
        acc = a.d[k]
        for j in range(1, k):
            acc -= math.comb(k, j) * s[j] * s[k - j]
        s.append(acc / (2.0 * s[0]))
    return Jet(tuple(s))


def log_derivative(a: Jet, guard: float = POLE_GUARD) -> Jet:
    """Jet of a'/a (order drops by one); sign of a is irrelevant.

    This is the superpotential workhorse: unlike jet_ln it only needs
    a(x0) != 0, not positivity.
    """
    if a.order < 1:
        raise OrderMismatchError("log_derivative needs order >= 1")
    if abs(a.d[0]) <= guard:
        raise PoleError(f"log-derivative at a zero: value {a.d[0]!r}")
    return jet_div(a.deriv(), a.truncate(a.order - 1), guard=guard)


def jet_compose(outer: Jet, inner: Jet) -> Jet:
    """Jet of F(y(x)) from the jet of F at y0 = inner.value and the jet of y.

    Both jets must have equal orders; `outer.d[m]` is read as the m-th
    y-derivative of F at y0.  Implemented by converting to Taylor
    coefficients and composing truncated polynomials (Horner), then scaling
    back to derivative values.
    """
    _check_orders(outer, inner)
    K = outer.order
    fact = [math.factorial(k) for k in range(K + 1)]
    A = [outer.d[k] / fact[k] for k in range(K + 1)]
    B = [0.0] + [inner.d[k] / fact[k] for k in range(1, K + 1)]

    def poly_mul(p: list[float], q: list[float]) -> list[float]:
        out = [0.0] * (K + 1)
        for i, pi in enumerate(p):
            if pi == 0.0:
                continue
            for j, qj in enumerate(q):
                if i + j > K:
                    break
                out[i + j] += pi * qj
        return out

    comp = [A[K]] + [0.0] * K
    for k in range(K - 1, -1, -1):
        comp = poly_mul(comp, B)
        comp[0] += A[k]
    return Jet(tuple(comp[k] * fact[k] for k in range(K + 1)))
