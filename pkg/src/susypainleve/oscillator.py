"""The truncated harmonic oscillator: seeds, eigenfunctions, ladder operators.

Conventions (oscillator-energy units): H0 = -(1/2) d^2/dx^2 + x^2/2 on the
half line x > 0 with an infinite barrier at the origin.  Physical levels sit
at E_n = 2n + 3/2 with odd eigenfunctions; the even solutions at 2n + 1/2
are formal (they violate the null boundary condition and exist only as
Schroedinger solutions).

Every state here is *unnormalized*: all downstream formulas consume
logarithmic derivatives or Wronskian ratios, so overall constants cancel.
States are represented uniformly as jet-valued functions f(x, order) -> Jet,
which keeps operator application (ladder, intertwiners) purely algebraic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .config import DEFAULT_JET_ORDER, X_MAX
from .hyp1f1 import KummerParams, kummer_jet
from .jets import DomainError, Jet, jet_exp, jet_var

State = Callable[[float, int], Jet]

_SQRT2 = math.sqrt(2.0)


class Parity(enum.Enum):
    ODD = "odd"
    EVEN = "even"

    def flipped(self) -> "Parity":
        return Parity.EVEN if self is Parity.ODD else Parity.ODD


@dataclass(frozen=True)
class SeedSpec:
    """Factorization energy plus definite parity: identifies one seed u(x, eps)."""

    epsilon: float
    parity: Parity


class LevelKind(enum.Enum):
    PHYSICAL = "physical"
    FORMAL = "formal"


@dataclass(frozen=True)
class SpectrumLevel:
    n: int
    kind: LevelKind
    energy: float

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("level index must be >= 0")
        expected = 2 * self.n + (1.5 if self.kind is LevelKind.PHYSICAL else 0.5)
        if self.energy != expected:
            raise ValueError(f"{self.kind.value} level {self.n} must sit at {expected}")

    @classmethod
    def physical(cls, n: int) -> "SpectrumLevel":
        return cls(n, LevelKind.PHYSICAL, 2 * n + 1.5)

    @classmethod
    def formal(cls, n: int) -> "SpectrumLevel":
        return cls(n, LevelKind.FORMAL, 2 * n + 0.5)


def _check_x(x: float) -> None:
    if x <= 0.0:
        raise DomainError(f"x = {x!r} is inside the infinite barrier (need x > 0)")
    if x > X_MAX:
        raise DomainError(f"x = {x!r} beyond evaluation domain (0, {X_MAX}]")


def gaussian_jet(xjet: Jet) -> Jet:
    """Jet of exp(-x^2/2) along an arbitrary x-jet."""
    return jet_exp(xjet * xjet * (-0.5))


def seed_u_jet(spec: SeedSpec, xjet: Jet) -> Jet:
    """Seed solution jet along an arbitrary x-jet (unnormalized).

    Odd branch:  x exp(-x^2/2) 1F1((3-2eps)/4; 3/2; x^2)
    Even branch:   exp(-x^2/2) 1F1((1-2eps)/4; 1/2; x^2)
    """
    eps = spec.epsilon
    if spec.parity is Parity.ODD:
        params = KummerParams((3.0 - 2.0 * eps) / 4.0, 1.5)
        return xjet * gaussian_jet(xjet) * kummer_jet(params, xjet)
    params = KummerParams((1.0 - 2.0 * eps) / 4.0, 0.5)
    return gaussian_jet(xjet) * kummer_jet(params, xjet)


@lru_cache(maxsize=1 << 16)
def _seed_jet_cached(eps: float, parity: Parity, x: float, order: int) -> Jet:
    xjet = jet_var(x, max(order, 1))
    return seed_u_jet(SeedSpec(eps, parity), xjet).truncate(order)


def seed_u(spec: SeedSpec, x: float, order: int = DEFAULT_JET_ORDER) -> Jet:
    """Seed jet at a point x > 0."""
    _check_x(x)
    return _seed_jet_cached(spec.epsilon, spec.parity, x, order)


def seed_state(spec: SeedSpec) -> State:
    return lambda x, order: seed_u(spec, x, order)


def eigenfunction_psi(n: int, x: float, order: int = DEFAULT_JET_ORDER) -> Jet:
    """Physical eigenfunction psi_n at E_n = 2n + 3/2 (the odd seed there)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return seed_u(SeedSpec(2 * n + 1.5, Parity.ODD), x, order)


def formal_chi(n: int, x: float, order: int = DEFAULT_JET_ORDER) -> Jet:
    """Formal even solution chi_n at 2n + 1/2; finite at x = 0, so no boundary zero."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_x(x)
    return _seed_jet_cached(2 * n + 0.5, Parity.EVEN, x, order)


def psi_state(n: int) -> State:
    return lambda x, order: eigenfunction_psi(n, x, order)


def chi_state(n: int) -> State:
    return lambda x, order: formal_chi(n, x, order)


class Direction(enum.Enum):
    RAISE = "raise"
    LOWER = "lower"


def ladder(direction: Direction, f: State, x: float, order: int = DEFAULT_JET_ORDER) -> Jet:
    """Apply a+- = (1/sqrt2)(-+ d/dx + x) to a jet-valued function.

    One derivative order of f is consumed; f must be evaluable at order+1.
    a+ raises the factorization energy by one, a- lowers it, and either flips
    parity.
    """
    F = f(x, order + 1)
    xj = jet_var(x, max(order, 1)).truncate(order)
    sign = -1.0 if direction is Direction.RAISE else 1.0
    return (sign * F.deriv() + xj * F.truncate(order)) * (1.0 / _SQRT2)


def ladder_state(direction: Direction, f: State) -> State:
    return lambda x, order: ladder(direction, f, x, order)


def schrodinger_residual(f: State, epsilon: float, x: float) -> float:
    """Signed residual f'' - (x^2 - 2 eps) f; zero for exact solutions."""
    F = f(x, 2)
    return F.d[2] - (x * x - 2.0 * epsilon) * F.d[0]


def schrodinger_scale(f: State, epsilon: float, x: float) -> float:
    """Magnitude scale |f''| + |x^2 - 2 eps||f| for relative residuals."""
    F = f(x, 2)
    return abs(F.d[2]) + abs(x * x - 2.0 * epsilon) * abs(F.d[0])
