"""Authoritative verification oracles for the Painleve IV and V equations.

Residuals are evaluated with exact jet derivatives.  Relative residuals are
normalized by the largest-magnitude term of the equation at each point: raw
residuals near poles of g or w are meaningless, and this normalization makes
the pass thresholds grid-independent.

Parameter inference exploits the fact that both residuals are *linear* in
the free parameters (a, b) respectively (a, b, c) with d frozen at -1/8:
a least-squares fit over >= 8 samples both recovers the parameters and, via
the post-fit misfit, exposes a wrong functional form (as opposed to merely
wrong parameters).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .config import (
    DEFAULT_TOLERANCE,
    MIN_VALID_POINTS,
    VALUE_GUARD,
    default_x_grid,
    default_z_grid,
)
from .jets import Jet, JetError
from .oscillator import State


class VerificationError(RuntimeError):
    """Base class for verification failures that are not residual failures."""


class GridDegenerateError(VerificationError):
    """Fewer unguarded grid points than the required minimum."""

    def __init__(self, message: str, report: "VerificationReport | None" = None):
        super().__init__(message)
        self.report = report


class SingularSystemError(VerificationError):
    """Parameter-inference system is singular or hopelessly ill-conditioned."""


def piv_terms(gjet: Jet, x: float, a: float, b: float) -> tuple[float, ...]:
    """The six signed terms of the PIV residual at one point.

    residual = g'' - (g')^2/(2g) - (3/2) g^3 - 4x g^2 - 2(x^2 - a) g - b/g
    """
    g0, g1, g2 = gjet.d[0], gjet.d[1], gjet.d[2]
    return (
        g2,
        -(g1 * g1) / (2.0 * g0),
        -1.5 * g0**3,
        -4.0 * x * g0 * g0,
        -2.0 * (x * x - a) * g0,
        -b / g0,
    )


def piv_residual(sol, x: float, order: int = 2) -> float:
    """Signed PIV residual of a solution object (fields g, a, b) at x."""
    gjet = sol.g(x, max(order, 2))
    return math.fsum(piv_terms(gjet, x, sol.a, sol.b))


def pv_terms(wjet: Jet, z: float, a: float, b: float, c: float, d: float) -> tuple[float, ...]:
    """The six signed terms of the PV residual at one point.

    residual = w'' - (1/(2w) + 1/(w-1)) (w')^2 + w'/z
               - (w-1)^2 (a w + b/w)/z^2 - c w/z - d w(w+1)/(w-1)
    """
    w0, w1, w2 = wjet.d[0], wjet.d[1], wjet.d[2]
    wm1 = w0 - 1.0
    return (
        w2,
        -(0.5 / w0 + 1.0 / wm1) * w1 * w1,
        w1 / z,
        -(wm1 * wm1) * (a * w0 + b / w0) / (z * z),
        -c * w0 / z,
        -d * w0 * (w0 + 1.0) / wm1,
    )


def pv_residual(sol, z: float, order: int = 2) -> float:
    """Signed PV residual of a solution object (fields w, a, b, c, d) at z."""
    wjet = sol.w(z, max(order, 2))
    return math.fsum(pv_terms(wjet, z, sol.a, sol.b, sol.c, sol.d))


@dataclass
class VerificationReport:
    """Grid verification outcome; rel_residuals holds nan at skipped points."""

    kind: str
    grid: list[float]
    rel_residuals: list[float]
    skipped: int
    n_valid: int
    max_rel_residual: float
    tolerance: float
    passed: bool
    min_valid: int = MIN_VALID_POINTS
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "skipped": self.skipped,
            "n_valid": self.n_valid,
            "max_rel_residual": self.max_rel_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "notes": self.notes,
        }


def _relative_residual(terms: Sequence[float]) -> float:
    scale = max(abs(t) for t in terms)
    if scale == 0.0:
        return 0.0
    return abs(math.fsum(terms)) / scale


def verify_on_grid(
    kind: Literal["piv", "pv"],
    sol,
    grid: Sequence[float] | None = None,
    tol: float = DEFAULT_TOLERANCE,
    *,
    guard: float = VALUE_GUARD,
    min_valid: int = MIN_VALID_POINTS,
    order: int = 2,
) -> VerificationReport:
    """Relative-residual verification over a grid with pole guarding.

    Points where the solution value sits inside the guard band (|g| < guard
    for PIV; |w| or |w-1| < guard for PV) or where jet evaluation hits a
    pole are skipped and counted.  Raises GridDegenerateError when fewer
    than min_valid points survive.
    """
    if kind not in ("piv", "pv"):
        raise ValueError(f"unknown equation kind {kind!r}")
    if grid is None:
        grid = default_x_grid() if kind == "piv" else default_z_grid()
    if not grid:
        raise ValueError("empty verification grid")

    rel: list[float] = []
    skipped = 0
    for t in grid:
        try:
            if kind == "piv":
                jet = sol.g(t, max(order, 2))
                if abs(jet.value) < guard:
                    raise JetError("value guard")
                terms = piv_terms(jet, t, sol.a, sol.b)
            else:
                jet = sol.w(t, max(order, 2))
                if abs(jet.value) < guard or abs(jet.value - 1.0) < guard:
                    raise JetError("value guard")
                terms = pv_terms(jet, t, sol.a, sol.b, sol.c, sol.d)
        except JetError:
            rel.append(math.nan)
            skipped += 1
            continue
        rel.append(_relative_residual(terms))

    valid = [r for r in rel if not math.isnan(r)]
    report = VerificationReport(
        kind=kind,
        grid=list(grid),
        rel_residuals=rel,
        skipped=skipped,
        n_valid=len(valid),
        max_rel_residual=max(valid) if valid else math.inf,
        tolerance=tol,
        passed=bool(valid) and len(valid) >= min_valid and max(valid) <= tol,
        min_valid=min_valid,
    )
    if len(valid) < min_valid:
        raise GridDegenerateError(
            f"only {len(valid)} unguarded points (need {min_valid})", report
        )
    return report


# -- parameter inference -------------------------------------------------------


@dataclass(frozen=True)
class PIVFit:
    a: float
    b: float
    cond: float
    misfit: float


@dataclass(frozen=True)
class PVFit:
    a: float
    b: float
    c: float
    cond: float
    misfit: float


_COND_LIMIT = 1e10


def infer_piv_params(
    g: State,
    samples: Sequence[float] | None = None,
    *,
    guard: float = VALUE_GUARD,
    order: int = 2,
) -> PIVFit:
    """Least-squares (a, b) making the PIV residual of g vanish.

    The residual is affine in (a, b) with coefficients 2g and -1/g, so each
    usable sample contributes one linear equation.
    """
    if samples is None:
        samples = default_x_grid()[1::3]
    rows, rhs = [], []
    for x in samples:
        try:
            jet = g(x, max(order, 2))
            if abs(jet.value) < guard:
                continue
            base = math.fsum(piv_terms(jet, x, 0.0, 0.0))
        except JetError:
            continue
        row = [2.0 * jet.value, -1.0 / jet.value]
        # row-equilibration: keeps near-pole samples from dominating the fit
        s = max(abs(row[0]), abs(row[1]), abs(base))
        rows.append([r / s for r in row])
        rhs.append(-base / s)
    if len(rows) < 2:
        raise SingularSystemError(f"only {len(rows)} usable samples for a 2-parameter fit")
    A = np.asarray(rows)
    y = np.asarray(rhs)
    cond = float(np.linalg.cond(A))
    if not math.isfinite(cond) or cond > _COND_LIMIT:
        raise SingularSystemError(f"PIV inference system condition number {cond:.3g}")
    theta, *_ = np.linalg.lstsq(A, y, rcond=None)
    misfit = float(np.sqrt(np.mean((A @ theta - y) ** 2)))
    return PIVFit(float(theta[0]), float(theta[1]), cond, misfit)


def infer_pv_params(
    w: State,
    samples: Sequence[float] | None = None,
    *,
    guard: float = VALUE_GUARD,
    d: float = -0.125,
    order: int = 2,
) -> PVFit:
    """Least-squares (a, b, c) making the PV residual of w vanish (d frozen)."""
    if samples is None:
        samples = default_z_grid()[1::3]
    rows, rhs = [], []
    for z in samples:
        try:
            jet = w(z, max(order, 2))
            w0 = jet.value
            if abs(w0) < guard or abs(w0 - 1.0) < guard:
                continue
            base = math.fsum(pv_terms(jet, z, 0.0, 0.0, 0.0, d))
        except JetError:
            continue
        wm1sq = (w0 - 1.0) ** 2
        row = [wm1sq * w0 / (z * z), wm1sq / (w0 * z * z), w0 / z]
        s = max(abs(row[0]), abs(row[1]), abs(row[2]), abs(base))
        rows.append([r / s for r in row])
        rhs.append(base / s)
    if len(rows) < 3:
        raise SingularSystemError(f"only {len(rows)} usable samples for a 3-parameter fit")
    A = np.asarray(rows)
    y = np.asarray(rhs)
    cond = float(np.linalg.cond(A))
    if not math.isfinite(cond) or cond > _COND_LIMIT:
        raise SingularSystemError(f"PV inference system condition number {cond:.3g}")
    theta, *_ = np.linalg.lstsq(A, y, rcond=None)
    misfit = float(np.sqrt(np.mean((A @ theta - y) ** 2)))
    return PVFit(float(theta[0]), float(theta[1]), float(theta[2]), cond, misfit)


def pointwise_deviation(
    f: State,
    g: State,
    grid: Sequence[float],
    *,
    min_valid: int = MIN_VALID_POINTS,
) -> tuple[float, int]:
    """Max of |f - g| / max(1, |f|, |g|) over evaluable grid points.

    Raw values are compared (the families are not defined up to scaling, so
    no pairwise normalization is allowed); the denominator only switches to
    relative accuracy where a pole inflates both magnitudes, where an
    absolute difference would be meaningless.  Returns (deviation, n_valid);
    raises GridDegenerateError when fewer than min_valid points survive.
    """
    best = 0.0
    n_valid = 0
    for t in grid:
        try:
            fv = f(t, 0).value
            gv = g(t, 0).value
        except JetError:
            continue
        n_valid += 1
        best = max(best, abs(fv - gv) / max(1.0, abs(fv), abs(gv)))
    if n_valid < min_valid:
        raise GridDegenerateError(f"only {n_valid} comparable points (need {min_valid})")
    return best, n_valid
