"""Backlund transformations between the generated Painleve solutions.

PIV side: the three one-parameter maps (here Wtilde+, Wdagger+, Wddag+-)
act on a solution g(x; a, b) through its value, derivative and the root
sqrt(-2b).  The closed-form maps fix no sign for that root; maps take a
root branch (principal = nonnegative), and the chain verifier searches the
alternate branch automatically when a function-level match fails, recording
the branch that worked.

The five-link chain g1 -> g2 -> g3 -> G1 -> G3 -> G2 (operators
Wddag+ Wdagger+, Wddag-, Wtilde+, Wddag-, Wddag+) is verified pointwise
against the independently built closed forms with the same seed; the known
quarter discrepancy between the Wtilde+ parameter map and the G1 family
parameter is resolved by numeric inference and recorded, never patched.

PV side: the one-parameter family T_{k1,k2,k3} with roots
ra = sqrt(2a), rb = sqrt(-2b), rd = sqrt(-2d) (= 1/2 here, k3 carrying its
sign).  The catalog lists which (source, target, k-triple) pairs are valid
in which epsilon windows, endpoint semantics preserved exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .config import DEFAULT_TOLERANCE, VALUE_GUARD, default_x_grid, default_z_grid
from .jets import Jet, JetError, jet_var
from .oscillator import Parity, SeedSpec, State
from .painleve import (
    DegenerateClosedFormError,
    PIVSolution,
    PVSolution,
    closed_piv_solution,
    closed_pv_solution,
    derived_pv_solution,
)
from .residual import (
    GridDegenerateError,
    SingularSystemError,
    infer_piv_params,
    infer_pv_params,
    pointwise_deviation,
    verify_on_grid,
)


class MapError(ValueError):
    """Transformation not applicable to this solution (sign conditions)."""


class PIVMapKind(enum.Enum):
    WTILDE_PLUS = "Wtilde+"
    WDAGGER_PLUS = "Wdagger+"
    WDDAG_PLUS = "Wddag+"
    WDDAG_MINUS = "Wddag-"


class RootBranch(enum.Enum):
    PRINCIPAL = "principal"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class PIVMap:
    kind: PIVMapKind
    branch: RootBranch = RootBranch.PRINCIPAL


def _signed_root(map_: PIVMap, b: float) -> float:
    """The signed root s standing for sqrt(-2b) in the map formulas.

    Wddag- folds its minus sign into s; the branch flips s once more.
    """
    if b > 0.0:
        raise MapError(f"map needs -2b >= 0, got b = {b}")
    r = math.sqrt(-2.0 * b)
    if map_.kind is PIVMapKind.WDDAG_MINUS:
        r = -r
    if map_.branch is RootBranch.NEGATIVE:
        r = -r
    return r


def piv_map_params(map_: PIVMap, a: float, b: float) -> tuple[float, float]:
    """Parameter image (a', b') of the tabulated maps."""
    s = _signed_root(map_, b)
    if map_.kind is PIVMapKind.WTILDE_PLUS:
        return 0.25 * (1.0 - 2.0 * a + 3.0 * s), -0.5 * (1.0 + a + 0.5 * s) ** 2
    if map_.kind is PIVMapKind.WDAGGER_PLUS:
        return 1.5 - 0.5 * a - 0.75 * s, -0.5 * (1.0 - a + 0.5 * s) ** 2
    # Wddag+-: the +- already lives in s.
    return -1.5 - 0.5 * a - 0.75 * s, -0.5 * (-1.0 - a + 0.5 * s) ** 2


def _piv_map_state(map_: PIVMap, sol: PIVSolution) -> State:
    s = _signed_root(map_, sol.b)
    a = sol.a
    g = sol.g

    def out(x: float, order: int) -> Jet:
        K = max(order, 1)
        G = g(x, K + 1)
        gk = G.truncate(K)
        gp = G.deriv()
        xj = jet_var(x, K)
        if map_.kind is PIVMapKind.WTILDE_PLUS:
            num = gp - gk * gk - 2.0 * (xj * gk) - s
            return (num / (2.0 * gk)).truncate(order)
        if map_.kind is PIVMapKind.WDAGGER_PLUS:
            den = gp + s + 2.0 * (xj * gk) + gk * gk
            return (gk + (2.0 * (1.0 - a - 0.5 * s)) * (gk / den)).truncate(order)
        den = gp - s - 2.0 * (xj * gk) - gk * gk
        return (gk + (2.0 * (1.0 + a + 0.5 * s)) * (gk / den)).truncate(order)

    return out


@dataclass
class BTResult:
    """One applied transformation, with parameter drift bookkeeping."""

    transformed: object  # PIVSolution | PVSolution
    predicted: tuple
    inferred: tuple | None
    passed: bool
    degenerate: bool = False
    branches: tuple[str, ...] = ("principal",)
    max_deviation: float | None = None
    n_valid: int | None = None
    source: str = ""
    target: str = ""
    target_params: tuple | None = None
    notes: list[str] = field(default_factory=list)


def bt_piv_apply(
    map_: PIVMap,
    sol: PIVSolution,
    grid: Sequence[float] | None = None,
    tol: float = DEFAULT_TOLERANCE,
) -> BTResult:
    """Apply one PIV map; the result is verified with *inferred* parameters.

    The map-predicted (a', b') and the numerically inferred pair are both
    reported so parameter drift is visible, never silently accepted.
    """
    if grid is None:
        grid = default_x_grid()
    predicted = piv_map_params(map_, sol.a, sol.b)
    state = _piv_map_state(map_, sol)
    new_sol = PIVSolution(
        state, predicted[0], predicted[1],
        provenance=f"{map_.kind.value}[{sol.provenance}]",
    )
    try:
        fit = infer_piv_params(state, samples=grid)
        inferred = (fit.a, fit.b)
    except (SingularSystemError, GridDegenerateError):
        return BTResult(new_sol, predicted, None, passed=False, degenerate=True,
                        branches=(map_.branch.value,))
    checked = PIVSolution(state, fit.a, fit.b, provenance=new_sol.provenance)
    try:
        report = verify_on_grid("piv", checked, grid=grid, tol=tol)
        passed = report.passed
    except GridDegenerateError:
        return BTResult(new_sol, predicted, inferred, passed=False, degenerate=True,
                        branches=(map_.branch.value,))
    return BTResult(new_sol, predicted, inferred, passed=passed,
                    branches=(map_.branch.value,))


# -- the five-link chain --------------------------------------------------------

CHAIN_LINKS: tuple[tuple[str, tuple[PIVMapKind, ...], str], ...] = (
    ("g1", (PIVMapKind.WDAGGER_PLUS, PIVMapKind.WDDAG_PLUS), "g2"),
    ("g2", (PIVMapKind.WDDAG_MINUS,), "g3"),
    ("g3", (PIVMapKind.WTILDE_PLUS,), "G1"),
    ("G1", (PIVMapKind.WDDAG_MINUS,), "G3"),
    ("G3", (PIVMapKind.WDDAG_PLUS,), "G2"),
)


def _compose_maps(
    kinds: Sequence[PIVMapKind], branches: Sequence[RootBranch], sol: PIVSolution
) -> PIVSolution:
    out = sol
    for kind, branch in zip(kinds, branches):
        map_ = PIVMap(kind, branch)
        a1, b1 = piv_map_params(map_, out.a, out.b)
        out = PIVSolution(
            _piv_map_state(map_, out), a1, b1,
            provenance=f"{kind.value}[{out.provenance}]",
        )
    return out


def _identically_small(f, grid: Sequence[float], guard: float = VALUE_GUARD) -> bool:
    """True when |f| stays below the value guard at every evaluable point."""
    top = 0.0
    for x in grid:
        try:
            top = max(top, abs(f(x, 0).value))
        except JetError:
            continue
        if top >= guard:
            return False
    return True


def _best_branch_match(
    kinds: Sequence[PIVMapKind],
    source: PIVSolution,
    target: PIVSolution,
    grid: Sequence[float],
    tol: float,
    src_name: str,
    tgt_name: str,
) -> BTResult | None:
    """Try all root-branch combinations; first passing one wins, else closest.

    Comparisons against an identically vanishing target (a collapsed family
    member) are meaningless and reported as degenerate.
    """
    if _identically_small(target.g, grid):
        return None
    best: BTResult | None = None
    for branches in product((RootBranch.PRINCIPAL, RootBranch.NEGATIVE), repeat=len(kinds)):
        try:
            transformed = _compose_maps(kinds, branches, source)
            if _identically_small(transformed.g, grid):
                continue
            dev, n_valid = pointwise_deviation(transformed.g, target.g, grid)
        except (GridDegenerateError, MapError):
            continue
        result = BTResult(
            transformed,
            predicted=(transformed.a, transformed.b),
            inferred=None,
            passed=dev <= tol,
            branches=tuple(b.value for b in branches),
            max_deviation=dev,
            n_valid=n_valid,
            source=src_name,
            target=tgt_name,
            target_params=(target.a, target.b),
        )
        if result.passed:
            return result
        result.notes.append(_mismatch_profile(transformed.g, target.g, grid, tol))
        if best is None or (best.max_deviation or math.inf) > dev:
            best = result
    return best


def _mismatch_profile(f, g, grid: Sequence[float], tol: float) -> str:
    """Distinguish a broad mismatch from isolated conditioning spikes."""
    above = n = 0
    for x in grid:
        try:
            fv = f(x, 0).value
            gv = g(x, 0).value
        except JetError:
            continue
        n += 1
        if abs(fv - gv) / max(1.0, abs(fv), abs(gv)) > tol:
            above += 1
    return f"mismatch above {tol:g} at {above} of {n} points"


def bt_piv_chain(
    seed: SeedSpec,
    grid: Sequence[float] | None = None,
    tol: float = 1e-7,
) -> list[BTResult]:
    """Verify every chain link against the independently built target family.

    The 2-SUSY side uses eps1 = eps with the same parity.  Principal root
    branches are tried first; on a failed pointwise match the alternate
    branches are searched and the successful combination recorded.  Links
    whose construction or comparison collapses (identically vanishing
    denominators, all-pole grids) are flagged degenerate, not failed.
    """
    if grid is None:
        grid = default_x_grid()
    eps, parity = seed.epsilon, seed.parity
    results: list[BTResult] = []
    for src_name, kinds, tgt_name in CHAIN_LINKS:
        try:
            source = closed_piv_solution(src_name, eps, parity)
            target = closed_piv_solution(tgt_name, eps, parity)
        except DegenerateClosedFormError as exc:
            results.append(BTResult(
                None, (), None, passed=False, degenerate=True,
                source=src_name, target=tgt_name, notes=[str(exc)],
            ))
            continue

        best = _best_branch_match(kinds, source, target, grid, tol, src_name, tgt_name)
        if (best is None or not best.passed) and len(kinds) > 1:
            # Multi-map link whose literal composition is singular: the first
            # map's denominator vanishes identically on this family (its own
            # first-order identity), so its function action degenerates while
            # its parameter action is a fixed point.  Apply the composite
            # form instead: parameter action of every map (both root branches
            # searched), function action of the remaining ones.
            head, tail = kinds[0], kinds[1:]
            for head_branch in (RootBranch.PRINCIPAL, RootBranch.NEGATIVE):
                a1, b1 = piv_map_params(PIVMap(head, head_branch), source.a, source.b)
                reduced = PIVSolution(source.g, a1, b1, provenance=source.provenance)
                fallback = _best_branch_match(tail, reduced, target, grid, tol, src_name, tgt_name)
                if fallback is None:
                    continue
                fallback.branches = (head_branch.value,) + fallback.branches
                fallback.notes.append(
                    f"{head.value} intermediate singular on this family; "
                    "used the composite map (parameter action only)"
                )
                if fallback.passed:
                    best = fallback
                    break
                if best is None or (best.max_deviation or math.inf) > (
                    fallback.max_deviation or math.inf
                ):
                    best = fallback
        if best is None:
            best = BTResult(
                None, (), None, passed=False, degenerate=True,
                source=src_name, target=tgt_name,
                notes=["all branch combinations degenerate"],
            )
        if best.transformed is not None and not best.degenerate:
            try:
                fit = infer_piv_params(best.transformed.g, samples=grid)
                best.inferred = (fit.a, fit.b)
                _note_param_winner(best)
            except (SingularSystemError, GridDegenerateError):
                best.notes.append("parameter inference degenerate")
        results.append(best)
    return results


def _note_param_winner(link: BTResult, tol: float = 1e-6) -> None:
    """Record which parameter candidate the inference supports.

    Candidates: the composed map prediction and the target family's attached
    value.  When they disagree (the Wtilde+ link), exactly one should win.
    """
    if link.inferred is None or link.target_params is None:
        return
    cand = {"map": link.predicted[0], "family": link.target_params[0]}
    if abs(cand["map"] - cand["family"]) <= tol:
        link.notes.append("a-candidates agree")
        return
    winners = [name for name, val in cand.items() if abs(link.inferred[0] - val) <= tol]
    link.notes.append(
        f"a-discrepancy map={cand['map']:.6g} family={cand['family']:.6g} "
        f"inferred={link.inferred[0]:.6g} winner={winners[0] if len(winners) == 1 else 'ambiguous'}"
    )


# -- PV map -----------------------------------------------------------------------


@dataclass(frozen=True)
class PVMap:
    k1: int
    k2: int
    k3: int

    def __post_init__(self) -> None:
        if not all(k in (-1, 1) for k in (self.k1, self.k2, self.k3)):
            raise ValueError("k1, k2, k3 must each be +1 or -1")

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.k1, self.k2, self.k3)


def _pv_roots(a: float, b: float, d: float) -> tuple[float, float, float]:
    if a < 0.0:
        raise MapError(f"negative radicand: 2a = {2*a}")
    if b > 0.0:
        raise MapError(f"negative radicand: -2b = {-2*b}")
    if d > 0.0:
        raise MapError(f"negative radicand: -2d = {-2*d}")
    return math.sqrt(2.0 * a), math.sqrt(-2.0 * b), math.sqrt(-2.0 * d)


def pv_map_params(
    map_: PVMap, a: float, b: float, c: float, d: float
) -> tuple[float, float, float, float]:
    """Parameter image of T_{k1,k2,k3}; d is always invariant."""
    ra, rb, rd = _pv_roots(a, b, d)
    h = map_.k3 * rd * (1.0 - map_.k2 * rb - map_.k1 * ra)
    a1 = -((c + h) ** 2) / (16.0 * d)
    b1 = ((c - h) ** 2) / (16.0 * d)
    c1 = map_.k3 * rd * (map_.k2 * rb - map_.k1 * ra)
    return a1, b1, c1, d


def _pv_map_state(map_: PVMap, sol: PVSolution) -> State:
    ra, rb, rd = _pv_roots(sol.a, sol.b, sol.d)
    k1, k2, k3 = map_.triple

    def out(z: float, order: int) -> Jet:
        K = max(order, 1)
        W = sol.w(z, K + 1)
        wk = W.truncate(K)
        wp = W.deriv()
        zj = jet_var(z, K)
        f1 = (
            zj * wp
            - (k1 * ra) * (wk * wk)
            + (k1 * ra - k2 * rb) * wk
            + (k3 * rd) * (zj * wk)
            + k2 * rb
        )
        return (1.0 - (2.0 * k3 * rd) * (zj * wk) / f1).truncate(order)

    return out


def bt_pv_apply(
    map_: PVMap,
    sol: PVSolution,
    grid: Sequence[float] | None = None,
    tol: float = DEFAULT_TOLERANCE,
) -> BTResult:
    """Apply T_{k1,k2,k3}; reports predicted and inferred parameters."""
    if grid is None:
        grid = default_z_grid()
    predicted = pv_map_params(map_, sol.a, sol.b, sol.c, sol.d)
    state = _pv_map_state(map_, sol)
    new_sol = PVSolution(
        state, *predicted,
        provenance=f"T{map_.triple}[{sol.provenance}]",
    )
    try:
        fit = infer_pv_params(state, samples=grid)
        inferred = (fit.a, fit.b, fit.c)
    except (SingularSystemError, GridDegenerateError):
        return BTResult(new_sol, predicted, None, passed=False, degenerate=True)
    checked = PVSolution(state, fit.a, fit.b, fit.c, sol.d, provenance=new_sol.provenance)
    try:
        passed = verify_on_grid("pv", checked, grid=grid, tol=tol).passed
    except GridDegenerateError:
        return BTResult(new_sol, predicted, inferred, passed=False, degenerate=True)
    return BTResult(new_sol, predicted, inferred, passed=passed)


# -- the transformation catalog -------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """An epsilon interval with explicit endpoint semantics."""

    lo: float | None = None
    hi: float | None = None
    lo_closed: bool = False
    hi_closed: bool = False

    def contains(self, eps: float) -> bool:
        if self.lo is not None and (eps < self.lo or (eps == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (eps > self.hi or (eps == self.hi and not self.hi_closed)):
            return False
        return True

    def at_boundary(self, eps: float) -> bool:
        return (self.lo is not None and eps == self.lo) or (
            self.hi is not None and eps == self.hi
        )

    def describe(self) -> str:
        if self.lo is None and self.hi is None:
            return "all eps"
        parts = []
        if self.lo is not None:
            parts.append(f"{self.lo:g} {'<=' if self.lo_closed else '<'} eps")
        if self.hi is not None:
            parts.append(f"eps {'<=' if self.hi_closed else '<'} {self.hi:g}")
        return " and ".join(parts)


@dataclass(frozen=True)
class CatalogRow:
    source: str
    target: str
    k: tuple[int, int, int]
    window: Window


CATALOG: tuple[CatalogRow, ...] = (
    CatalogRow("w1b", "w2a", (-1, 1, 1), Window(hi=-1.5)),
    CatalogRow("w1b", "w2a", (-1, -1, 1), Window(lo=-1.5, hi=1.5)),
    CatalogRow("w1b", "w2e", (-1, -1, 1), Window(hi=-1.5)),
    CatalogRow("w1b", "w2e", (-1, 1, 1), Window(lo=-1.5, hi=1.5)),
    CatalogRow("w1c", "w2a", (1, -1, 1), Window(lo=0.5)),
    CatalogRow("w1c", "w2d", (1, 1, 1), Window(lo=0.5)),
    CatalogRow("w1c", "w2d", (-1, 1, 1), Window(lo=-0.5, hi=0.5, hi_closed=True)),
    CatalogRow("w1c", "w2d", (-1, -1, 1), Window(hi=-0.5)),
    CatalogRow("w1f", "w2d", (-1, -1, 1), Window()),
    CatalogRow("w1f", "w2e", (-1, 1, 1), Window()),
    CatalogRow("w2d", "w1c", (1, 1, -1), Window(hi=-1.5)),
    CatalogRow("w2d", "w1c", (-1, -1, -1), Window(lo=3.5)),
    CatalogRow("w2d", "w1f", (-1, 1, -1), Window(hi=-1.5)),
    CatalogRow("w2d", "w1f", (1, 1, -1), Window(lo=-1.5)),
    CatalogRow("w2d", "w1f", (1, -1, -1), Window(lo=3.5)),
    CatalogRow("w2e", "w1b", (1, 1, -1), Window(hi=-0.5, hi_closed=True)),
    CatalogRow("w2e", "w1b", (-1, 1, -1), Window(lo=-0.5, lo_closed=True, hi=2.5)),
    CatalogRow("w2e", "w1b", (-1, -1, -1), Window(lo=2.5)),
    CatalogRow("w2e", "w1f", (-1, 1, -1), Window(hi=-0.5, hi_closed=True)),
    CatalogRow("w2e", "w1f", (1, 1, -1), Window(lo=-0.5, lo_closed=True, hi=2.5)),
)


@dataclass(frozen=True)
class CatalogEntry:
    row: CatalogRow
    applicable: bool
    boundary: bool


def bt_pv_catalog(epsilon: float) -> list[CatalogEntry]:
    """The full transformation catalog with window membership evaluated at epsilon."""
    return [
        CatalogEntry(row, row.window.contains(epsilon), row.window.at_boundary(epsilon))
        for row in CATALOG
    ]


def catalog_family_solution(name: str, epsilon: float, parity: Parity) -> PVSolution:
    """Resolve a catalog family name; first-order w1x are closed forms,
    second-order w2x come from the extremal-state construction (eps1 = eps)."""
    if name.startswith("w1"):
        return closed_pv_solution(name[-1], epsilon, parity)
    return derived_pv_solution("H2", name[-1], epsilon, parity)


def check_catalog_row(
    row: CatalogRow,
    epsilon: float,
    parity: Parity,
    grid: Sequence[float] | None = None,
    tol: float = 1e-7,
) -> BTResult:
    """Function-level check of one catalog row at one epsilon and parity.

    Passing means the transformed source matches the independently built
    target pointwise AND satisfies the PV equation with the target's own
    parameter tuple (the unambiguous parameter certificate; the least-squares
    inference stays attached as a drift detector, but its conditioning
    depends on how much the solution varies over the grid).
    """
    if grid is None:
        grid = default_z_grid()
    source = catalog_family_solution(row.source, epsilon, parity)
    target = catalog_family_solution(row.target, epsilon, parity)
    result = bt_pv_apply(PVMap(*row.k), source, grid=grid)
    result.source = row.source
    result.target = row.target
    result.target_params = (target.a, target.b, target.c, target.d)
    try:
        dev, n_valid = pointwise_deviation(result.transformed.w, target.w, grid)
        certified = PVSolution(
            result.transformed.w, target.a, target.b, target.c, target.d,
            provenance=result.transformed.provenance + " @target-params",
        )
        target_report = verify_on_grid("pv", certified, grid=grid, tol=max(tol, 1e-6))
    except GridDegenerateError:
        result.degenerate = True
        result.passed = False
        return result
    result.max_deviation = dev
    result.n_valid = n_valid
    # Parameter certificate: wrong parameters push the residual to O(0.1) at
    # most grid points, while correct ones leave at worst a few isolated
    # conditioning spikes (doubly transformed jets shed digits near poles and
    # at the smallest z).  The 90th percentile is therefore the robust
    # discriminator; the pointwise match above already pins the function.
    valid = sorted(r for r in target_report.rel_residuals if not math.isnan(r))
    p90 = valid[min(len(valid) - 1, (9 * len(valid)) // 10)] if valid else math.inf
    certificate_ok = p90 <= max(tol, 1e-6)
    result.passed = dev <= tol and certificate_ok
    if not certificate_ok:
        result.notes.append(f"target-parameter residual profile fails: p90={p90:.2e}")
    if dev > tol:
        result.notes.append(_mismatch_profile(result.transformed.w, target.w, grid, tol))
    return result
