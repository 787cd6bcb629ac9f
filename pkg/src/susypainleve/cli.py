"""Command-line front end: sample, verify, chain, catalog, defaults.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 numeric
degeneracy.  Output is deterministic: floats are printed with 17 significant
digits in a fixed row order, so identical configurations produce
byte-identical CSV/JSON.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence

from . import config
from .backlund import bt_piv_chain, bt_pv_catalog, check_catalog_row
from .jets import JetError
from .oscillator import Parity, SeedSpec
from .painleve import (
    PIV_FAMILY_NAMES,
    PV_CLOSED_NAMES,
    PV_DERIVED_H1_NAMES,
    PV_DERIVED_H2_NAMES,
    PV_RATIONAL_NAMES,
    PIVSolution,
    family_solution,
)
from .residual import GridDegenerateError, verify_on_grid

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

ALL_FAMILIES = (
    PIV_FAMILY_NAMES + PV_CLOSED_NAMES + PV_DERIVED_H1_NAMES + PV_DERIVED_H2_NAMES
    + PV_RATIONAL_NAMES
)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    epsilon: float | None = None
    parity: Parity | None = None
    grid: tuple[float, float, int] | None = None
    tol: float = config.DEFAULT_TOLERANCE
    jet_order: int = config.DEFAULT_JET_ORDER
    fmt: str = "csv"
    out: str | None = None
    corrupt_b: bool = False

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "family": self.family,
            "epsilon": self.epsilon,
            "parity": self.parity.value if self.parity else None,
            "grid": list(self.grid) if self.grid else None,
            "tol": self.tol,
            "jet_order": self.jet_order,
            "format": self.fmt,
        }


def _parse_grid(text: str) -> tuple[float, float, int]:
    try:
        lo_s, hi_s, n_s = text.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be lo:hi:n, got {text!r}") from None
    if lo <= 0 or hi <= lo or n < 20:
        raise argparse.ArgumentTypeError("grid needs 0 < lo < hi and n >= 20")
    return lo, hi, n


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _solution(cfg: RunConfig):
    sol = family_solution(cfg.family, cfg.epsilon, cfg.parity)
    if cfg.corrupt_b:
        # Negative control for CI: a corrupted parameter must fail verification.
        if isinstance(sol, PIVSolution):
            sol = PIVSolution(sol.g, sol.a, sol.b + 0.1, sol.provenance + " corrupt-b")
        else:
            sol = type(sol)(sol.w, sol.a, sol.b + 0.1, sol.c, sol.d, sol.provenance + " corrupt-b")
    return sol


def _grid_for(cfg: RunConfig, sol) -> list[float]:
    if cfg.grid is not None:
        return config.linear_grid(*cfg.grid)
    if isinstance(sol, PIVSolution):
        return config.default_x_grid()
    return config.default_z_grid()


def _params_dict(sol) -> dict:
    if isinstance(sol, PIVSolution):
        return {"a": sol.a, "b": sol.b}
    return {"a": sol.a, "b": sol.b, "c": sol.c, "d": sol.d}


def cmd_sample(cfg: RunConfig) -> int:
    sol = _solution(cfg)
    grid = _grid_for(cfg, sol)
    fn = sol.g if isinstance(sol, PIVSolution) else sol.w
    rows = []
    n_poles = 0
    for t in grid:
        try:
            jet = fn(t, 1)
            rows.append((t, jet.d[0], jet.d[1], 0))
        except JetError:
            rows.append((t, float("nan"), float("nan"), 1))
            n_poles += 1
    if n_poles == len(rows):
        print("error: every grid point is pole-guarded", file=sys.stderr)
        return EXIT_DEGENERATE

    params = _params_dict(sol)
    if cfg.fmt == "csv":
        header = "# family=%s %s provenance=%s\n" % (
            cfg.family,
            " ".join(f"{k}={_fmt(v)}" for k, v in params.items()),
            sol.provenance,
        )
        var = "x" if isinstance(sol, PIVSolution) else "z"
        lines = [header, f"{var},value,deriv1,pole_flag\n"]
        for t, v, dv, flag in rows:
            lines.append(f"{_fmt(t)},{_fmt(v)},{_fmt(dv)},{flag}\n")
        _emit("".join(lines), cfg.out)
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": cfg.to_dict(),
            "parameters": params,
            "provenance": sol.provenance,
            "points": [
                {"t": t, "value": _json_num(v), "deriv1": _json_num(dv), "pole": bool(flag)}
                for t, v, dv, flag in rows
            ],
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg.out)
    return EXIT_OK


def _json_num(v: float):
    """nan (a guarded point) serializes as null to keep the JSON strict."""
    return None if math.isnan(v) else v


def cmd_verify(cfg: RunConfig) -> int:
    sol = _solution(cfg)
    kind = "piv" if isinstance(sol, PIVSolution) else "pv"
    grid = _grid_for(cfg, sol)
    try:
        report = verify_on_grid(kind, sol, grid=grid, tol=cfg.tol, order=max(2, cfg.jet_order))
    except GridDegenerateError as exc:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": cfg.to_dict(),
            "parameters": _params_dict(sol),
            "report": {"degenerate": True, "detail": str(exc)},
        }
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg.out)
        return EXIT_DEGENERATE
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.to_dict(),
        "parameters": _params_dict(sol),
        "points": [
            {"t": t, "rel_residual": _json_num(r)}
            for t, r in zip(report.grid, report.rel_residuals)
        ],
        "report": report.to_dict(),
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg.out)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def cmd_chain(cfg: RunConfig) -> int:
    seed = SeedSpec(cfg.epsilon, cfg.parity)
    grid = config.linear_grid(*cfg.grid) if cfg.grid else None
    links = bt_piv_chain(seed, grid=grid, tol=cfg.tol)
    rows = []
    for link in links:
        rows.append({
            "source": link.source,
            "target": link.target,
            "branches": list(link.branches),
            "pass": link.passed,
            "degenerate": link.degenerate,
            "max_deviation": link.max_deviation,
            "predicted_params": list(link.predicted) if link.predicted else None,
            "target_params": list(link.target_params) if link.target_params else None,
            "inferred_params": list(link.inferred) if link.inferred else None,
            "notes": link.notes,
        })
    doc = {"schema_version": SCHEMA_VERSION, "config": cfg.to_dict(), "links": rows}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg.out)
    hard_fail = any(not r["pass"] and not r["degenerate"] for r in rows)
    return EXIT_VERIFY_FAIL if hard_fail else EXIT_OK


def cmd_catalog(cfg: RunConfig) -> int:
    entries = bt_pv_catalog(cfg.epsilon)
    grid = config.linear_grid(*cfg.grid) if cfg.grid else None
    rows = []
    hard_fail = False
    for entry in entries:
        row = {
            "source": entry.row.source,
            "target": entry.row.target,
            "k": list(entry.row.k),
            "window": entry.row.window.describe(),
            "applicable": entry.applicable,
            "boundary": entry.boundary,
        }
        if entry.applicable and cfg.parity is not None:
            try:
                res = check_catalog_row(entry.row, cfg.epsilon, cfg.parity, grid=grid,
                                        tol=max(cfg.tol, 1e-7))
                row["pass"] = res.passed
                row["degenerate"] = res.degenerate
                row["max_deviation"] = res.max_deviation
                row["notes"] = res.notes
                if not res.passed and not res.degenerate and not entry.boundary:
                    hard_fail = True
            except (GridDegenerateError, JetError) as exc:
                row["pass"] = False
                row["degenerate"] = True
                row["detail"] = str(exc)
        rows.append(row)
    doc = {"schema_version": SCHEMA_VERSION, "config": cfg.to_dict(), "rows": rows}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg.out)
    return EXIT_VERIFY_FAIL if hard_fail else EXIT_OK


def cmd_defaults(cfg: RunConfig) -> int:
    doc = {"schema_version": SCHEMA_VERSION, "defaults": config.defaults_dict()}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", cfg.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="susy-painleve",
        description="Generate and certify Painleve IV/V solutions built by SUSY "
        "transformations of the truncated oscillator.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, family=False):
        sp.add_argument("--epsilon", "--epsilon1", dest="epsilon", type=float,
                        help="factorization energy (eps or eps1, family-dependent)")
        sp.add_argument("--parity", choices=["odd", "even"])
        if family:
            sp.add_argument("--family", required=False, help=f"one of {', '.join(ALL_FAMILIES)}")
        sp.add_argument("--grid", type=_parse_grid, help="lo:hi:n (n >= 20)")
        sp.add_argument("--tol", type=float, default=config.DEFAULT_TOLERANCE)
        sp.add_argument("--jet-order", type=int, default=config.DEFAULT_JET_ORDER)
        sp.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
        sp.add_argument("--out", help="output path (default stdout)")

    sp = sub.add_parser("sample", help="tabulate a solution family member")
    sp.add_argument("family_pos", nargs="?", help="family selector (or use --family)")
    add_common(sp, family=True)

    sp = sub.add_parser("verify", help="residual-verify a family member")
    sp.add_argument("family_pos", nargs="?")
    add_common(sp, family=True)
    sp.add_argument("--corrupt-b", action="store_true",
                    help="negative control: corrupt b before verifying")

    sp = sub.add_parser("chain", help="run the five-link PIV Backlund chain")
    add_common(sp)

    sp = sub.add_parser("catalog", help="evaluate the PV Backlund catalog at epsilon")
    add_common(sp)

    sp = sub.add_parser("defaults", help="print the centralized numeric defaults")
    sp.add_argument("--out")

    return p


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    family = getattr(args, "family_pos", None) or getattr(args, "family", None)
    parity = Parity(args.parity) if getattr(args, "parity", None) else None
    return RunConfig(
        command=args.command,
        family=family,
        epsilon=getattr(args, "epsilon", None),
        parity=parity,
        grid=getattr(args, "grid", None),
        tol=getattr(args, "tol", config.DEFAULT_TOLERANCE),
        jet_order=getattr(args, "jet_order", config.DEFAULT_JET_ORDER),
        fmt=getattr(args, "fmt", "csv"),
        out=getattr(args, "out", None),
        corrupt_b=getattr(args, "corrupt_b", False),
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    cfg = _config_from_args(args)

    try:
        if cfg.command == "defaults":
            return cmd_defaults(cfg)
        if cfg.command == "sample":
            _require_family(cfg)
            return cmd_sample(cfg)
        if cfg.command == "verify":
            _require_family(cfg)
            return cmd_verify(cfg)
        if cfg.command == "chain":
            _require_seed(cfg)
            return cmd_chain(cfg)
        if cfg.command == "catalog":
            _require_epsilon(cfg)
            return cmd_catalog(cfg)
        print(f"error: unknown command {cfg.command!r}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GridDegenerateError as exc:
        print(f"error: degenerate configuration: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


class UsageError(ValueError):
    pass


def _require_family(cfg: RunConfig) -> None:
    if not cfg.family:
        raise UsageError("a family selector is required")
    if cfg.family not in ALL_FAMILIES:
        raise UsageError(f"unknown family {cfg.family!r}")
    if cfg.family not in PV_RATIONAL_NAMES:
        if cfg.epsilon is None or cfg.parity is None:
            raise UsageError(f"family {cfg.family!r} needs --epsilon and --parity")


def _require_seed(cfg: RunConfig) -> None:
    if cfg.epsilon is None or cfg.parity is None:
        raise UsageError("chain needs --epsilon and --parity")


def _require_epsilon(cfg: RunConfig) -> None:
    if cfg.epsilon is None:
        raise UsageError("catalog needs --epsilon")


if __name__ == "__main__":
    raise SystemExit(main())
