"""Command-line driver: ``logdiff <command> --config <path> [--out <dir>] [--seed <int>] [--threads <int>]``.

Every run writes ``summary.json`` and, depending on the command,
``diagnostics.csv``, ``snapshots/`` and PNG figures into the output directory.
The exit status is 0 iff every asserted invariant passed.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import plotting
from .analysis import (AronsonBenilanMonitor, CompanionMonitor, DistanceMonitor, MassMonitor,
                       SandwichMonitor, barenblatt_reference, check_contraction, check_envelope,
                       l1_distance, mass_function, match_k0, scheme_l1_distance, weighted_l1_distance)
from .barenblatt import (BarenblattSpec, barenblatt_value, drift_diffusion_bound, drift_diffusion_lhs,
                         laplacian_weight_identity, rescale_identity_check, rescaled_barenblatt_profile,
                         rescaled_barenblatt_value, residual_rescaled_pde, weight_value)
from .config import COMMANDS, ConfigError, InitialData, RunConfig, parse_config
from .grid import DivergentIntegralError, RadialProfile, make_grid, radial_laplacian_values
from .initial import build_initial, reference_profile
from .solver import (RECORD_FIELDS, DiagnosticsSeries, EvolutionState, FittedTail, PinnedBarenblatt,
                     SolverConfig, evolve)
from .transform import Frame

log = logging.getLogger("logdiff")

SCHEMA_VERSION = "logdiff-run/1"
EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3

SANDWICH_RTOL = 1e-6
AB_RTOL = 1e-8
COEFF_TOL = 1e-10
IDENTITY_TOL = 1e-12
STATIONARITY_TOL = 1e-3


@dataclass
class Outcome:
    """Checks (asserted) and report entries (informational) of one run."""

    checks: Dict[str, dict] = field(default_factory=dict)
    report: Dict[str, object] = field(default_factory=dict)

    def check(self, name: str, passed: bool, **details):
        self.checks[name] = {"passed": bool(passed), **details}

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks.values())

    def first_failure(self) -> Optional[str]:
        return next((n for n, c in self.checks.items() if not c["passed"]), None)


# ---------------------------------------------------------------------------
# output helpers


def _cell(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return repr(float(value))


def write_diagnostics(series: DiagnosticsSeries, path: Path):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORD_FIELDS)
        for rec in series.records:
            writer.writerow([_cell(rec.get(name)) for name in RECORD_FIELDS])


def write_pairwise(series: DiagnosticsSeries, path: Path):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("clock", "pair_l1_dist", "pair_scheme_l1_dist"))
        for rec in series.records:
            writer.writerow([_cell(rec["clock"]), _cell(rec.get("pair_l1_dist")),
                             _cell(rec.get("pair_scheme_l1_dist"))])


def write_snapshot(profile: RadialProfile, clock: float, frame: str, directory: Path, index: int):
    directory.mkdir(parents=True, exist_ok=True)
    stem = f"snap_{index:03d}"
    with (directory / f"{stem}.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("r", "value"))
        for r, v in zip(profile.grid.nodes, profile.values):
            writer.writerow((repr(float(r)), repr(float(v))))
    meta = {"clock": clock, "frame": frame, "dimension": profile.grid.dimension,
            "tail": None if profile.tail is None else {"c": profile.tail[0], "k": profile.tail[1]}}
    (directory / f"{stem}.json").write_text(json.dumps(meta, indent=2) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


class SnapshotRecorder:
    """Monitor keeping the first accepted state at or after each requested clock."""

    def __init__(self, clocks):
        self.pending = sorted(clocks)
        self.taken: List[Tuple[float, RadialProfile]] = []

    def __call__(self, prev, new, dt):
        while self.pending and new.clock >= self.pending[0] - 1e-9:
            self.pending.pop(0)
            self.taken.append((new.clock, new.profile))
        return {}


class AbTracker(AronsonBenilanMonitor):
    """Aronson-Benilan monitor that also tracks the violation relative to ``sup u``."""

    def __init__(self):
        self.worst_relative = 0.0

    def __call__(self, prev, new, dt):
        out = super().__call__(prev, new, dt)
        self.worst_relative = max(self.worst_relative, out["ab_violation"] / float(np.max(new.profile.values)))
        return out


# ---------------------------------------------------------------------------
# shared setup


def _grid(cfg: RunConfig):
    r_max, m, stretch = cfg.grid_params()
    return make_grid(r_max, m, stretch, cfg.N)


def _solver_config(cfg: RunConfig, frame: Frame, boundary_k: Optional[float]) -> SolverConfig:
    if cfg.boundary == "pinned":
        if boundary_k is None:
            raise ConfigError("pinned boundary needs boundary_k (or k0)")
        boundary = PinnedBarenblatt(boundary_k)
    else:
        boundary = FittedTail()
    return SolverConfig(cfg.dt, frame, boundary, newton_tol=cfg.newton_tol,
                        newton_max_iter=cfg.newton_max_iter, positivity_floor=cfg.positivity_floor,
                        scheme=cfg.scheme)


def _natural_k(desc: InitialData) -> float:
    if desc.kind == "mean-of-barenblatts":
        ka, kb, w = desc.params
        return (w * math.sqrt(ka) + (1.0 - w) * math.sqrt(kb)) ** 2
    return desc.params[0]


def _finish_run(cfg, out: Path, series, snaps, initial, final, frame_kind, reference, outcome):
    write_diagnostics(series, out / "diagnostics.csv")
    if series.records and "pair_l1_dist" in series.records[0]:
        write_pairwise(series, out / "pairwise.csv")
    shots = [(initial.clock, initial.profile)] + snaps.taken + [(final.clock, final.profile)]
    for i, (clock, prof) in enumerate(shots):
        write_snapshot(prof, clock, frame_kind, out / "snapshots", i)
    if series.records:
        plotting.plot_diagnostics(series, out / "diagnostics.png", title=cfg.command)
    plotting.plot_profiles(shots, out / "profiles.png", reference=reference, title=cfg.command)
    outcome.report.update(steps=len(series), halvings=series.halvings, final_clock=final.clock,
                          extinction_clock=series.extinction_clock)


def _margin_checks(outcome: Outcome, series: DiagnosticsSeries, sup_high: float, coeff: bool):
    low = np.nanmin(series.column("sandwich_margin_low")) if len(series) else math.inf
    high = np.nanmin(series.column("sandwich_margin_high")) if len(series) else math.inf
    limit = -SANDWICH_RTOL * sup_high
    outcome.check("sandwich", min(low, high) >= limit, min_low=low, min_high=high, limit=limit)
    if coeff:
        worst = np.nanmin(series.column("coeff_bound_margin")) if len(series) else math.inf
        outcome.check("coefficient_bounds", worst >= -COEFF_TOL, min_margin=worst, limit=-COEFF_TOL)


# ---------------------------------------------------------------------------
# commands


def cmd_simulate(cfg: RunConfig, out: Path, seed: int) -> Outcome:
    outcome = Outcome()
    grid = _grid(cfg)
    frame = Frame(cfg.frame, cfg.T, cfg.N)
    k_ref = next((x for x in (cfg.k0, cfg.boundary_k, cfg.k) if x is not None), _natural_k(cfg.initial))
    solver_cfg = _solver_config(cfg, frame, cfg.boundary_k if cfg.boundary_k is not None else k_ref)
    u0 = build_initial(cfg.initial, grid, frame)
    initial = EvolutionState(u0, cfg.start_clock(), 0, frame)
    reference = barenblatt_reference(grid, k_ref, frame)
    monitors = [DistanceMonitor(reference, cfg.k2 if cfg.N >= 5 and cfg.k2 is not None else None)]
    if cfg.N == 3:
        monitors.append(MassMonitor(reference))
    if cfg.k1 is not None:
        monitors.append(SandwichMonitor(cfg.k1, cfg.k2, frame))
    ab = AbTracker() if frame.is_physical else None
    if ab is not None:
        monitors.append(ab)
    snaps = SnapshotRecorder(cfg.snapshots)
    monitors.append(snaps)
    horizon = cfg.end_clock()
    final, series = evolve(initial, solver_cfg, horizon, monitors)
    outcome.report.update(reference_k=k_ref)
    if cfg.k1 is not None:
        sup_high = float(np.max(reference_profile(grid, cfg.k2, frame).values))
        _margin_checks(outcome, series, sup_high, coeff=False)
    if ab is not None:
        outcome.check("aronson_benilan", ab.worst_relative <= AB_RTOL,
                      worst_relative=ab.worst_relative, limit=AB_RTOL)
        if horizon > cfg.T + cfg.dt:
            ext = series.extinction_clock
            outcome.check("extinction_by_T", ext is not None and ext <= cfg.T + cfg.dt,
                          extinction_clock=ext, limit=cfg.T + cfg.dt)
    _finish_run(cfg, out, series, snaps, initial, final, frame.kind, None, outcome)
    return outcome


def cmd_barenblatt_table(cfg: RunConfig, out: Path, seed: int) -> Outcome:
    outcome = Outcome()
    spec = BarenblattSpec(cfg.k, cfg.T, cfg.N)
    radii = np.array(cfg.table_radii, dtype=float)
    times = np.array(cfg.table_times, dtype=float)
    table = np.array([[barenblatt_value(r, t, spec) for t in times] for r in radii])
    with (out / "barenblatt_table.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("r", "t", "value", "s", "y", "rescaled_value"))
        for i, r in enumerate(radii):
            for j, t in enumerate(times):
                if t < cfg.T:
                    tau = cfg.T - t
                    y = r * tau ** (1.0 / (cfg.N - 2))
                    row = (r, t, table[i, j], -math.log(tau), y, rescaled_barenblatt_value(y, cfg.k, cfg.N))
                else:
                    row = (r, t, table[i, j], None, None, None)
                writer.writerow([_cell(x) for x in row])
    grid = _grid(cfg)
    worst = max((rescale_identity_check(spec, t, grid) for t in times if t < cfg.T), default=0.0)
    outcome.check("rescale_identity", worst <= IDENTITY_TOL, max_error=worst, limit=IDENTITY_TOL)
    plotting.plot_table(radii, times, table, out / "barenblatt_table.png")
    return outcome


def _matched_k0(desc: InitialData, cfg: RunConfig, bracket=None) -> Tuple[float, Tuple[float, float]]:
    if cfg.command == "match-k0":
        grid = _grid(cfg)
    else:
        grid = make_grid(1000.0, 4000, 1.002, 3)
    u0 = build_initial(desc, grid, Frame("physical", cfg.T, 3))
    if bracket is None:
        if desc.kind == "mean-of-barenblatts":
            bracket = (min(desc.params[:2]), max(desc.params[:2]))
        else:
            bracket = (0.25 * desc.params[0], 4.0 * desc.params[0])
    return match_k0(u0, cfg.T, 3, bracket), bracket


def cmd_match_k0(cfg: RunConfig, out: Path, seed: int) -> Outcome:
    outcome = Outcome()
    bracket = cfg.bracket
    if bracket is None and cfg.k1 is not None:
        bracket = (cfg.k2, cfg.k1)
    k0, bracket = _matched_k0(cfg.initial, cfg, bracket)
    outcome.report["k0"] = k0
    outcome.report["bracket"] = list(bracket)
    outcome.check("root_found", True, k0=k0)
    if cfg.initial.kind == "mean-of-barenblatts":
        outcome.report["k0_closed_form"] = _natural_k(cfg.initial)
    grid = _grid(cfg)
    u0 = build_initial(cfg.initial, grid, Frame("physical", cfg.T, 3))
    ks = np.linspace(bracket[0], bracket[1], 21)
    values = [mass_function(u0, k, cfg.T) for k in ks]
    with (out / "mass_function.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("k", "mass_function"))
        for k, v in zip(ks, values):
            writer.writerow((_cell(k), _cell(v)))
    plotting.plot_curve(ks, values, out / "mass_function.png", "k", "int (u0 - B_k(.,0)) dx", marker=k0)
    return outcome


def _stationarity_drift(k: float, N: int, r_max: float, m_nodes: int, stretch: float, cfg: RunConfig) -> float:
    grid = make_grid(r_max, m_nodes, stretch, N)
    frame = Frame("selfsimilar", 1.0, N)
    b = rescaled_barenblatt_profile(grid, k)
    solver_cfg = SolverConfig(cfg.dt, frame, PinnedBarenblatt(k), newton_tol=cfg.newton_tol,
                              newton_max_iter=cfg.newton_max_iter, scheme=cfg.scheme)
    final, _ = evolve(EvolutionState(b, 0.0, 0, frame), solver_cfg, 1.0)
    return float(np.max(np.abs(final.profile.values - b.values) / b.values))


def cmd_verify(cfg: RunConfig, out: Path, seed: int) -> Outcome:
    outcome = Outcome()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cfg.identity_samples):
        n = int(rng.integers(3, 8))
        spec = BarenblattSpec(float(rng.uniform(0.1, 10.0)), float(rng.uniform(0.1, 10.0)), n)
        t = spec.T * float(rng.uniform(-1.0, 1.0 - 1e-9))
        grid = make_grid(float(rng.uniform(1.0, 50.0)), 32, 1.0, n)
        worst = max(worst, rescale_identity_check(spec, t, grid))
    outcome.check("rescale_identity", worst <= IDENTITY_TOL, max_error=worst, limit=IDENTITY_TOL,
                  samples=cfg.identity_samples)

    r_max, m, stretch = cfg.grid_params()
    drift = _stationarity_drift(cfg.k, cfg.N, r_max, m, stretch, cfg)
    drift_fine = _stationarity_drift(cfg.k, cfg.N, r_max, 2 * m, stretch, cfg)
    outcome.check("stationarity", drift <= STATIONARITY_TOL, drift=drift, limit=STATIONARITY_TOL)
    outcome.check("stationarity_refinement", drift / drift_fine >= 3.0, drift=drift,
                  drift_doubled=drift_fine, ratio=drift / drift_fine, limit=3.0)

    res = []
    for mm in (m, 2 * m):
        grid = make_grid(r_max, mm, stretch, cfg.N)
        res.append(float(np.max(np.abs(residual_rescaled_pde(rescaled_barenblatt_profile(grid, cfg.k)).values[:-1]))))
    outcome.check("residual_order", res[0] / res[1] >= 3.0, residual=res[0], residual_doubled=res[1],
                  ratio=res[0] / res[1], limit=3.0)

    if cfg.N >= 5:
        r = np.linspace(0.0, r_max, 201)
        lhs = drift_diffusion_lhs(r, cfg.k, cfg.N)
        rhs = drift_diffusion_bound(r, cfg.k, cfg.N)
        rel = float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))
        outcome.check("drift_diffusion_identity", rel <= IDENTITY_TOL, max_rel_error=rel, limit=IDENTITY_TOL)
        errs = []
        for mm in (m, 2 * m):
            grid = make_grid(r_max, mm, stretch, cfg.N)
            alpha = (cfg.N - 4) / 2.0
            lap = radial_laplacian_values(weight_value(grid.nodes, alpha, cfg.k, cfg.N), grid)
            errs.append(float(np.max(np.abs(lap - laplacian_weight_identity(grid.nodes, cfg.k, cfg.N))[:-1])))
        outcome.check("weight_laplacian_order", errs[0] / errs[1] >= 3.0, error=errs[0],
                      error_doubled=errs[1], ratio=errs[0] / errs[1], limit=3.0)
    (out / "verify.json").write_text(json.dumps(_jsonable(outcome.checks), indent=2) + "\n")
    return outcome


def _theorem_run(cfg: RunConfig, out: Path, k0: float, u0: RadialProfile, grid, weighted: bool) -> Outcome:
    outcome = Outcome()
    frame = Frame("selfsimilar", cfg.T, cfg.N)
    solver_cfg = _solver_config(cfg, frame, cfg.boundary_k if cfg.boundary_k is not None else k0)
    ref = rescaled_barenblatt_profile(grid, k0)
    start = cfg.start_clock()
    initial = EvolutionState(u0, start, 0, frame)
    companion = CompanionMonitor(EvolutionState(ref, start, 0, frame), solver_cfg, cfg.k1, cfg.k2)
    snaps = SnapshotRecorder(cfg.snapshots)
    monitors = [DistanceMonitor(ref, cfg.k2 if weighted else None), SandwichMonitor(cfg.k1, cfg.k2, frame),
                companion, snaps]
    if cfg.N == 3:
        monitors.insert(1, MassMonitor(ref))
    final, series = evolve(initial, solver_cfg, cfg.end_clock(), monitors)

    d0 = l1_distance(u0, ref)
    outcome.report.update(k0=k0, initial_l1_dist=d0)
    if weighted:
        w0 = weighted_l1_distance(u0, ref, cfg.k2, cfg.N)
        report = check_contraction(_prepend(series, start, "weighted_l1_dist", w0), "weighted_l1",
                                   checkpoint_spacing=cfg.checkpoint_spacing)
        outcome.check("weighted_decrease", report.passed, **_details(report))
        try:
            weighted_l1_distance(rescaled_barenblatt_profile(grid, cfg.k1),
                                 rescaled_barenblatt_profile(grid, cfg.k2), cfg.k2, cfg.N)
            outcome.check("divergence_certificate", False, detail="Barenblatt difference was accepted")
        except DivergentIntegralError as exc:
            outcome.check("divergence_certificate", True, detail=str(exc))
    else:
        report = check_contraction(_prepend(series, start, "l1_dist", d0), "plain_l1",
                                   checkpoint_spacing=cfg.checkpoint_spacing)
        outcome.check("l1_decrease", report.passed, **_details(report))
        if len(series):
            outcome.report["final_over_initial"] = series.records[-1]["l1_dist"] / d0
    # the scheme contracts exactly in its own cell measure; the trapezoid
    # distance only up to O(h^2), which is visible for N >= 5
    columns = [("pairwise_contraction", "pair_scheme_l1_dist", scheme_l1_distance(u0, ref))]
    if cfg.N == 3:
        columns.append(("pairwise_contraction_quadrature", "pair_l1_dist", d0))
    for name, column, first in columns:
        pair = check_contraction(_prepend(series, start, column, first), "plain_l1", column=column,
                                 checkpoint_spacing=cfg.checkpoint_spacing)
        outcome.check(name, pair.nonincreasing, max_relative_increase=pair.max_relative_increase,
                      failures=pair.failures[:5])
    if cfg.N != 3:
        pair = check_contraction(_prepend(series, start, "pair_l1_dist", d0), "plain_l1", column="pair_l1_dist")
        outcome.report["pair_l1_max_relative_increase"] = pair.max_relative_increase
    sup_high = float(rescaled_barenblatt_value(0.0, cfg.k2, cfg.N))
    _margin_checks(outcome, series, sup_high, coeff=True)

    shots = [(initial.clock, initial.profile)] + snaps.taken + [(final.clock, final.profile)]
    env = check_envelope([p for _, p in shots], [c for c, _ in shots], cfg.envelope_r0, d0)
    outcome.report["envelope"] = env.as_dict()
    _finish_run(cfg, out, series, snaps, initial, final, frame.kind, ref, outcome)
    return outcome


def _details(report) -> dict:
    return {k: v for k, v in report.as_dict().items() if k != "passed"}


def _prepend(series: DiagnosticsSeries, clock: float, column: str, value: float) -> DiagnosticsSeries:
    """Series with the initial distance as its first record, so step 1 is also checked."""
    out = DiagnosticsSeries()
    out.append({"clock": clock, column: value})
    for rec in series.records:
        out.append({"clock": rec["clock"], column: rec.get(column)})
    return out


def cmd_theorem1(cfg: RunConfig, out: Path, seed: int) -> Outcome:
    desc = cfg.initial or InitialData("mean-of-barenblatts", (cfg.k1, cfg.k2, 0.5))
    grid = _grid(cfg)
    if cfg.k0 is not None:
        k0 = cfg.k0
    else:
        k0, _ = _matched_k0(desc, cfg, cfg.bracket or (cfg.k2, cfg.k1))
    u0 = build_initial(desc, grid, Frame("selfsimilar", cfg.T, cfg.N))
    return _theorem_run(cfg, out, k0, u0, grid, weighted=False)


def cmd_theorem2(cfg: RunConfig, out: Path, seed: int) -> Outcome:
    k0 = cfg.k0 if cfg.k0 is not None else cfg.initial.params[0]
    desc = cfg.initial or InitialData("barenblatt-plus-bump", (k0, 0.1, 1.0, 2.0))
    grid = _grid(cfg)
    u0 = build_initial(desc, grid, Frame("selfsimilar", cfg.T, cfg.N))
    return _theorem_run(cfg, out, k0, u0, grid, weighted=True)


HANDLERS = {
    "simulate": cmd_simulate,
    "barenblatt-table": cmd_barenblatt_table,
    "match-k0": cmd_match_k0,
    "verify": cmd_verify,
    "theorem1": cmd_theorem1,
    "theorem2": cmd_theorem2,
}


def run(cfg: RunConfig, out: Path, seed: int = 0) -> int:
    """Execute one configuration; returns the exit status."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    summary = {"schema": SCHEMA_VERSION, "command": cfg.command, "seed": seed, "config": cfg.as_dict()}
    try:
        outcome = HANDLERS[cfg.command](cfg, out, seed)
    except Exception as exc:  # every failure must still produce a summary
        summary.update(status="error", passed=False, first_failure=f"{type(exc).__name__}: {exc}")
        log.debug("run failed:\n%s", traceback.format_exc())
        code = EXIT_CONFIG if isinstance(exc, ConfigError) else EXIT_RUNTIME
    else:
        summary.update(status="ok" if outcome.passed else "failed", passed=outcome.passed,
                       first_failure=outcome.first_failure(), checks=outcome.checks, **outcome.report)
        code = EXIT_OK if outcome.passed else EXIT_INVARIANT
    (out / "summary.json").write_text(json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n")
    return code


def _run_one(args) -> int:
    command, path, out, seed = args
    try:
        cfg = parse_config(Path(path).read_text(encoding="utf-8"), command)
    except (ConfigError, OSError) as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code = run(cfg, out, seed)
    summary = json.loads((Path(out) / "summary.json").read_text())
    status = summary["status"]
    line = f"{path}: {status}"
    if summary.get("first_failure"):
        line += f" (first failure: {summary['first_failure']})"
    if "k0" in summary:
        line += f" k0={summary['k0']!r}"
    print(line)
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logdiff", description="Numerical laboratory for u_t = Δ log u near extinction.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", action="append", required=True,
                   help="key = value run configuration; repeat for a batch")
    p.add_argument("--out", default="logdiff-out", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--threads", type=int, default=1, help="concurrent configs in a batch")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 1:
        print("--threads must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(args.out)
    if len(args.config) == 1:
        jobs = [(args.command, args.config[0], out, args.seed)]
    else:
        stems = [Path(c).stem for c in args.config]
        if len(set(stems)) != len(stems):
            print("batch configs need distinct file names", file=sys.stderr)
            return EXIT_CONFIG
        jobs = [(args.command, c, out / s, args.seed) for c, s in zip(args.config, stems)]
    if args.threads == 1 or len(jobs) == 1:
        codes = [_run_one(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            codes = list(pool.map(_run_one, jobs))
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())
