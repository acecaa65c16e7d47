"""Configuration-driven experiment runner with machine-readable reports.

One JSON config describes one experiment; ``lattice-limit run`` executes
it and writes ``report.json`` (embedding the fully resolved config),
``rates.csv`` with columns ``h,error,bound``, and grid snapshots under
``grids/``.  The exit status is 0 exactly when every verdict passed.
All randomness flows from the mandatory config seed through a
counter-based bit generator, one stream per work item, so reports are
byte-identical across runs and thread counts.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import estimators, lattice, scaling, symbols

log = logging.getLogger("lattice_limit")

EXPERIMENTS = ("phi-check", "free-rates", "commutator-rates", "resolvent-rates",
               "spectrum", "projection", "hausdorff")
RATE_EXPERIMENTS = ("free-rates", "commutator-rates", "resolvent-rates")
SWEEP_EXPERIMENTS = RATE_EXPERIMENTS + ("spectrum", "projection")

DEFAULT_TOLERANCES = {
    "partition": 1e-10,
    "orthonormality": 1e-8,
    "rate": 0.1,
    "min_r_squared": 0.95,
    "solver": 1e-9,
    "op_norm": 1e-4,
    "eig": 1e-6,
    "fiber_agreement": 0.1,
    "spectrum_final": 1e-2,
    "projection_final": 0.05,
    "hausdorff_slack": 1e-10,
}


class ConfigError(ValueError):
    """Invalid experiment configuration; message carries a config line number."""


def _line_of(raw: str, key: str) -> int:
    """Best-effort line number of a key in the raw config text."""
    needle = f'"{key}"'
    for i, line in enumerate(raw.splitlines(), start=1):
        if needle in line:
            return i
    return 1


def _fail(raw: str, key: str, message: str) -> None:
    raise ConfigError(f"line {_line_of(raw, key)}: {message}")


def stream_rng(seed: int, stream: int) -> np.random.Generator:
    """Independent reproducible stream from the config seed (counter-based)."""
    return np.random.Generator(np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, stream]))


def resolve_config(data: dict, raw: str = "") -> dict:
    """Validate a config dict and fill in every default (no hidden ones)."""
    if not isinstance(data, dict):
        raise ConfigError("line 1: config must be a JSON object")
    experiment = data.get("experiment")
    if experiment not in EXPERIMENTS:
        _fail(raw, "experiment", f"experiment must be one of {', '.join(EXPERIMENTS)}")
    if not isinstance(data.get("seed"), int):
        _fail(raw, "seed", "an integer seed is mandatory")

    cfg = {
        "experiment": experiment,
        "seed": data["seed"],
        "scaling": scaling.ScalingFunction.from_json_dict(
            data.get("scaling", {})).to_json_dict(),
        "lattice": {
            "dimension": int(data.get("lattice", {}).get("dimension", 1)),
            "extent": float(data.get("lattice", {}).get("extent", 8.0)),
            "refinement": int(data.get("lattice", {}).get("refinement", 8)),
        },
        "potential": data.get("potential"),
        "probe": [float(x) for x in data.get("probe", [-1.0, 0.0])],
        "h_list": [float(h) for h in data.get("h_list", [])],
        "grid_points": int(data.get("grid_points", 512)),
        "gamma": float(data.get("gamma", 0.9)),
        "window": [float(x) for x in data.get("window", [0.0, 2.0])],
        "modes": int(data.get("modes", 8)),
        "trials": int(data.get("trials", 1000)),
        "size": int(data.get("size", 20)),
        "tolerances": {**DEFAULT_TOLERANCES, **data.get("tolerances", {})},
    }

    try:
        mu = complex(cfg["probe"][0], cfg["probe"][1])
        symbols.ResolventProbe(mu)
    except (ValueError, IndexError):
        _fail(raw, "probe", "probe must be [re, im] with mu outside [0, inf)")

    h_list = cfg["h_list"]
    if experiment in SWEEP_EXPERIMENTS:
        if not h_list:
            _fail(raw, "h_list", f"{experiment} requires a mesh list")
        if any(b >= a for a, b in zip(h_list, h_list[1:])):
            _fail(raw, "h_list", "h_list must be strictly decreasing")
        if experiment in RATE_EXPERIMENTS and len(h_list) < 3:
            _fail(raw, "h_list", "rate experiments need at least 3 meshes")

    if experiment in ("commutator-rates", "spectrum", "projection") and not cfg["potential"]:
        _fail(raw, "potential", f"{experiment} requires a potential")

    if cfg["potential"] is not None:
        pot = build_potential(cfg["potential"], raw)
        extent = cfg["lattice"]["extent"]
        checks = lattice.check_assumption(pot, extent, cfg["lattice"]["dimension"],
                                          rng=stream_rng(cfg["seed"], 2 ** 32))
        if not checks["ok"]:
            _fail(raw, "potential",
                  f"potential fails the validity checks: {checks}")
        cfg["potential_checks"] = checks

    if experiment in ("resolvent-rates", "spectrum", "projection", "commutator-rates"):
        extent = cfg["lattice"]["extent"]
        for h in h_list:
            try:
                lattice.spec_from_extent(extent, h, cfg["lattice"]["dimension"])
            except ValueError as exc:
                _fail(raw, "h_list", str(exc))

    window = cfg["window"]
    if experiment == "projection" and not window[0] < window[1]:
        _fail(raw, "window", "window must satisfy a < b")
    return cfg


def build_potential(spec: dict | None, raw: str = "") -> lattice.PotentialSpec | None:
    if spec is None:
        return None
    kind = spec.get("kind")
    try:
        if kind == "bounded_uc":
            return lattice.bounded_uc_potential(tuple(spec.get("wavevector", (1.0,))))
        if kind == "hoelder":
            return lattice.hoelder_potential(float(spec.get("alpha", 0.5)),
                                             tuple(spec.get("wavevector", (1.0,))))
        if kind == "growth":
            return lattice.growth_potential(float(spec.get("a", 1.0)),
                                            float(spec.get("kappa", 2.0)))
        if kind == "harmonic":
            return lattice.harmonic_potential()
        if kind == "constant":
            return lattice.constant_potential(float(spec.get("value", 1.0)))
    except ValueError as exc:
        _fail(raw, "potential", str(exc))
    _fail(raw, "kind", f"unknown potential kind {kind!r}")
    return None


def _scaling_from(cfg: dict) -> scaling.ScalingFunction:
    return scaling.ScalingFunction.from_json_dict(cfg["scaling"])


def _probe_from(cfg: dict) -> symbols.ResolventProbe:
    return symbols.ResolventProbe(complex(cfg["probe"][0], cfg["probe"][1]))


def _sweep(cfg: dict, threads: int, worker):
    """Run one work item per mesh on a thread pool, deterministically keyed."""
    items = list(enumerate(cfg["h_list"]))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = {pool.submit(worker, h, stream_rng(cfg["seed"], i)): h
                   for i, h in items}
        results = {}
        for fut, h in futures.items():
            try:
                results[h] = fut.result()
            except Exception as exc:
                exc.failing_mesh = h
                raise
    return [results[h] for _, h in items]


# ---------------------------------------------------------------------------
# experiment implementations: each returns (results dict, csv rows, passed)


def _run_phi_check(cfg, threads):
    sf = _scaling_from(cfg)
    tol = cfg["tolerances"]
    partition = scaling.partition_defect(sf, 4096)
    orthonormality = scaling.orthonormality_defect(sf, 3, 4096)
    rng = stream_rng(cfg["seed"], 0)
    outside = sf.support_radius + rng.uniform(0.0, 4.0, 10000)
    support_leak = float(np.max(np.abs(sf.phi_hat(outside))))
    log.info("partition defect %.3e (tol %.1e)", partition, tol["partition"])
    log.info("orthonormality defect %.3e (tol %.1e)", orthonormality, tol["orthonormality"])
    passed = (partition <= tol["partition"]
              and orthonormality <= tol["orthonormality"]
              and support_leak == 0.0)
    results = {"partition_defect": partition, "orthonormality_defect": orthonormality,
               "support_leak": support_leak}
    return results, [], passed


def _run_free_rates(cfg, threads):
    sf = _scaling_from(cfg)
    probe = _probe_from(cfg)
    tol = cfg["tolerances"]
    grid = cfg["grid_points"]

    def worker(h, rng):
        return (symbols.fiber_norm_sup_free1(h, probe, sf, grid),
                symbols.fiber_norm_sup_free2(h, probe, sf, grid))

    values = _sweep(cfg, threads, worker)
    pairs1 = [(h, v[0]) for h, v in zip(cfg["h_list"], values)]
    pairs2 = [(h, v[1]) for h, v in zip(cfg["h_list"], values)]
    reports = {}
    rows = []
    for name, pairs in (("free1", pairs1), ("free2", pairs2)):
        rep = estimators.ConvergenceReport.from_pairs(
            pairs, expected_rate=2.0, rate_tolerance=tol["rate"],
            mode="two_sided", min_r_squared=max(tol["min_r_squared"], 0.99))
        log.info("%s slope %.4f r2 %.6f", name, rep.slope, rep.r_squared)
        reports[name] = rep.to_json_dict(f"free-rates/{name}")
        rows.extend((h, e, None) for h, e in rep.pairs)
    passed = all(r["pass"] for r in reports.values())
    return reports, rows, passed


def _run_commutator_rates(cfg, threads):
    sf = _scaling_from(cfg)
    tol = cfg["tolerances"]
    pot = build_potential(cfg["potential"])
    alpha = pot.hoelder_alpha
    ratio = cfg["lattice"]["refinement"]
    extent = cfg["lattice"]["extent"]
    gamma = cfg["gamma"]

    def worker(h, rng):
        coarse = lattice.spec_from_extent(extent, h, cfg["lattice"]["dimension"])
        direct = estimators.commutator_direct_norm(pot.evaluate, sf, coarse, ratio,
                                                   tol=tol["op_norm"], rng=rng)
        sb = estimators.schur_commutator_bound(pot.evaluate, sf, coarse, ratio,
                                               delta=h ** gamma, n_decay=4, rng=rng)
        return direct, sb

    values = _sweep(cfg, threads, worker)
    pairs = [(h, v[0]) for h, v in zip(cfg["h_list"], values)]
    bounds = [v[1].bound for v in values]
    dominates = all(b >= e for (_, e), b in zip(pairs, bounds))
    rep = estimators.ConvergenceReport.from_pairs(
        pairs, expected_rate=alpha, rate_tolerance=tol["rate"], mode="at_least")
    log.info("commutator slope %.4f (alpha %s), schur dominates: %s",
             rep.slope, alpha, dominates)
    results = {"report": rep.to_json_dict("commutator-rates"),
               "schur_bounds": bounds, "schur_dominates": dominates,
               "gamma": gamma}
    rows = [(h, e, b) for (h, e), b in zip(rep.pairs, bounds)]
    passed = rep.passed and dominates
    return results, rows, passed


def _run_resolvent_rates(cfg, threads):
    sf = _scaling_from(cfg)
    probe = _probe_from(cfg)
    tol = cfg["tolerances"]
    pot = build_potential(cfg["potential"])
    ratio = cfg["lattice"]["refinement"]
    extent = cfg["lattice"]["extent"]
    grid = cfg["grid_points"]
    free_case = pot is None

    def worker(h, rng):
        value = estimators.resolvent_diff_norm(
            pot, probe, h, extent, sf, ratio=ratio,
            dimension=cfg["lattice"]["dimension"], solver_tol=tol["solver"],
            norm_tol=tol["op_norm"] if not free_case else 1e-4, rng=rng)
        fiber = (symbols.fiber_norm_sup_free_resolvent_diff(h, probe, sf, grid)
                 if free_case else None)
        return value, fiber

    values = _sweep(cfg, threads, worker)
    pairs = [(h, v[0]) for h, v in zip(cfg["h_list"], values)]
    if free_case:
        expected, mode = 2.0, "two_sided"
    else:
        expected, mode = pot.hoelder_alpha, "at_least"
    rep = estimators.ConvergenceReport.from_pairs(
        pairs, expected_rate=expected, rate_tolerance=tol["rate"], mode=mode,
        min_r_squared=tol["min_r_squared"], clamp_floor=tol["solver"])
    results = {"report": rep.to_json_dict("resolvent-rates")}
    passed = rep.passed
    rows = []
    if free_case:
        fibers = [v[1] for v in values]
        deviation = max(abs(e - f) / f for (_, e), f in zip(pairs, fibers))
        results["fiber_values"] = fibers
        results["fiber_max_rel_deviation"] = deviation
        log.info("free-case fiber deviation %.3f (tol %.2f)",
                 deviation, tol["fiber_agreement"])
        passed = passed and deviation <= tol["fiber_agreement"]
        rows = [(h, e, f) for (h, e), f in zip(pairs, fibers)]
    else:
        rows = [(h, e, None) for h, e in pairs]
    log.info("resolvent slope %.4f r2 %.6f", rep.slope, rep.r_squared)
    return results, rows, passed


def _run_spectrum(cfg, threads):
    tol = cfg["tolerances"]
    pot = build_potential(cfg["potential"])
    extent = cfg["lattice"]["extent"]
    shift = estimators.default_resolvent_shift(pot)
    res = estimators.resolvent_spectrum_hausdorff(
        pot, shift, cfg["h_list"], extent, k=cfg["modes"],
        ratio=cfg["lattice"]["refinement"], dimension=cfg["lattice"]["dimension"],
        eig_tol=tol["eig"], rng=stream_rng(cfg["seed"], 0))
    log.info("resolvent-spectrum distances: %s", [d for _, d in res.pairs])
    finest = lattice.spec_from_extent(extent, cfg["h_list"][-1],
                                      cfg["lattice"]["dimension"])
    vals, vecs = estimators.lowest_eigenvalues(
        lattice.LatticeHamiltonian(finest, pot), cfg["modes"], tol=tol["eig"],
        rng=stream_rng(cfg["seed"], 1), return_vectors=True)
    ground = lattice.GridFunction(vecs[:, 0].astype(complex).reshape(finest.shape), finest)
    results = {
        "shift": res.shift,
        "distances": [[h, d] for h, d in res.pairs],
        "resolution_floors": list(res.floors),
        "final": res.final,
        "decreasing": res.decreasing,
        "eigenvalues_finest": [float(v) for v in vals],
        "boundary_decay": lattice.boundary_decay(ground),
    }
    rows = [(h, d, None) for h, d in res.pairs]
    passed = res.decreasing and res.final <= tol["spectrum_final"]
    return results, rows, passed, {"ground_state": ground}


def _run_projection(cfg, threads):
    sf = _scaling_from(cfg)
    tol = cfg["tolerances"]
    pot = build_potential(cfg["potential"])
    extent = cfg["lattice"]["extent"]
    window = estimators.SpectralWindow(cfg["window"][0], cfg["window"][1])

    def worker(h, rng):
        return estimators.spectral_projection_diff(
            pot, window, h, extent, sf, ratio=cfg["lattice"]["refinement"],
            dimension=cfg["lattice"]["dimension"], eig_tol=tol["eig"],
            norm_tol=tol["op_norm"], rng=rng)

    values = _sweep(cfg, threads, worker)
    pairs = list(zip(cfg["h_list"], values))
    decreasing = all(b <= a * 1.05 for (_, a), (_, b) in zip(pairs, pairs[1:]))
    final = values[-1]
    log.info("projection differences: %s", values)
    finest = lattice.spec_from_extent(extent, cfg["h_list"][-1],
                                      cfg["lattice"]["dimension"])
    vals, vecs = estimators.lowest_eigenvalues(
        lattice.LatticeHamiltonian(finest, pot), 5, tol=tol["eig"],
        rng=stream_rng(cfg["seed"], 10 ** 6), return_vectors=True)
    ground = lattice.GridFunction(vecs[:, 0].astype(complex).reshape(finest.shape), finest)
    results = {
        "window": [window.a, window.b],
        "differences": [[h, d] for h, d in pairs],
        "final": final,
        "decreasing": decreasing,
        "eigenvalues_finest": [float(v) for v in vals],
        "boundary_decay": lattice.boundary_decay(ground),
    }
    rows = [(h, d, None) for h, d in pairs]
    passed = decreasing and final <= tol["projection_final"]
    return results, rows, passed, {"ground_state": ground}


def _run_hausdorff(cfg, threads):
    tol = cfg["tolerances"]
    res = estimators.hausdorff_vs_norm_property(
        cfg["trials"], cfg["size"], rng=stream_rng(cfg["seed"], 0),
        slack=tol["hausdorff_slack"])
    log.info("hausdorff property: %d violations over %d trials (max excess %.3e)",
             res.violations, res.trials, res.max_excess)
    results = {"trials": res.trials, "violations": res.violations,
               "max_excess": res.max_excess}
    return results, [], res.passed


RUNNERS = {
    "phi-check": _run_phi_check,
    "free-rates": _run_free_rates,
    "commutator-rates": _run_commutator_rates,
    "resolvent-rates": _run_resolvent_rates,
    "spectrum": _run_spectrum,
    "projection": _run_projection,
    "hausdorff": _run_hausdorff,
}


def _to_plain(obj):
    """Recursively convert numpy scalars/arrays for stable JSON emission."""
    if isinstance(obj, dict):
        return {k: _to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _to_plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


def run_experiment(cfg: dict, out_dir: Path, threads: int = 1) -> bool:
    """Execute a resolved config; write report.json, rates.csv, grids/*."""
    out_dir = Path(out_dir)
    grids_dir = out_dir / "grids"
    grids_dir.mkdir(parents=True, exist_ok=True)
    log.info("tolerances in effect: %s", cfg["tolerances"])

    outcome = RUNNERS[cfg["experiment"]](cfg, threads)
    if len(outcome) == 4:
        results, rows, passed, grids = outcome
    else:
        results, rows, passed = outcome
        grids = {}

    report = {"experiment": cfg["experiment"], "config": cfg,
              "results": results, "pass": bool(passed)}
    report_path = out_dir / "report.json"
    report_path.write_text(json.dumps(_to_plain(report), indent=2, sort_keys=True) + "\n")

    lines = ["h,error,bound"]
    for h, err, bound in rows:
        bound_txt = "" if bound is None else repr(float(bound))
        lines.append(f"{float(h)!r},{float(err)!r},{bound_txt}")
    (out_dir / "rates.csv").write_text("\n".join(lines) + "\n")

    for name, grid in grids.items():
        lattice.save_grid(grid, grids_dir / f"{name}.bin")

    log.info("report written to %s (pass=%s)", report_path, passed)
    return bool(passed)


def _load_config(path: str) -> tuple[dict, str]:
    raw = Path(path).read_text()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}: {exc.msg}") from exc
    return data, raw


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lattice-limit",
        description="Convergence experiments for lattice-to-continuum operators")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment config")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--out", required=True)
    run_p.add_argument("--threads", type=int, default=None)

    val_p = sub.add_parser("validate", help="validate an experiment config")
    val_p.add_argument("--config", required=True)

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        data, raw = _load_config(args.config)
        cfg = resolve_config(data, raw)
    except (ConfigError, OSError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        print(json.dumps(_to_plain(cfg), indent=2, sort_keys=True))
        return 0

    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("LATTICE_LIMIT_THREADS", "1"))

    try:
        passed = run_experiment(cfg, Path(args.out), threads=threads)
    except (lattice.SolverConvergenceError, estimators.OpNormError,
            estimators.EigenConvergenceError) as exc:
        where = getattr(exc, "failing_mesh", None)
        at = f" at h={where}" if where is not None else ""
        print(f"solver failure in experiment {cfg['experiment']}{at}: {exc}",
              file=sys.stderr)
        return 3
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
