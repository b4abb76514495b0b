"""Command-line front end: evaluate / validate / evolve / classify / sweep.

One JSON config document describes a run; subcommands read it, drive the
library, and write CSV / JSON artifacts.  All runs are deterministic: no
seeds exist anywhere, floats are written with 17 significant digits, and
sweep rows are emitted in a fixed order regardless of worker count.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O failure.  Errors are reported as a single JSON line on stderr.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys

import numpy as np

from . import analysis, lattice, spectral, steplike, symmetric
from .errors import GardnerError, NonFiniteStateError, RegimeError, SingularSystemError
from .models import LatticeTrajectory, SolutionModel
from .spectral import GardnerParams

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

# Tolerances the validate subcommand reports against.
ODE_RESIDUAL_TOL = 1e-6
ZERO_CURVATURE_TOL = 1e-8
EVOLUTION_TOL = 1e-4
ZC_LAMBDAS = (1.2, 1.5, 2.0, 3.0, 5.0)

FAMILIES = ("one_soliton", "multi_soliton", "two_soliton", "double_pole", "kink")


class ConfigError(ValueError):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _parse_params(doc: dict) -> GardnerParams:
    p = doc.get("params")
    _require(isinstance(p, dict), "config needs a 'params' object with a, b, sigma")
    for key in ("a", "b", "sigma"):
        _require(key in p, f"params.{key} is missing")
    return GardnerParams(a=float(p["a"]), b=float(p["b"]), sigma=int(p["sigma"]))


def _parse_window(doc: dict, args) -> tuple[int, int]:
    if getattr(args, "window", None):
        lo, _, hi = args.window.partition(":")
        try:
            window = (int(lo), int(hi))
        except ValueError as exc:
            raise ConfigError(f"bad --window {args.window!r}") from exc
    else:
        w = doc.get("window")
        _require(
            isinstance(w, (list, tuple)) and len(w) == 2, "config needs 'window': [lo, hi]"
        )
        window = (int(w[0]), int(w[1]))
    _require(window[0] < window[1], "window must satisfy lo < hi")
    return window


def _parse_times(doc: dict, args) -> np.ndarray:
    if getattr(args, "times", None):
        parts = args.times.split(":")
        _require(len(parts) == 3, f"bad --times {args.times!r} (want t0:t1:k)")
        t0, t1, k = float(parts[0]), float(parts[1]), int(parts[2])
    else:
        t = doc.get("times")
        _require(isinstance(t, dict), "config needs 'times': {t0, t1, samples}")
        t0, t1, k = float(t["t0"]), float(t["t1"]), int(t.get("samples", 1))
    if k <= 1:
        return np.array([t0])
    return np.linspace(t0, t1, k)


def build_model(doc: dict) -> SolutionModel:
    """Construct the exact solution model described by a config document."""
    family = doc.get("family")
    _require(family in FAMILIES, f"family must be one of {FAMILIES}, got {family!r}")
    params = _parse_params(doc)
    if family in ("one_soliton", "multi_soliton", "two_soliton"):
        evs = doc.get("eigenvalues")
        _require(
            isinstance(evs, list) and evs, "config needs a non-empty 'eigenvalues' list"
        )
        pairs = []
        for e in evs:
            _require(
                isinstance(e, dict) and "lambda" in e and "C0" in e,
                "each eigenvalue needs 'lambda' and 'C0'",
            )
            pairs.append((float(e["lambda"]), float(e["C0"])))
        spec = symmetric.SolitonSpec(pairs, params)
        if family == "one_soliton":
            _require(spec.order == 1, "one_soliton takes exactly one eigenvalue")
            return symmetric.one_soliton_model(spec)
        if family == "two_soliton":
            _require(spec.order == 2, "two_soliton takes exactly two eigenvalues")
            return symmetric.two_soliton_model(spec)
        return symmetric.multi_soliton_model(spec)
    if family == "double_pole":
        d = doc.get("double_pole")
        _require(isinstance(d, dict), "config needs a 'double_pole' object")
        spec = symmetric.DoublePoleSpec(
            lambda1=float(d["lambda1"]),
            b1_0=float(d["b1_0"]),
            d1_0=float(d["d1_0"]),
            params=params,
        )
        return symmetric.double_pole_model(spec)
    # kink
    bdoc = doc.get("boundary")
    _require(isinstance(bdoc, dict) and "c0" in bdoc, "config needs 'boundary' with c0")
    boundary = steplike.StepBoundary(
        c0=float(bdoc["c0"]),
        sign_plus=int(bdoc.get("sign_plus", 1)),
        sign_minus=int(bdoc.get("sign_minus", -1)),
    )
    zeta_bar = bdoc.get("zeta_bar")
    if zeta_bar is None:
        zeta_bar = (1.0 - boundary.c0) / boundary.r  # distinguished eigenvalue
    spec = steplike.KinkSpec(
        zeta_bar1=float(zeta_bar),
        C1_0=float(bdoc.get("C0", 1.0)),
        boundary=boundary,
        params=params,
    )
    return steplike.kink_model(spec)


def _write_trajectory_csv(path: str, traj: LatticeTrajectory) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("t,n,u\n")
        for i, t in enumerate(traj.times):
            for j, n in enumerate(traj.sites):
                fh.write(f"{_fmt(t)},{int(n)},{_fmt(traj.values[i, j])}\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _model_meta(doc: dict, model: SolutionModel, window, times) -> dict:
    return {
        "family": model.family,
        "params": doc["params"],
        "background_left": model.background_left,
        "background_right": model.background_right,
        "velocity": model.velocity,
        "window": [window[0], window[1]],
        "times": [float(t) for t in times],
    }


def cmd_evaluate(doc: dict, args) -> int:
    model = build_model(doc)
    window = _parse_window(doc, args)
    times = _parse_times(doc, args)
    traj = model.sample(window[0], window[1], times)
    os.makedirs(args.out, exist_ok=True)
    _write_trajectory_csv(os.path.join(args.out, "trajectory.csv"), traj)
    _write_json(os.path.join(args.out, "meta.json"), _model_meta(doc, model, window, times))
    return EXIT_OK


def cmd_validate(doc: dict, args) -> int:
    model = build_model(doc)
    params = _parse_params(doc)
    window = _parse_window(doc, args)
    times = _parse_times(doc, args)

    checks = []

    def record(name: str, value: float, tol: float) -> None:
        checks.append(
            {"name": name, "value": value, "tolerance": tol, "passed": bool(value <= tol)}
        )

    record(
        "ode_residual",
        lattice.ode_residual(model, window[0], window[1], times, params),
        ODE_RESIDUAL_TOL,
    )
    step = max(1, (window[1] - window[0]) // 12)
    zc_sites = range(window[0], window[1] + 1, step)
    record(
        "zero_curvature",
        lattice.zero_curvature_max(model, params, ZC_LAMBDAS, zc_sites, times),
        ZERO_CURVATURE_TOL,
    )
    if getattr(args, "with_evolution", False):
        dt = float(args.dt) if args.dt else float(doc.get("dt", 1e-4))
        t0, t1 = float(times[0]), float(times[-1])
        init = lattice.LatticeState(
            n_lo=window[0],
            values=np.array([model.u(n, t0) for n in range(window[0], window[1] + 1)]),
            t=t0,
        )
        traj = lattice.integrate(init, t1, dt, params, ghost_model=model)
        exact = np.array([model.u(n, t1) for n in range(window[0], window[1] + 1)])
        record("evolution_deviation", float(np.max(np.abs(traj.values[-1] - exact))), EVOLUTION_TOL)

    payload = {"checks": checks, "all_passed": all(c["passed"] for c in checks)}
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "validation.json"), payload)
    return EXIT_OK


def cmd_evolve(doc: dict, args) -> int:
    model = build_model(doc)
    params = _parse_params(doc)
    window = _parse_window(doc, args)
    times = _parse_times(doc, args)
    dt = float(args.dt) if args.dt else float(doc.get("dt", 1e-4))
    t0, t1 = float(times[0]), float(times[-1])
    init = lattice.LatticeState(
        n_lo=window[0],
        values=np.array([model.u(n, t0) for n in range(window[0], window[1] + 1)]),
        t=t0,
    )
    n_steps = int(round((t1 - t0) / dt))
    record_every = max(1, n_steps // max(1, len(times) - 1)) if n_steps else None
    traj = lattice.integrate(
        init, t1, dt, params, ghost_model=model, record_every=record_every
    )
    exact_final = np.array([model.u(n, t1) for n in range(window[0], window[1] + 1)])
    deviation = float(np.max(np.abs(traj.values[-1] - exact_final)))
    os.makedirs(args.out, exist_ok=True)
    _write_trajectory_csv(os.path.join(args.out, "evolution.csv"), traj)
    meta = _model_meta(doc, model, window, times)
    meta.update({"dt": dt, "final_deviation_from_exact": deviation})
    _write_json(os.path.join(args.out, "evolution.json"), meta)
    return EXIT_OK


def cmd_classify(doc: dict, args) -> int:
    params = _parse_params(doc)
    c = doc.get("classify")
    _require(isinstance(c, dict), "config needs a 'classify' object with lambda1, lambda2")
    lam1, lam2 = float(c["lambda1"]), float(c["lambda2"])
    label = analysis.classify_collision(params, lam1, lam2)
    payload = {
        "type": label,
        "threshold": spectral.positive_speed_threshold(params),
        "velocities": [
            spectral.soliton_velocity(lam1, params),
            spectral.soliton_velocity(lam2, params),
        ],
        "lambda1": lam1,
        "lambda2": lam2,
    }
    if c.get("measure"):
        spec = symmetric.SolitonSpec(
            [(lam1, float(c.get("C1", 1.0))), (lam2, float(c.get("C2", 1.0)))], params
        )
        model = symmetric.two_soliton_model(spec)
        window = _parse_window(doc, args)
        times = _parse_times(doc, args)
        traj = model.sample(window[0], window[1], times)
        report = analysis.measure_interaction(traj, model.background)
        payload["report"] = report.to_dict()
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "collision.json"), payload)
    return EXIT_OK


def cmd_sweep(doc: dict, args) -> int:
    s = doc.get("sweep")
    _require(isinstance(s, dict), "config needs a 'sweep' object")
    for key in ("a", "b", "lambda1_sq", "lambda2_sq"):
        _require(key in s, f"sweep.{key} is missing")

    def axis(spec_row) -> np.ndarray:
        _require(
            isinstance(spec_row, (list, tuple)) and len(spec_row) == 3,
            "sweep axes are [lo, hi, count]",
        )
        return np.linspace(float(spec_row[0]), float(spec_row[1]), int(spec_row[2]))

    a_vals = axis(s["a"])
    b_vals = axis(s["b"])
    l1sq, l2sq = float(s["lambda1_sq"]), float(s["lambda2_sq"])

    def row(bv: float) -> list[str]:
        return [
            f"{_fmt(av)},{_fmt(bv)},{analysis.region_label(av, bv, l1sq, l2sq)}"
            for av in a_vals
        ]

    jobs = args.jobs or os.cpu_count() or 1
    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(row, b_vals))
    else:
        rows = [row(bv) for bv in b_vals]

    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "region_map.csv"), "w", newline="") as fh:
        fh.write("a,b,label\n")
        for chunk in rows:
            fh.write("\n".join(chunk))
            fh.write("\n")
    return EXIT_OK


COMMANDS = {
    "evaluate": cmd_evaluate,
    "validate": cmd_validate,
    "evolve": cmd_evolve,
    "classify": cmd_classify,
    "sweep": cmd_sweep,
}


def _error(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}) + "\n")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gardner-lattice",
        description="Evaluate, validate and analyze lattice wave solutions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--jobs", type=int, default=0, help="worker count (sweep)")
        p.add_argument("--dt", type=float, default=0.0, help="integrator step override")
        p.add_argument("--window", help="lattice window lo:hi (overrides config)")
        p.add_argument("--times", help="time grid t0:t1:k (overrides config)")
        if name == "validate":
            p.add_argument(
                "--with-evolution",
                action="store_true",
                help="also integrate numerically and compare against the exact model",
            )
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            doc = json.load(fh)
    except OSError as exc:
        _error("IO", f"cannot read config: {exc}")
        return EXIT_IO
    except json.JSONDecodeError as exc:
        _error("CONFIG", f"config is not valid JSON: {exc}")
        return EXIT_CONFIG

    try:
        return COMMANDS[args.command](doc, args)
    except RegimeError as exc:
        _error("REGIME", str(exc))
        return EXIT_CONFIG
    except (ConfigError, KeyError, TypeError, ValueError) as exc:
        _error("CONFIG", str(exc))
        return EXIT_CONFIG
    except (SingularSystemError, NonFiniteStateError, ArithmeticError) as exc:
        _error("NUMERIC", str(exc))
        return EXIT_NUMERIC
    except GardnerError as exc:
        _error("NUMERIC", str(exc))
        return EXIT_NUMERIC
    except OSError as exc:
        _error("IO", str(exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
