#!/usr/bin/env python3
"""
cubicflow - command-line front end for the solvable cubic systems.

Inputs are JSON (a file path or an inline object); complex numbers are given
as numbers or [re, im] pairs and are always written as [re, im]. Reports are
JSON on stdout (or --output), trajectories are CSV. Logs go to stderr; the
level comes from CUBICFLOW_LOG (default WARNING) or --verbose.

Usage:
  # Coefficients, K-values and spectral data of a parameter set
  python -m scripts.pipeline.cubicflow_cli forward --input models/golden_parameters.json

  # Closed-form trajectory, with the RK oracle columns appended
  python -m scripts.pipeline.cubicflow_cli solve --input models/decoupled_ivp.json --grid 0:0.03125:9 --oracle --output traj.csv

  # Solvability check, inversion, completion of a pair
  python -m scripts.pipeline.cubicflow_cli check --input models/golden_coefficients.json
  python -m scripts.pipeline.cubicflow_cli invert --input models/golden_coefficients.json
  python -m scripts.pipeline.cubicflow_cli complete --input models/golden_coefficients.json --pair c11,c24

  # Period of the isochronous extension
  python -m scripts.pipeline.cubicflow_cli isochron --input models/isochronous_small_data.json --omega 1 --kmax 24

  # Random forward/check/invert sweep
  python -m scripts.pipeline.cubicflow_cli sweep --samples 200 --seed 7 --workers 4

Exit codes: 0 ok, 1 unexpected, 2 validation, 3 numerical, 4 constraint.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import jsonschema
import numpy as np
import pandas as pd

from scripts.constraints.appendix import appendix_a_solve, appendix_b_solve
from scripts.constraints.completion import complete_pair
from scripts.constraints.residuals import constraint_residuals, radicals
from scripts.core.errors import CubicFlowError, ValidationError
from scripts.core.model import (COEFF_NAMES, CoefficientSet, ParameterSet, forward, k_values,
                                linear_identity_residuals, spectral)
from scripts.integration.dopri import integrate, system_problem
from scripts.inversion.invert import invert
from scripts.isochronous.extension import IsochronousSystem, detect_period, circle_closure, solve_tilde
from scripts.reduced.system import (G_NAMES, ReducedCoefficients, from_full, reduced_constraint_residuals,
                                    reduced_invert, reduced_pair_solve, reduced_parameters,
                                    reduced_radicals, to_full)
from scripts.solver.exact import (IvpSpec, integrator_deviation, ode_residuals, singularity_time,
                                  solve_ivp)

logger = logging.getLogger("cubicflow")

SCHEMA_VERSION = "1.0"
SCHEMA_DIR = Path(__file__).resolve().parents[2] / "schemas"
PARAM_NAMES = ("a1", "a2", "b1", "b2", "gamma1", "gamma2", "gamma3")
COMMANDS = ("forward", "solve", "integrate", "invert", "check", "complete",
            "isochron", "reduced", "sweep")
SWEEP_MAGNITUDE = 3.0
SWEEP_MIN_MAGNITUDE = 0.1


# -- encoding -------------------------------------------------------------------

def encode(obj: Any) -> Any:
    """JSON-ready copy: complex -> [re, im], non-finite floats -> null."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, (complex, np.complexfloating)):
        return [encode(float(obj.real)), encode(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if dataclasses.is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return str(obj)


def decode_complex(value: Any, name: str = "value") -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValidationError(f"{name}: complex pairs need two entries", {"value": value})
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} is not a number", {"value": str(value)})
    return complex(value)


def decode_mapping(data: Dict[str, Any], names: Sequence[str]) -> Dict[str, complex]:
    return {n: decode_complex(data[n], n) for n in names if n in data}


def parameters_from(data: Dict[str, Any]) -> ParameterSet:
    return ParameterSet(**decode_mapping(data, PARAM_NAMES))


def coefficients_from(data: Dict[str, Any]) -> CoefficientSet:
    return CoefficientSet.from_dict(decode_mapping(data, COEFF_NAMES))


# -- input / output -------------------------------------------------------------

def load_input(source: Optional[str]) -> Dict[str, Any]:
    """Parse --input: an inline JSON object or the path of a JSON file."""
    if not source:
        raise ValidationError("--input is required for this command")
    text = source if source.lstrip().startswith("{") else None
    if text is None:
        path = Path(source)
        if not path.exists():
            raise ValidationError(f"input file {source} does not exist")
        text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"input is not valid JSON: {e.msg}", {"line": e.lineno}) from e
    if not isinstance(data, dict):
        raise ValidationError("input must be a JSON object")
    return data


def load_schema(name: str) -> Dict[str, Any]:
    with open(SCHEMA_DIR / f"{name}.json", encoding="utf-8") as fh:
        return json.load(fh)


def validate_input(data: Dict[str, Any], schema_name: str) -> None:
    try:
        jsonschema.validate(data, load_schema(schema_name))
    except jsonschema.ValidationError as e:
        raise ValidationError(f"input does not match schema {schema_name}: {e.message}",
                              {"path": [str(p) for p in e.absolute_path]}) from e


def parse_grid(spec: str) -> List[float]:
    """'t0:t1:n' -> n equally spaced real times."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValidationError(f"grid must be t0:t1:n, got {spec!r}")
    try:
        t0, t1, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        raise ValidationError(f"grid must be t0:t1:n, got {spec!r}") from e
    if n < 1 or not (math.isfinite(t0) and math.isfinite(t1)):
        raise ValidationError("grid needs n >= 1 and finite bounds", {"grid": spec})
    if n > 1 and t1 <= t0:
        raise ValidationError("grid end must exceed its start", {"grid": spec})
    return [float(t) for t in np.linspace(t0, t1, n)]


def write_report(report: Dict[str, Any], output: Optional[str]) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **report}
    text = json.dumps(encode(payload), indent=2, default=str) + "\n"
    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        Path(output).write_text(text, encoding="utf-8")
        logger.info(f"Report written to: {output}")
    else:
        sys.stdout.write(text)


def write_table(df: pd.DataFrame, output: Optional[str]) -> None:
    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(output, index=False)
        logger.info(f"Trajectory written to: {output}")
    else:
        df.to_csv(sys.stdout, index=False)


def trajectory_frame(times: Sequence[complex], states: np.ndarray,
                     residuals: Sequence[float]) -> pd.DataFrame:
    states = np.asarray(states, dtype=complex).reshape(-1, 2)
    times = [complex(t) for t in times]
    df = pd.DataFrame({
        "t": [t.real for t in times],
        "re_x1": states[:, 0].real,
        "im_x1": states[:, 0].imag,
        "re_x2": states[:, 1].real,
        "im_x2": states[:, 1].imag,
        "residual": list(residuals),
    })
    if any(t.imag != 0 for t in times):
        df.insert(1, "im_t", [t.imag for t in times])
    return df


# -- configuration --------------------------------------------------------------

@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    report: Optional[str] = None
    tol: Optional[float] = None
    seed: int = 0
    grid: Optional[List[float]] = None
    omega: float = 1.0
    kmax: int = 24
    oracle: bool = False
    pair: Optional[List[str]] = None
    samples: int = 100
    workers: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.tol is not None and not (self.tol > 0 and math.isfinite(self.tol)):
            raise ValidationError("--tol must be positive", {"tol": self.tol})
        if not math.isfinite(self.omega) or self.omega == 0:
            raise ValidationError("--omega must be a nonzero real number", {"omega": self.omega})
        if self.kmax < 1:
            raise ValidationError("--kmax must be >= 1", {"kmax": self.kmax})
        if self.samples < 1:
            raise ValidationError("--samples must be >= 1", {"samples": self.samples})
        if self.workers < 1:
            raise ValidationError("--workers must be >= 1", {"workers": self.workers})
        if self.oracle and self.command != "solve":
            raise ValidationError("--oracle only applies to solve")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        pair = [p.strip() for p in args.pair.split(",")] if getattr(args, "pair", None) else None
        grid = parse_grid(args.grid) if getattr(args, "grid", None) else None
        return cls(command=args.command, input=getattr(args, "input", None), output=args.output,
                   report=getattr(args, "report", None), tol=args.tol, seed=args.seed, grid=grid,
                   omega=getattr(args, "omega", 1.0), kmax=getattr(args, "kmax", 24),
                   oracle=getattr(args, "oracle", False), pair=pair,
                   samples=getattr(args, "samples", 100), workers=getattr(args, "workers", 1))


def configure_logging(verbose: bool = False) -> None:
    level_name = "DEBUG" if verbose else os.environ.get("CUBICFLOW_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s',
                        handlers=[logging.StreamHandler(sys.stderr)], force=True)


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    p = argparse.ArgumentParser(description="Exactly solvable homogeneous cubic systems in two variables")
    p.add_argument("--verbose", action="store_true", help="Debug logging (overrides CUBICFLOW_LOG)")
    subparsers = p.add_subparsers(dest="command", help="Commands")

    def add(name: str, help_text: str, needs_input: bool = True) -> argparse.ArgumentParser:
        sp = subparsers.add_parser(name, help=help_text)
        if needs_input:
            sp.add_argument("--input", required=True, help="JSON file or inline JSON object")
        sp.add_argument("--output", help="Output file (default: stdout)")
        sp.add_argument("--tol", type=float, help="Acceptance tolerance override")
        sp.add_argument("--seed", type=int, default=0, help="Seed for randomized work")
        return sp

    add("forward", "Coefficients, K-values and spectral data of a parameter set")
    for name, help_text in (("solve", "Closed-form trajectory (CSV)"),
                            ("integrate", "Runge-Kutta trajectory of the cubic system (CSV)")):
        sp = add(name, help_text)
        sp.add_argument("--grid", help="Sample times t0:t1:n (overrides 'times' in the input)")
        sp.add_argument("--report", help="Also write a JSON run summary to this path")
        if name == "solve":
            sp.add_argument("--oracle", action="store_true", help="Append RK deviation columns")
    add("invert", "Parameters reproducing a coefficient set")
    add("check", "Solvability constraint residuals and radicals")
    sp = add("complete", "Solve the constraints for one or two missing coefficients")
    sp.add_argument("--pair", help="Comma-separated coefficient names, e.g. c11,c24")
    sp = add("isochron", "Period of the isochronous extension")
    sp.add_argument("--omega", type=float, default=1.0, help="Angular frequency")
    sp.add_argument("--kmax", type=int, default=24, help="Largest period multiple searched")
    sp.add_argument("--samples", type=int, default=256, help="Samples on the tau circle")
    sp = add("reduced", "Reduced systems with c14 = c21 = 0")
    sp.add_argument("--pair", help="Comma-separated g names to complete, e.g. g11,g12")
    sp = add("sweep", "Random forward/check/invert sweep", needs_input=False)
    sp.add_argument("--samples", type=int, default=100, help="Number of random parameter sets")
    sp.add_argument("--workers", type=int, default=1, help="Worker processes")
    return p.parse_args(argv)


# -- commands -------------------------------------------------------------------

def _ivp_inputs(data: Dict[str, Any], cfg: RunConfig) -> Tuple[Optional[ParameterSet], CoefficientSet,
                                                               Tuple[complex, complex], List[complex]]:
    validate_input(data, "ivp")
    P = parameters_from(data["parameters"]) if "parameters" in data else None
    C = forward(P) if P is not None else coefficients_from(data["coefficients"])
    x0 = (decode_complex(data["x0"][0], "x0[0]"), decode_complex(data["x0"][1], "x0[1]"))
    if cfg.grid is not None:
        times: List[complex] = [complex(t) for t in cfg.grid]
    elif "times" in data:
        times = [decode_complex(t, "times") for t in data["times"]]
    else:
        times = []
    return P, C, x0, times


def cmd_forward(cfg: RunConfig) -> None:
    data = load_input(cfg.input)
    validate_input(data, "parameters")
    P = parameters_from(data["parameters"])
    C = forward(P)
    S = spectral(*P.gamma)
    write_report({
        "command": "forward",
        "parameters": dataclasses.asdict(P),
        "c": P.c,
        "coefficients": C.as_dict(),
        "k_values": dataclasses.asdict(k_values(P)),
        "spectral": {"roots": S.roots, "lambdas": S.lambdas, "degenerate": S.degenerate},
        "linear_identity_residuals": linear_identity_residuals(P.a1, P.a2, C),
    }, cfg.output)


def cmd_solve(cfg: RunConfig) -> None:
    data = load_input(cfg.input)
    P, C, x0, times = _ivp_inputs(data, cfg)
    if not times:
        raise ValidationError("no sample times: pass --grid or 'times'")
    spec = IvpSpec(P, x0, times) if P is not None else IvpSpec.from_coefficients(C, x0, times)
    traj = solve_ivp(spec)
    df = trajectory_frame(traj.times, traj.states, traj.implicit_residuals)
    if cfg.oracle:
        # row k holds the interval ending at sample k
        df["ode_residual"] = [float("nan")] + ode_residuals(spec.parameters, traj)
        deviation = integrator_deviation(spec, traj)
        df["oracle_deviation"] = deviation + [float("nan")] * (len(df) - len(deviation))
    write_table(df, cfg.output)
    if cfg.report:
        sing = singularity_time(spec)
        write_report({
            "command": "solve",
            "mode": traj.mode,
            "samples": len(traj.times),
            "truncated": traj.truncated,
            "singularity": traj.singularity,
            "t_y": sing.t_y,
            "t_w": sing.t_w,
            "parameters": dataclasses.asdict(spec.parameters),
        }, cfg.report)


def cmd_integrate(cfg: RunConfig) -> None:
    data = load_input(cfg.input)
    _, C, x0, times = _ivp_inputs(data, cfg)
    if not times:
        raise ValidationError("no sample times: pass --grid or 'times'")
    kwargs = {"rtol": cfg.tol} if cfg.tol else {}
    sol = integrate(system_problem(C, x0, times, **kwargs))
    write_table(trajectory_frame(sol.times, sol.states, [float("nan")] * len(sol.times)), cfg.output)
    if cfg.report:
        write_report({
            "command": "integrate",
            "samples": len(sol.times),
            "blow_up": sol.blow_up,
            "t_blowup": sol.t_blowup,
            "accepted": sol.accepted,
            "rejected": sol.rejected,
            "message": sol.message,
        }, cfg.report)


def cmd_invert(cfg: RunConfig) -> None:
    data = load_input(cfg.input)
    validate_input(data, "coefficients")
    result = invert(coefficients_from(data["coefficients"]))
    write_report({
        "command": "invert",
        "parameters": dataclasses.asdict(result.parameters),
        "alpha": result.alpha,
        "beta_candidates": result.beta_candidates,
        "triad_spread": result.triad_spread,
        "residual_33KK": result.residual_33KK,
        "forward_error": result.forward_error,
        "slice": result.slice,
        "candidates": result.diagnostics.get("candidates"),
    }, cfg.output)


def cmd_check(cfg: RunConfig) -> None:
    data = load_input(cfg.input)
    validate_input(data, "coefficients")
    C = coefficients_from(data["coefficients"])
    report = constraint_residuals(C, cfg.tol) if cfg.tol else constraint_residuals(C)
    write_report({
        "command": "check",
        **report.to_dict(),
        "worst": report.worst,
        "radicals": dataclasses.asdict(radicals(C)),
    }, cfg.output)


def cmd_complete(cfg: RunConfig) -> None:
    data = load_input(cfg.input)
    validate_input(data, "completion")
    pair = cfg.pair or data.get("pair")
    if not pair:
        raise ValidationError("no coefficients to solve for: pass --pair or 'pair'")
    known = decode_mapping(data["coefficients"], COEFF_NAMES)
    if len(pair) == 1:
        which = pair[0]
        if which not in COEFF_NAMES:
            raise ValidationError(f"unknown coefficient {which!r}")
        base = {n: known.get(n, 0j) for n in COEFF_NAMES}
        missing = [n for n in COEFF_NAMES if n != which and n not in known]
        if missing:
            raise ValidationError(f"missing coefficients: {missing}")
        C = CoefficientSet.from_dict(base)
        write_report({
            "command": "complete",
            "pair": [which],
            "first_constraint": appendix_a_solve(C, which),
            "second_constraint": appendix_b_solve(C, which),
        }, cfg.output)
        return
    hints = [(decode_complex(h[0]), decode_complex(h[1])) for h in data.get("hints", [])]
    kwargs = {"tol": cfg.tol} if cfg.tol else {}
    found = complete_pair(known, pair, hints, **kwargs)
    write_report({
        "command": "complete",
        "pair": list(pair),
        "completions": [{
            "values": {p: f.coefficients.as_dict()[p] for p in pair},
            "coefficients": f.coefficients.as_dict(),
            "source": f.source,
            "residual": f.residual,
            "special": f.special,
            "family": f.family,
            "tangent": list(f.tangent) if f.tangent else None,
        } for f in found],
    }, cfg.output)


def cmd_isochron(cfg: RunConfig) -> None:
    data = load_input(cfg.input)
    P, C, x0, _ = _ivp_inputs(data, cfg)
    kwargs = {"eps": cfg.tol} if cfg.tol else {}
    report = detect_period(C, cfg.omega, x0, cfg.kmax, **kwargs)
    system = IsochronousSystem(C, cfg.omega)
    circle = circle_closure(C, cfg.omega, x0, cfg.samples)

    analytic = None
    try:
        params = P if P is not None else invert(C).parameters
        tilde = solve_tilde(params, cfg.omega, x0, [0.0, system.T, system.T_tilde])
        start = np.asarray(x0, dtype=complex)
        scale = max(float(np.linalg.norm(start)), 1e-300)
        analytic = {
            "half_period_defect": float(np.linalg.norm(tilde.states[1] + start)) / scale,
            "period_defect": float(np.linalg.norm(tilde.states[2] - start)) / scale,
        }
    except CubicFlowError as e:
        logger.warning(f"analytic check skipped: {e.message}")

    write_report({
        "command": "isochron",
        "omega": cfg.omega,
        "T": system.T,
        "T_tilde": report.T_tilde,
        "k": report.k,
        "defect_at_kT": report.defect_at_kT,
        "rational_lambdas": report.rational_lambdas,
        "circle": {"center": system.center, "radius": system.radius,
                   "closure_defect": circle.closure_defect, "blow_up": circle.blow_up,
                   "message": circle.message},
        "analytic": analytic,
    }, cfg.output)


def cmd_reduced(cfg: RunConfig) -> None:
    data = load_input(cfg.input)
    validate_input(data, "reduced")
    if "construct" in data:
        c = decode_mapping(data["construct"], ("a1", "a2", "b1", "b2", "gamma1"))
        P = reduced_parameters(c["a1"], c["a2"], c["b1"], c["b2"], c["gamma1"])
        G = from_full(forward(P))
        write_report({
            "command": "reduced",
            "parameters": dataclasses.asdict(P),
            "reduced": G.as_dict(),
            "residuals": reduced_constraint_residuals(G).to_dict(),
        }, cfg.output)
        return

    known = decode_mapping(data["reduced"], G_NAMES)
    pair = cfg.pair or data.get("pair")
    if pair:
        found = reduced_pair_solve(known, pair)
        write_report({
            "command": "reduced",
            "pair": list(pair),
            "completions": [{"reduced": f.coefficients.as_dict(), "source": f.source,
                             "residual": f.residual, "special": f.special} for f in found],
        }, cfg.output)
        return

    G = ReducedCoefficients.from_dict(known)
    residuals = reduced_constraint_residuals(G)
    inversion = None
    if residuals.satisfied:
        result = reduced_invert(G)
        inversion = {"parameters": dataclasses.asdict(result.parameters), "alpha": result.alpha,
                     "forward_error": result.forward_error, "slice": result.slice}
    write_report({
        "command": "reduced",
        "reduced": G.as_dict(),
        "radicals": dataclasses.asdict(reduced_radicals(G)),
        "residuals": residuals.to_dict(),
        "full_residuals": constraint_residuals(to_full(G)).to_dict(),
        "inversion": inversion,
    }, cfg.output)


def _random_parameters(rng: np.random.Generator) -> ParameterSet:
    while True:
        v = rng.uniform(-SWEEP_MAGNITUDE, SWEEP_MAGNITUDE, size=7)
        if np.any(np.abs(v[:4]) < SWEEP_MIN_MAGNITUDE):
            continue
        try:
            return ParameterSet(*v)
        except ValidationError:
            continue


def sweep_sample(seed: int) -> Dict[str, Any]:
    """forward -> check -> invert -> forward on one random parameter set."""
    P = _random_parameters(np.random.default_rng(seed))
    C = forward(P)
    report = constraint_residuals(C)
    out: Dict[str, Any] = {"seed": seed, "satisfied": report.satisfied, "worst": report.worst,
                           "round_trip": None, "error": None}
    try:
        result = invert(C)
        out["round_trip"] = result.forward_error
    except CubicFlowError as e:
        out["error"] = type(e).__name__
    return out


def cmd_sweep(cfg: RunConfig) -> None:
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.samples)
    seeds = [int(c.generate_state(1)[0]) for c in children]
    if cfg.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            rows = list(executor.map(sweep_sample, seeds))
    else:
        rows = [sweep_sample(s) for s in seeds]
    df = pd.DataFrame(rows)
    trips = df["round_trip"].dropna()
    write_report({
        "command": "sweep",
        "seed": cfg.seed,
        "samples": cfg.samples,
        "satisfied": int(df["satisfied"].sum()),
        "worst_constraint_residual": float(df["worst"].max()),
        "inverted": int(len(trips)),
        "worst_round_trip": float(trips.max()) if len(trips) else None,
        "failures": df[df["error"].notna()][["seed", "error"]].to_dict(orient="records"),
    }, cfg.output)


HANDLERS = {
    "forward": cmd_forward,
    "solve": cmd_solve,
    "integrate": cmd_integrate,
    "invert": cmd_invert,
    "check": cmd_check,
    "complete": cmd_complete,
    "isochron": cmd_isochron,
    "reduced": cmd_reduced,
    "sweep": cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    configure_logging(args.verbose)

    if not args.command:
        sys.stderr.write("Please specify a command. Use --help for options.\n")
        return 1

    try:
        cfg = RunConfig.from_args(args)
        HANDLERS[cfg.command](cfg)
        return 0
    except CubicFlowError as e:
        logger.debug("command failed", exc_info=True)
        sys.stderr.write(json.dumps(encode(e.to_report()), default=str) + "\n")
        return e.exit_code
    except Exception as e:
        logger.debug("unexpected failure", exc_info=True)
        sys.stderr.write(json.dumps({"error": type(e).__name__, "message": str(e), "exit_code": 1}) + "\n")
        return 1


if __name__ == "__main__":
    exit(main())
