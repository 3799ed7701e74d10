"""Command line: solve, compare, spectrum, jsr, oracle, basins.

Every command writes CSV plot data and a flat JSON summary under the
``--out`` prefix. Options may also come from a flat ``key=value`` config
file (``--config``); flags given on the command line win.

Exit codes: 0 success / converged, 2 not converged (or compare bound
exceeded), 1 configuration or runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import analytic as an
from .errors import ParameterError, SubactionError
from .grid import INTERVAL, GridFunction, sup_distance, sup_normalize, write_csv
from .jsr import joint_spectral_radius, parse_range, t_scan
from .oracle import best_periodic_value
from .potentials import CATALOG_NAMES, Potential, catalog
from .ruelle import eigen_solve, ruelle_apply
from .solver import SolverConfig, bump_initial, save_result, solve
from .systems import BranchSystem, Matrix2, doubling_system, farey_like_system, mobius_system

COMMANDS = ("solve", "compare", "spectrum", "jsr", "oracle", "basins")
SYSTEMS = ("doubling", "farey", "mobius")
EXIT_OK, EXIT_ERROR, EXIT_NOT_CONVERGED = 0, 1, 2

log = logging.getLogger("subaction")


class ConfigError(SubactionError, ValueError):
    def __init__(self, field: str, msg: str):
        super().__init__(f"field '{field}': {msg}")
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    command: str
    potential: str = "sin_sq"
    params: tuple[float, ...] = ()
    system: Optional[str] = None
    grid_n: int = 10_000
    tol: float = 1e-7
    max_iter: int = 2000
    iters: Optional[int] = None
    init: str = "zero"
    out: str = "out/run"
    a1: tuple[float, ...] = (2, 1, 2, 2)
    a2: tuple[float, ...] = (2, 2, 1, 2)
    t: float = 1.0
    t_scan: Optional[str] = None
    p_max: int = 8
    bound: float = 1e-2
    reference: Optional[str] = None

    def solver_config(self) -> SolverConfig:
        try:
            if self.iters is not None:
                return SolverConfig(self.grid_n, self.tol, self.iters, stop_on_tol=False)
            return SolverConfig(self.grid_n, self.tol, self.max_iter)
        except ParameterError as exc:
            field = "iters" if self.iters is not None and "max_iter" in str(exc) else _field_of(str(exc))
            raise ConfigError(field, str(exc)) from None


def _field_of(msg: str) -> str:
    for key in ("max_iter", "tol", "resolution"):
        if key in msg:
            return "grid_n" if key == "resolution" else key
    return "solver"


def parse_numbers(text: str, field: str) -> tuple[float, ...]:
    """Comma-separated numbers; fractions such as 1/3 are allowed."""
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(float(Fraction(tok.strip())) for tok in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(field, f"cannot parse numbers from {text!r}") from None


def read_config_file(path) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError("config", str(exc)) from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"line {n} is not key=value: {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, value):
    if value is None:
        return None
    if key not in _FIELD_TYPES:
        raise ConfigError(key, "unknown option")
    try:
        if key in ("params", "a1", "a2"):
            return value if isinstance(value, tuple) else parse_numbers(str(value), key)
        if key in ("grid_n", "max_iter", "iters", "p_max"):
            return int(value)
        if key in ("tol", "t", "bound"):
            return float(Fraction(str(value)))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(key, f"bad value {value!r}") from None
    return str(value)


def build_config(args: argparse.Namespace) -> RunConfig:
    merged: dict = {}
    if args.config:
        file_vals = read_config_file(args.config)
        cmd = file_vals.pop("command", None)
        if cmd is not None and cmd != args.command:
            raise ConfigError("command", f"config file is for {cmd!r}, not {args.command!r}")
        merged.update({k: _convert(k, v) for k, v in file_vals.items()})
    for key in _FIELD_TYPES:
        if key == "command":
            continue
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = _convert(key, val)
    cfg = RunConfig(args.command, **merged)
    if cfg.potential not in CATALOG_NAMES:
        raise ConfigError("potential", f"unknown potential {cfg.potential!r}; choose from {', '.join(CATALOG_NAMES)}")
    if cfg.system is not None and cfg.system not in SYSTEMS:
        raise ConfigError("system", f"unknown system {cfg.system!r}; choose from {', '.join(SYSTEMS)}")
    return cfg


def make_problem(cfg: RunConfig) -> tuple[BranchSystem, Potential]:
    try:
        A = catalog(cfg.potential, cfg.params)
    except SubactionError as exc:
        raise ConfigError("params", str(exc)) from None
    system = cfg.system
    if system is None:
        system = {"log_farey": "farey", "neg_log_farey": "farey", "matrix_pot": "mobius"}.get(cfg.potential, "doubling")
    if system == "doubling":
        return doubling_system(A.domain_mode), A
    if system == "farey":
        return farey_like_system(), A
    if "a1" not in A.extra:
        raise ConfigError("system", "the mobius system goes with the matrix_pot potential")
    return mobius_system(A.extra["a1"], A.extra["a2"]), A


def parse_init(spec: str, sys: BranchSystem, n: int) -> Optional[GridFunction]:
    """``zero`` or ``bump:eps,a[,k]``; None means the zero function."""
    spec = spec.strip()
    if spec == "zero":
        return None
    if spec.startswith("bump:"):
        vals = parse_numbers(spec[5:], "init")
        if len(vals) not in (2, 3):
            raise ConfigError("init", "bump takes eps,a or eps,a,k")
        if sys.domain_mode == INTERVAL and tuple(sys.working_interval) != (0.0, 1.0):
            raise ConfigError("init", "bump initial conditions live on [0, 1]")
        try:
            return bump_initial(vals[0], vals[1], vals[2] if len(vals) == 3 else 1.0, n, sys.domain_mode)
        except SubactionError as exc:
            raise ConfigError("init", str(exc)) from None
    raise ConfigError("init", f"expected 'zero' or 'bump:eps,a,k', got {spec!r}")


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, default=float) + "\n")


def _prefix(cfg: RunConfig, suffix: str = "") -> Path:
    p = Path(cfg.out)
    return p.with_name(p.name + suffix)


def run_solve(cfg: RunConfig) -> int:
    sys_, A = make_problem(cfg)
    scfg = cfg.solver_config()
    f0 = parse_init(cfg.init, sys_, scfg.n)
    res = solve(sys_, A, f0, scfg)
    csv_path, json_path = save_result(res, _prefix(cfg))
    summary = {**res.summary(), "potential": A.name, "known_m": A.known_m}
    _write_json(json_path, summary)
    print(json.dumps(summary))
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


# reference name -> (callable on x, description)
def _reference(cfg: RunConfig, A: Potential):
    name = cfg.reference
    if name is None:
        name = {"quadratic_third": "quadratic", "sin_sq": "sinsq", "sin": "sin", "log_farey": "farey",
                "neg_log_farey": "farey_neg", "self_subaction": "self_subaction", "cantor_dist": "cantor_G",
                "matrix_pot": "jsr_parametric"}.get(cfg.potential)
    if name == "quadratic":
        return an.quadratic_subaction, ""
    if name == "sinsq":
        return lambda x: an.sinsq_series(x, 30), ""
    if name == "sin":
        return an.sin_subaction, ""
    if name == "farey":
        return an.farey_exact, ""
    if name == "farey_neg":
        return lambda x: an.farey_exact(x, "neg"), ""
    if name == "self_subaction":
        return lambda x: an.self_subaction_exact(x, *A.params), ""
    if name in ("cantor_G", "cantor_H"):
        return lambda x: an.cantor_conjecture_series(x, name[-1]), an.CONJECTURAL
    if name == "jsr_example1":
        return an.jsr_exact_example1, ""
    if name == "jsr_parametric":
        a1, a2, t = A.extra.get("a1"), A.extra.get("a2"), A.extra.get("t", 1.0)
        if (a1, a2) != (Matrix2(2, 1, 2, 2), Matrix2(2, 2, 1, 2)):
            raise ConfigError("reference", "closed forms exist only for A1 = [[2,1],[2,2]], A2 = [[2,2],[1,2]] scaled by t")
        if t == 1.0:
            return an.jsr_exact_example1, ""
        return lambda x: an.jsr_exact_parametric(x, t)[0], ""
    raise ConfigError("reference", f"no analytic reference for potential {cfg.potential!r}")


def run_compare(cfg: RunConfig) -> int:
    sys_, A = make_problem(cfg)
    ref, label = _reference(cfg, A)
    scfg = cfg.solver_config()
    res = solve(sys_, A, parse_init(cfg.init, sys_, scfg.n), scfg)
    x = res.V.x
    with np.errstate(divide="ignore"):
        exact = np.asarray(ref(x), dtype=float)
    finite = np.isfinite(exact)
    if not finite.any():
        raise ConfigError("reference", "reference is not finite on the grid")
    exact = exact - exact[finite].max()
    vnum = sup_normalize(res.V)[0].values
    diff = np.where(finite, vnum - exact, np.nan)
    sup_diff = float(np.nanmax(np.abs(diff)))
    write_csv(_prefix(cfg, ".csv"), {"x": x, "V_numeric": vnum, "V_exact": exact, "diff": diff})
    summary = {"sup_diff": sup_diff, "bound": cfg.bound, "m_estimate": res.m_estimate,
               "iterations": res.iterations, "converged": res.converged, "label": label}
    _write_json(_prefix(cfg, ".json"), summary)
    print(json.dumps(summary))
    return EXIT_OK if sup_diff <= cfg.bound else EXIT_NOT_CONVERGED


def run_spectrum(cfg: RunConfig) -> int:
    sys_, A = make_problem(cfg)
    res = eigen_solve(sys_, A, cfg.solver_config())
    phi = res.h.like(res.phi)
    ratio = ruelle_apply(phi, sys_, A).values / (res.lam * phi.values)
    write_csv(_prefix(cfg, ".csv"), {"x": res.h.x, "h": res.h.values, "phi": phi.values, "ratio": ratio})
    summary = res.summary()
    _write_json(_prefix(cfg, ".json"), summary)
    print(json.dumps(summary))
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def run_jsr(cfg: RunConfig) -> int:
    if len(cfg.a1) != 4 or len(cfg.a2) != 4:
        raise ConfigError("a1" if len(cfg.a1) != 4 else "a2", "a 2x2 matrix needs 4 comma-separated entries")
    a1, a2 = Matrix2.of(cfg.a1), Matrix2.of(cfg.a2)
    scfg = cfg.solver_config()
    ts = parse_range(cfg.t_scan) if cfg.t_scan else [cfg.t]
    results = t_scan(a1, a2, ts, scfg) if cfg.t_scan else [joint_spectral_radius(a1, a2, scfg, cfg.t)]
    rows = {"t": [], "m": [], "rho": [], "residual": [], "converged": []}
    for r in results:
        rows["t"].append(r.t)
        rows["m"].append(r.m)
        rows["rho"].append(r.rho)
        rows["residual"].append(r.subaction.residual if r.subaction else float("nan"))
        rows["converged"].append(bool(r.converged))
    write_csv(_prefix(cfg, ".csv"), rows)
    if len(results) == 1:
        r = results[0]
        summary = {"rho": r.rho, "m": r.m, "t": r.t, "converged": r.converged, "note": r.note,
                   "max_individual_radius": r.max_individual_radius, "error": r.error}
        if r.subaction is not None:
            save_result(r.subaction, _prefix(cfg, "_subaction"))
            summary.update(iterations=r.subaction.iterations, residual=r.subaction.residual)
    else:
        summary = {"points": len(results), "failures": sum(r.error is not None for r in results),
                   "all_converged": all(r.converged for r in results), "note": results[0].note}
    _write_json(_prefix(cfg, ".json"), summary)
    print(json.dumps(summary))
    return EXIT_OK if all(r.converged for r in results) else EXIT_NOT_CONVERGED


def run_oracle(cfg: RunConfig) -> int:
    sys_, A = make_problem(cfg)
    cert = best_periodic_value(A, sys_, cfg.p_max).as_dict()
    _write_json(_prefix(cfg, ".json"), cert)
    print(json.dumps(cert))
    return EXIT_OK


def run_basins(cfg: RunConfig) -> int:
    sys_, A = make_problem(cfg)
    scfg = cfg.solver_config()
    specs = [s.strip() for s in cfg.init.split(";") if s.strip()]
    if not specs:
        raise ConfigError("init", "no initial conditions given")
    results = []
    for i, spec in enumerate(specs):
        res = solve(sys_, A, parse_init(spec, sys_, scfg.n), scfg)
        save_result(res, _prefix(cfg, f"_basin{i}"))
        results.append(res)
    k = len(results)
    dist = [[sup_distance(results[i].V, results[j].V) for j in range(k)] for i in range(k)]
    threshold = 10 * scfg.tol
    distinct = [[i, j] for i in range(k) for j in range(i + 1, k) if dist[i][j] > threshold]
    summary = {"inits": specs, "distances": dist, "threshold": threshold, "distinct_pairs": distinct,
               "m_estimates": [r.m_estimate for r in results], "R_min": [float(r.R.values.min()) for r in results],
               "converged": [r.converged for r in results]}
    _write_json(_prefix(cfg, ".json"), summary)
    print(json.dumps(summary))
    return EXIT_OK if all(r.converged for r in results) else EXIT_NOT_CONVERGED


RUNNERS = {"solve": run_solve, "compare": run_compare, "spectrum": run_spectrum, "jsr": run_jsr,
           "oracle": run_oracle, "basins": run_basins}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subaction", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config")
        s.add_argument("--potential")
        s.add_argument("--params", help="comma-separated numbers, fractions allowed")
        s.add_argument("--system", help="doubling | farey | mobius (default from the potential)")
        s.add_argument("--grid-n", dest="grid_n")
        s.add_argument("--tol")
        s.add_argument("--max-iter", dest="max_iter")
        s.add_argument("--iters", help="run exactly this many steps")
        s.add_argument("--init", help="zero | bump:eps,a,k (';'-separated list for basins)")
        s.add_argument("--out", help="output path prefix")
        s.add_argument("--reference")
        s.add_argument("--bound")
        s.add_argument("--a1")
        s.add_argument("--a2")
        s.add_argument("--t")
        s.add_argument("--t-scan", dest="t_scan", help="lo:hi:step")
        s.add_argument("--p-max", dest="p_max")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = build_config(args)
        return RUNNERS[cfg.command](cfg)
    except (SubactionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
