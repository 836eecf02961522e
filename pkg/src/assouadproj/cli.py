"""Command-line front end: reproducible experiments writing CSV reports and a manifest.

Every run writes its tables into ``--out`` together with ``manifest.json``
(command, arguments, parsed configuration, seed, library versions and output
files).  Exit codes: 0 success, 2 input error, 3 resource limit, 4 when every
verdict of the run is inconclusive.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np
import scipy
import yaml

from . import __version__
from .constructions import falconer_counterexample_report, weak_tangent_sequence
from .coverage import attractor_cover, project_cover
from .delta_s import marstrand_experiment, marstrand_bad_directions, read_points_csv, write_marstrand_csv
from .dimension import assouad_estimate, box_estimate
from .errors import (
    AssouadProjError,
    ConfigError,
    DegenerateSet,
    DomainError,
    ExactArithmeticRequired,
    GraphError,
    InvalidInput,
    InvalidWord,
    ResolutionError,
    ResourceLimit,
    Unsupported,
)
from .graph_directed import INCONCLUSIVE, build_projection_system, classify_projection
from .ifs import IFS1D, IFS2D, Angle, ifs_from_dict, parse_number, similarity_dimension
from .separation import INCONCLUSIVE as SCAN_INCONCLUSIVE
from .separation import bandt_graf_ifs, gdwsp_scan, wsp_scan

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_INCONCLUSIVE = 0, 2, 3, 4

INPUT_ERRORS = (ConfigError, InvalidInput, InvalidWord, DomainError, GraphError,
                ExactArithmeticRequired, Unsupported, DegenerateSet)
RESOURCE_ERRORS = (ResourceLimit, ResolutionError)


# --------------------------------------------------------------------------
# Configuration helpers
# --------------------------------------------------------------------------

def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        cfg = yaml.safe_load(Path(path).read_text())
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {path}: {e}") from e
    if cfg is None:
        return {}
    if not isinstance(cfg, dict):
        raise ConfigError("configuration must be a mapping")
    return cfg


def _require_ifs(cfg: dict, exact: bool):
    ifs = ifs_from_dict(cfg)
    if exact and not ifs.exact:
        raise ExactArithmeticRequired("--exact needs rational ratios and translations in the config")
    return ifs


def parse_theta(spec) -> Angle | float:
    """A direction from the config: radians, ``{tan: "p/q"}``, ``{pi_rational: [p, q]}`` or ``{vertical: true}``."""
    if isinstance(spec, dict):
        if "tan" in spec:
            return Angle.from_tangent(parse_number(spec["tan"]))
        if spec.get("vertical"):
            return Angle.from_tangent(None)
        if "pi_rational" in spec:
            p, q = spec["pi_rational"]
            return Angle.rational_pi(int(p), int(q))
        raise ConfigError(f"unknown direction {spec!r}")
    try:
        return float(spec)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"not a direction: {spec!r}") from e


def theta_list(cfg: dict, grid: int | None, exact: bool) -> list:
    if grid is not None:
        if grid < 1:
            raise ConfigError("--theta-grid must be positive")
        thetas = [math.pi * j / grid for j in range(grid)]
    else:
        thetas = [parse_theta(t) for t in cfg.get("thetas", [])]
    if not thetas:
        raise ConfigError("empty direction list")
    if exact and not all(isinstance(t, Angle) for t in thetas):
        raise ExactArithmeticRequired("--exact needs directions given by exact tangents")
    return thetas


def _theta_str(t) -> str:
    return repr(t.radians) if isinstance(t, Angle) else repr(float(t))


def _theta_label(t) -> str:
    if isinstance(t, Angle):
        try:
            q = t.exact_tangent()
            return "vertical" if q is None else f"tan={q}"
        except ValueError:
            return repr(t)
    return "float"


class Run:
    """Output directory plus manifest bookkeeping."""

    def __init__(self, args: argparse.Namespace, cfg: dict):
        self.out = Path(args.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.args = args
        self.cfg = cfg
        self.outputs: list[str] = []
        self.summary: dict = {}

    def path(self, name: str) -> Path:
        self.outputs.append(name)
        return self.out / name

    def write_manifest(self, exit_code: int) -> None:
        manifest = {
            "command": self.args.command,
            "arguments": {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func",)},
            "config": self.cfg,
            "seed": self.args.seed,
            "versions": {
                "assouadproj": __version__,
                "python": platform.python_version(),
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "pyyaml": yaml.__version__,
            },
            "outputs": self.outputs,
            "summary": self.summary,
            "exitCode": exit_code,
        }
        (self.out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")


def _write_rows(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def cmd_dim(run: Run) -> int:
    args, cfg = run.args, run.cfg
    ifs = _require_ifs(cfg, args.exact)
    k = args.depth or int(cfg.get("depth", 12))
    cover = attractor_cover(ifs, k, budget=args.budget) if args.budget else attractor_cover(ifs, k)
    s = similarity_dimension(ifs.ratios)
    box = box_estimate(cover)
    ass = assouad_estimate(cover)
    x, R, r = ass.witness
    _write_rows(run.path("dim.csv"),
                ["depth", "similarityDimension", "boxEstimate", "boxResidual", "assouadEstimate",
                 "witnessX", "witnessY", "witnessR", "witnessr"],
                [[k, repr(s), repr(box.value), repr(box.residual), repr(ass.value),
                  repr(x[0]), repr(x[1]) if len(x) > 1 else "", repr(R), repr(r)]])
    ass.to_csv(run.path("assouad_profile.csv"))
    box.to_csv(run.path("box_profile.csv"))
    if isinstance(ifs, IFS2D):
        cover.to_svg(run.path("cover.svg"))
    run.summary = {"similarityDimension": s, "boxEstimate": box.value, "assouadEstimate": ass.value}
    return EXIT_OK


def _project_row(ifs, cover, theta, depth):
    verdict = classify_projection(ifs, theta, scan_depth=depth)
    rep = verdict.certificate
    est = assouad_estimate(project_cover(cover, theta)).value if cover is not None else math.nan
    return [
        _theta_str(theta), _theta_label(theta), verdict.kind, str(verdict), repr(verdict.dimension),
        rep.verdict.kind if rep is not None else "", repr(rep.min_distance) if rep is not None else "",
        repr(est),
    ]


def cmd_project(run: Run) -> int:
    args, cfg = run.args, run.cfg
    ifs = _require_ifs(cfg, args.exact)
    if not isinstance(ifs, IFS2D):
        raise ConfigError("project needs a planar IFS")
    thetas = theta_list(cfg, args.theta_grid, args.exact)
    depth = args.depth or int(cfg.get("scan_depth", 12))
    cover_depth = int(cfg.get("cover_depth", 10))
    cover = attractor_cover(ifs, cover_depth) if cover_depth else None
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        rows = list(pool.map(lambda t: _project_row(ifs, cover, t, depth), thetas))
    _write_rows(run.path("project.csv"),
                ["theta", "thetaExact", "verdict", "verdictValue", "gdDimension", "scanVerdict",
                 "scanMinDistance", "assouadEstimate"], rows)
    kinds = [r[2] for r in rows]
    run.summary = {k: kinds.count(k) for k in sorted(set(kinds))}
    return EXIT_INCONCLUSIVE if all(k == INCONCLUSIVE for k in kinds) else EXIT_OK


def cmd_marstrand(run: Run) -> int:
    args, cfg = run.args, run.cfg
    taus = [float(t) for t in cfg.get("taus", [0.2, 0.4, 0.6])]
    if "points" in cfg:
        pts = read_points_csv(cfg["points"])
        delta = float(parse_number(cfg["delta"])) if "delta" in cfg else None
        if delta is None:
            raise ConfigError("a point-set input needs 'delta'")
        rows = []
        for tau in taus:
            _, n = marstrand_bad_directions(pts, tau, delta)
            bound = delta ** (tau - 1) * math.log(1 / delta)
            rows.append([repr(delta), repr(tau), len(pts), n, repr(bound), repr(n / bound)])
        _write_rows(run.path("marstrand.csv"), ["delta", "tau", "m", "badCount", "bound", "fittedC"], rows)
        fitted = [float(r[-1]) for r in rows]
    else:
        exps = cfg.get("delta_exponents", list(range(6, 13)))
        deltas = [2.0 ** -int(e) for e in exps]
        table = marstrand_experiment(deltas, taus, seed=args.seed)
        write_marstrand_csv(table, run.path("marstrand.csv"))
        fitted = [r.fitted_c for r in table]
    positive = [f for f in fitted if f > 0]
    run.summary = {
        "fittedC": max(fitted) if fitted else 0.0,
        "spread": (max(positive) / min(positive)) if positive else math.nan,
    }
    return EXIT_OK


def cmd_separation(run: Run) -> int:
    args, cfg = run.args, run.cfg
    depth = args.depth or int(cfg.get("depth", 16))
    gap = float(cfg.get("isolation_gap", 1e-2))
    budget = args.budget or int(cfg.get("budget", 5_000_000))
    if "bandt_graf" in cfg:
        ifs = bandt_graf_ifs(parse_number(cfg["bandt_graf"].get("c", "1/4")))
        report = wsp_scan(ifs, depth, gap, budget)
    else:
        ifs = _require_ifs(cfg, args.exact)
        if isinstance(ifs, IFS1D):
            report = wsp_scan(ifs, depth, gap, budget)
        else:
            theta = parse_theta(cfg.get("theta", 0.0))
            if args.exact and not isinstance(theta, Angle):
                raise ExactArithmeticRequired("--exact needs an exact direction")
            report = gdwsp_scan(build_projection_system(ifs, theta), 0, depth, gap, budget)
    report.to_csv(run.path("separation.csv"))
    run.summary = {"verdict": report.verdict.kind, "minDistance": report.min_distance,
                   "states": report.states, "exactOverlaps": report.exact_overlaps}
    return EXIT_INCONCLUSIVE if report.verdict.kind == SCAN_INCONCLUSIVE else EXIT_OK


def cmd_tangent(run: Run) -> int:
    args, cfg = run.args, run.cfg
    ifs = _require_ifs(cfg, args.exact)
    if not isinstance(ifs, IFS2D):
        raise ConfigError("tangent needs a planar IFS")
    t1 = parse_theta(cfg.get("theta1", 0.0))
    t2 = parse_theta(cfg.get("theta2", t1))
    sched = [float(parse_number(e)) for e in cfg.get("eps_schedule", [2.0**-j for j in range(1, 7)])]
    steps = weak_tangent_sequence(ifs, t1, t2, sched, depth=args.depth or 12)
    _write_rows(run.path("tangent.csv"),
                ["epsilon", "wordLength", "log2Scale", "delta", "rotationError", "rhoGap", "dGap"],
                [[repr(s.epsilon), len(s.word), repr(s.blowup.log2_scale), repr(s.delta),
                  repr(s.rotation_error), repr(s.rho_gap), repr(s.d_gap)] for s in steps])
    run.summary = {"steps": len(steps), "maxRhoGapRatio": max(s.rho_gap / s.epsilon for s in steps)}
    return EXIT_OK


def cmd_falconer(run: Run) -> int:
    args, cfg = run.args, run.cfg
    c = Fraction(parse_number(cfg.get("c", "1/4")))
    report = falconer_counterexample_report(
        c, int(cfg.get("samples_u", 10)), int(cfg.get("samples_v", 5)),
        seed=args.seed, depth=args.depth or int(cfg.get("depth", 12)),
    )
    report.to_csv(run.path("falconer.csv"))
    run.summary = {"U": report.counts("U"), "V": report.counts("V"),
                   "uInterval": list(report.u_interval), "vWindow": list(report.v_window)}
    verdicts = [r.verdict for r in report.rows]
    return EXIT_INCONCLUSIVE if verdicts and all(v.startswith(INCONCLUSIVE) for v in verdicts) else EXIT_OK


COMMANDS = {
    "dim": (cmd_dim, "similarity, box and Assouad dimension estimates of an attractor"),
    "project": (cmd_project, "per-direction dichotomy verdicts for a planar IFS"),
    "marstrand": (cmd_marstrand, "bad-direction counts of discrete (delta, 1)-sets"),
    "separation": (cmd_separation, "weak separation scan of a 1D IFS or a projection system"),
    "tangent": (cmd_tangent, "weak pseudo-tangent blow-ups for dense rotations"),
    "falconer": (cmd_falconer, "verdicts over the two translation regions of the F_t family"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="assouadproj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="YAML configuration (IFS maps plus command parameters)")
        p.add_argument("--out", default=f"out/{name}", help="output directory")
        p.add_argument("--depth", type=int, help="cover or scan depth")
        p.add_argument("--theta-grid", type=int, dest="theta_grid", help="use N equally spaced directions in [0, pi)")
        p.add_argument("--threads", type=int, default=1, help="worker threads for per-direction work")
        p.add_argument("--seed", type=int, default=0, help="random seed")
        p.add_argument("--budget", type=int, help="search or cover budget")
        p.add_argument("--exact", action="store_true", help="require rational arithmetic throughout")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        run = Run(args, {})
        run.write_manifest(EXIT_INPUT)
        return EXIT_INPUT
    run = Run(args, cfg)
    try:
        code = args.func(run)
    except INPUT_ERRORS as e:
        print(f"input error: {e}", file=sys.stderr)
        code = EXIT_INPUT
    except RESOURCE_ERRORS as e:
        print(f"resource limit: {e}", file=sys.stderr)
        code = EXIT_RESOURCE
    except AssouadProjError as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_INPUT
    run.write_manifest(code)
    return code


if __name__ == "__main__":
    sys.exit(main())
