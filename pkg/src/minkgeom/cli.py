"""Batch driver: scenario configs in, reports out.

Subcommands
-----------
verify      run the transnormal/isoparametric verifier, write JSON + CSV
curvatures  per-level principal-curvature table and curvature-identity residuals
dualcheck   Legendre round-trip, dual-norm agreement, Cartan-curvature identity

Usage: ``minkgeom <command> <config.json> [--out DIR] [--seed N] [--tol X]
[--strategy analytic|taylor|fd]``.  The config is a single JSON file (see
``demos/configs/`` for worked examples); unknown keys are rejected with a
field path.  Exit codes: 0 success / expectation met, 1 runtime or config
error, 2 verdict mismatch or residual above tolerance.  Outputs are
byte-deterministic for a fixed scenario and seed (floats at 17 significant
digits).  Set MINKGEOM_LOG=debug|info for progress logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import calculus, duality, hypersurface, isoparametric, norms
from .errors import ConfigError, MinkGeomError
from .isoparametric import _fmt, dumps_17g
from .randers import RandersData, lemma61_check
from .sampling import sphere_directions

log = logging.getLogger("minkgeom")

_TOP_KEYS = {"scenario", "norm", "field", "levels", "samples", "tolerance",
             "seed", "expect", "output", "trials"}
_NORM_KEYS = {"family", "dim", "b", "k", "b_scalar", "profile", "strategy"}
_FIELD_KEYS = {"catalog", "c", "m"}
_EXPECT_KEYS = {"transnormal", "isoparametric"}
_OUTPUT_KEYS = {"json", "csv"}
_PROFILE_KEYS = {"type", "coeffs"}

_CATALOGS = ("linear", "sphere", "reverse_sphere", "cylinder", "reverse_cylinder",
             "norm_plus_linear")


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(path, str(exc)) from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc
    if not isinstance(cfg, dict):
        raise ConfigError(path, "top-level config must be an object")
    _reject_unknown(cfg, _TOP_KEYS, "")
    return cfg


def _reject_unknown(obj: dict, allowed: set, path: str):
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{path}{key}" if path else key, "unknown key")


def _require(cfg: dict, key: str, typ, path: str):
    if key not in cfg:
        raise ConfigError(f"{path}{key}", "missing required key")
    val = cfg[key]
    if typ is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError(f"{path}{key}", f"expected a number, got {type(val).__name__}")
        return float(val)
    if typ is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise ConfigError(f"{path}{key}", f"expected an integer, got {type(val).__name__}")
        return val
    if not isinstance(val, typ):
        raise ConfigError(f"{path}{key}", f"expected {typ.__name__}, got {type(val).__name__}")
    return val


def build_norm(cfg: dict, strategy_override: str | None = None) -> norms.MinkowskiNorm:
    _reject_unknown(cfg, _NORM_KEYS, "norm.")
    family = _require(cfg, "family", str, "norm.")
    strategy = strategy_override or cfg.get("strategy", "analytic")
    if strategy not in norms.STRATEGIES:
        raise ConfigError("norm.strategy", f"must be one of {norms.STRATEGIES}")
    try:
        if family == "euclidean":
            return norms.EuclideanNorm(_require(cfg, "dim", int, "norm."), strategy)
        if family == "randers":
            b = _require(cfg, "b", list, "norm.")
            return norms.RandersNorm(np.asarray(b, dtype=float), strategy)
        if family == "kth_root":
            return norms.KthRootNorm(_require(cfg, "k", int, "norm."),
                                     _require(cfg, "dim", int, "norm."), strategy)
        if family == "alpha_beta":
            prof_cfg = _require(cfg, "profile", dict, "norm.")
            _reject_unknown(prof_cfg, _PROFILE_KEYS, "norm.profile.")
            if _require(prof_cfg, "type", str, "norm.profile.") != "polynomial":
                raise ConfigError("norm.profile.type", "only 'polynomial' is supported")
            profile = norms.PolynomialProfile(_require(prof_cfg, "coeffs", list, "norm.profile."))
            return norms.AlphaBetaNorm(profile, _require(cfg, "b_scalar", float, "norm."),
                                       _require(cfg, "dim", int, "norm."),
                                       strategy if strategy != "analytic" else "taylor")
    except ConfigError:
        raise
    except MinkGeomError as exc:
        raise ConfigError("norm", str(exc)) from exc
    raise ConfigError("norm.family", f"unknown family {family!r}")


def build_field(cfg: dict, norm: norms.MinkowskiNorm) -> calculus.ScalarField:
    _reject_unknown(cfg, _FIELD_KEYS, "field.")
    catalog = _require(cfg, "catalog", str, "field.")
    try:
        if catalog == "linear":
            c = np.asarray(_require(cfg, "c", list, "field."), dtype=float)
            if c.size != norm.dim:
                raise ConfigError("field.c", f"length must equal dim {norm.dim}")
            return calculus.linear_field(c)
        if catalog == "sphere":
            return calculus.sphere_potential(norm)
        if catalog == "reverse_sphere":
            return calculus.sphere_potential(norm, reverse=True)
        if catalog in ("cylinder", "reverse_cylinder"):
            m = _require(cfg, "m", int, "field.")
            return calculus.cylinder_potential(norm, m, reverse=catalog.startswith("reverse"))
        if catalog == "norm_plus_linear":
            m = _require(cfg, "m", int, "field.")
            return calculus.norm_plus_linear(norm, m)
    except ConfigError:
        raise
    except MinkGeomError as exc:
        raise ConfigError("field", str(exc)) from exc
    raise ConfigError("field.catalog", f"unknown catalog {catalog!r}; use one of {_CATALOGS}")


def _optional(cfg: dict, key: str, typ, default, path: str = ""):
    if key not in cfg:
        return default
    return _require(cfg, key, typ, path)


def _levels(cfg: dict) -> list:
    levels = _require(cfg, "levels", list, "")
    out = []
    for i, t in enumerate(levels):
        if isinstance(t, bool) or not isinstance(t, (int, float)):
            raise ConfigError(f"levels[{i}]", "expected a number")
        out.append(float(t))
    return out


def _scenario_id(cfg: dict, path: str) -> str:
    return cfg.get("scenario") or os.path.splitext(os.path.basename(path))[0]


def _out_path(out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    norm = build_norm(_require(cfg, "norm", dict, ""), args.strategy)
    field = build_field(_require(cfg, "field", dict, ""), norm)
    levels = _levels(cfg)
    samples = _optional(cfg, "samples", int, 64)
    seed = args.seed if args.seed is not None else _optional(cfg, "seed", int, 0)
    tol = args.tol if args.tol is not None else _optional(cfg, "tolerance", float, None)
    log.info("verify %s: %d levels x %d samples", args.config, len(levels), samples)
    report = isoparametric.verify(norm, field, levels, count=samples, tol=tol, seed=seed)
    report.scenario_id = _scenario_id(cfg, args.config)
    output = cfg.get("output", {})
    _reject_unknown(output, _OUTPUT_KEYS, "output.")
    report.write_json(_out_path(args.out, output.get("json", "report.json")))
    report.write_csv(_out_path(args.out, output.get("csv", "samples.csv")))
    expect = cfg.get("expect")
    if expect is not None:
        _reject_unknown(expect, _EXPECT_KEYS, "expect.")
        for key in ("transnormal", "isoparametric"):
            if key in expect and bool(getattr(report, key)) != bool(expect[key]):
                log.warning("verdict mismatch: %s is %r, expected %r",
                            key, getattr(report, key), expect[key])
                return 2
    return 0


def cmd_curvatures(args) -> int:
    cfg = load_config(args.config)
    norm = build_norm(_require(cfg, "norm", dict, ""), args.strategy)
    field = build_field(_require(cfg, "field", dict, ""), norm)
    levels = _levels(cfg)
    samples = _optional(cfg, "samples", int, 64)
    seed = args.seed if args.seed is not None else _optional(cfg, "seed", int, 0)
    tol = args.tol if args.tol is not None else _optional(cfg, "tolerance", float, 1e-8)
    scenario = _scenario_id(cfg, args.config)
    rows = ["scenario,level,group,kappa,multiplicity,mean_curvature,sectional_products"]
    level_reports = []
    worst = 0.0
    for t in levels:
        sample = isoparametric.sample_level(norm, field, float(t), samples, seed=seed)
        stats = isoparametric._modal_groups(sample)
        hhat = sum(k * m for k, m in stats)
        products = [stats[r][0] * stats[s][0]
                    for r in range(len(stats)) for s in range(r + 1, len(stats))]
        cartan_res = 0.0
        two_curv = 0.0
        for x in sample.points[: min(8, len(sample.points))]:
            fr = hypersurface.frame_at(norm, field, x)
            cartan_res = max(cartan_res, hypersurface.cartan_formula_residual(fr))
            tc = hypersurface.two_curvature_residuals(norm, fr)
            if tc.size:
                two_curv = max(two_curv, float(np.max(np.abs(tc))))
        worst = max(worst, cartan_res, two_curv)
        for gi, (kappa, mult) in enumerate(stats):
            rows.append(",".join([
                scenario, _fmt(t), str(gi), _fmt(kappa), str(mult), _fmt(hhat),
                ";".join(_fmt(p) for p in products),
            ]))
        level_reports.append({
            "level": float(t),
            "groups": [[float(k), int(m)] for k, m in stats],
            "mean_curvature": float(hhat),
            "sectional_products": [float(p) for p in products],
            "cartan_formula_residual": float(cartan_res),
            "two_curvature_residual": float(two_curv),
        })
    output = cfg.get("output", {})
    _reject_unknown(output, _OUTPUT_KEYS, "output.")
    with open(_out_path(args.out, output.get("csv", "curvatures.csv")), "w") as fh:
        fh.write("\n".join(rows) + "\n")
    payload = {"schema": 1, "scenario": scenario, "tolerance": float(tol),
               "levels": level_reports}
    with open(_out_path(args.out, output.get("json", "curvatures.json")), "w") as fh:
        fh.write(dumps_17g(payload) + "\n")
    return 0 if worst <= tol else 2


def cmd_dualcheck(args) -> int:
    cfg = load_config(args.config)
    norm = build_norm(_require(cfg, "norm", dict, ""), args.strategy)
    trials = _optional(cfg, "trials", int, 1000)
    seed = args.seed if args.seed is not None else _optional(cfg, "seed", int, 0)
    rng = np.random.default_rng(seed)
    preserve = roundtrip = agree = 0.0
    for _ in range(trials):
        y = rng.standard_normal(norm.dim)
        while np.linalg.norm(y) < 1e-3:
            y = rng.standard_normal(norm.dim)
        F = norm.value(y)
        xi = norm.legendre(y)
        preserve = max(preserve, abs(duality.dual_norm(norm, xi) - F) / F)
        y2 = duality.legendre_inverse(norm, xi)
        roundtrip = max(roundtrip, float(np.linalg.norm(y2 - y) / np.linalg.norm(y)))
        if isinstance(norm, norms.RandersNorm):
            newton_val = norm.value(duality.legendre_inverse_newton(norm, xi))
            agree = max(agree, abs(duality.dual_norm(norm, xi) - newton_val) / F)
    lemma = 0.0
    if isinstance(norm, norms.RandersNorm) and norm.dim >= 3:
        data = RandersData.from_norm(norm)
        for _ in range(50):
            y = rng.standard_normal(norm.dim)
            y /= norm.value(y)
            g = norm.fundamental_tensor(y)
            X = rng.standard_normal(norm.dim)
            X -= (X @ g @ y) / (y @ g @ y) * y
            Y = rng.standard_normal(norm.dim)
            Y -= (Y @ g @ y) / (y @ g @ y) * y
            Y -= (Y @ g @ X) / (X @ g @ X) * X
            lhs, rhs = lemma61_check(data, y, X, Y)
            lemma = max(lemma, abs(lhs - rhs))
    thresholds = {
        "norm_preservation": args.tol if args.tol is not None else 1e-10,
        "roundtrip": args.tol if args.tol is not None else 1e-9,
        "dual_agreement": args.tol if args.tol is not None else 1e-8,
        "lemma61": args.tol if args.tol is not None else 1e-7,
    }
    results = {
        "norm_preservation": preserve,
        "roundtrip": roundtrip,
        "dual_agreement": agree,
        "lemma61": lemma,
    }
    payload = {
        "schema": 1,
        "scenario": _scenario_id(cfg, args.config),
        "trials": trials,
        "seed": seed,
        "residuals": results,
        "thresholds": thresholds,
        "pass": {k: bool(results[k] <= thresholds[k]) for k in results},
    }
    output = cfg.get("output", {})
    _reject_unknown(output, _OUTPUT_KEYS, "output.")
    with open(_out_path(args.out, output.get("json", "dualcheck.json")), "w") as fh:
        fh.write(dumps_17g(payload) + "\n")
    return 0 if all(payload["pass"].values()) else 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="minkgeom", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in (("verify", cmd_verify), ("curvatures", cmd_curvatures),
                     ("dualcheck", cmd_dualcheck)):
        sp = sub.add_parser(name)
        sp.add_argument("config", help="path to a scenario config (JSON)")
        sp.add_argument("--out", default=".", help="output directory (default: cwd)")
        sp.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        sp.add_argument("--tol", type=float, default=None, help="override tolerances")
        sp.add_argument("--strategy", choices=norms.STRATEGIES, default=None,
                        help="override the derivative strategy")
        sp.set_defaults(fn=fn)
    return p


def main(argv=None) -> int:
    level = os.environ.get("MINKGEOM_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except MinkGeomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
