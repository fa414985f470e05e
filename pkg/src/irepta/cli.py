"""Command-line front end: batch planning studies driven by config and data files.

Exit codes: 0 success, 1 validation failure or solver breakdown, 2 infeasible,
3 node/time limit hit, 4 configuration or input-data error.

Global flags fall back to environment variables ``IREPTA_CONFIG``,
``IREPTA_PROFILE``, ``IREPTA_OUT_DIR``, ``IREPTA_SEED``, ``IREPTA_THREADS`` and
``IREPTA_LP_BACKEND``; single config values can be overridden with
``IREPTA_<SECTION>__<KEY>`` (see :mod:`irepta.io`).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (ConfigError, DataError, DecodeError, InfeasibleError, IreptaError,
                     LimitReached, NumericalFailure)
from .igdt import IgdtConfig, IgdtMode, solve_igdt, worst_case_recheck
from .io import (StudyConfig, load_config, plan_document, read_plan, read_profile,
                 write_json, write_profile, write_schedules)
from .lp import BACKENDS
from .milfp import check_solution
from .model import (build_deterministic_model, build_fixed_ras_milp, build_operation_model,
                    build_revenue_milp, config_hash, plan_diagnostics, solve_model,
                    synthetic_profile)
from .scenarios import (fit_markov_chain, posteriori_elcoa, read_history, sample_scenarios,
                        synthetic_history, write_history, write_scenarios)

log = logging.getLogger("irepta")

EXIT_OK, EXIT_FAIL, EXIT_INFEASIBLE, EXIT_LIMIT, EXIT_CONFIG = 0, 1, 2, 3, 4

IGDT_HEADER = ("case", "mode", "beta", "status", "alpha", "target_lcoa", "achieved_lcoa",
               "recheck_lcoa", "N_W", "N_S", "N_AE", "C_W", "C_S", "C_AE", "C_HS", "C_FC",
               "C_B", "flh_ae", "r_as", "c_inv_tot", "lin_residual")
FLEX_HEADER = ("dt_as", "n_periods", "status", "dlcoa", "r_as", "flh_ae", "N_W", "N_S", "N_AE")
COMPARE_HEADER = ("r_as", "status", "lcoa", "revenue")
HISTOGRAM_HEADER = ("bin_lo", "bin_hi", "count")


def example_config_path() -> Path:
    return Path(str(resources.files("irepta") / "data" / "example_config.json"))


def _digest_file(path) -> str | None:
    if path is None:
        return None
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]


@dataclass
class RunManifest:
    """What a run did and with which inputs.

    The hash covers everything that determines the outputs (command and its
    arguments, effective config, input file digests, seed, solver settings,
    version) and leaves out the output directory and timestamps, so repeated
    runs produce identical output bytes.
    """

    command: str
    arguments: dict
    config_path: str | None
    profile_path: str | None
    config_digest: str
    profile_digest: str | None
    seed: int
    solver: dict
    out_dir: str
    version: str = __version__
    started: float = field(default_factory=time.time)
    finished: float | None = None

    def hash(self) -> str:
        core = {"command": self.command, "arguments": self.arguments,
                "config_digest": self.config_digest, "profile_digest": self.profile_digest,
                "seed": self.seed, "solver": self.solver, "version": self.version}
        blob = json.dumps(core, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def write(self, out_dir: Path) -> None:
        doc = asdict(self)
        doc["hash"] = self.hash()
        write_json(doc, out_dir / "manifest.json")


class Context:
    def __init__(self, args, study: StudyConfig, out_dir: Path):
        self.args = args
        self.study = study
        self.out_dir = out_dir
        self.cfg = study.planning
        self.facs = study.facilities
        self.bnb = study.solver.bnb()
        self.seed = args.seed
        self.threads = max(1, args.threads)
        self._profile = None
        cmd_args = {k: v for k, v in vars(args).items()
                    if k not in ("out_dir", "func", "verbose", "config", "profile")}
        self.manifest = RunManifest(
            command=args.command, arguments=cmd_args, config_path=args.config,
            profile_path=args.profile,
            config_digest=hashlib.sha256(json.dumps(study.to_dict(), sort_keys=True,
                                                    default=str).encode()).hexdigest()[:16],
            profile_digest=_digest_file(args.profile), seed=args.seed,
            solver=asdict(study.solver), out_dir=str(out_dir))
        self.tag = f"manifest={self.manifest.hash()}"

    def profile(self, cfg=None):
        cfg = cfg or self.cfg
        if self._profile is None:
            if self.args.profile:
                self._profile = read_profile(self.args.profile, cfg.dt)
            else:
                self._profile = synthetic_profile(cfg.N, cfg.dt, seed=self.seed)
        if self._profile.N != cfg.N:
            raise ConfigError(f"profile has {self._profile.N} steps, config horizon N = {cfg.N}")
        return self._profile

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def map(self, fn, items):
        items = list(items)
        if self.threads > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as ex:
                return list(ex.map(fn, items))
        return [fn(i) for i in items]


def _csv_writer(path: Path, header, tag):
    fh = open(path, "w", newline="")
    fh.write(f"# {tag}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    return fh, w


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def _floats(text: str, name: str) -> list[float]:
    """Comma list ``a,b,c`` or range ``start:stop:step`` (inclusive stop)."""
    try:
        if ":" in text:
            a, b, s = (float(x) for x in text.split(":"))
            if s <= 0:
                raise ValueError
            n = int(math.floor((b - a) / s + 1e-9)) + 1
            return [round(a + i * s, 12) for i in range(n)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse {name} list {text!r}") from None


def _status_of(exc: Exception) -> str:
    if isinstance(exc, InfeasibleError):
        return "infeasible"
    if isinstance(exc, LimitReached):
        return "limit"
    return "error"


# --------------------------------------------------------------------- commands

def cmd_plan(ctx: Context) -> int:
    a = ctx.args
    cfg = ctx.cfg
    if a.relax_bess:
        cfg = replace(cfg, relax_bess_binaries=True)
    if a.dt_as is not None:
        cfg = replace(cfg, dt_as=a.dt_as)
    cfg.validate()
    prof = ctx.profile(cfg)
    if a.fix_ras is not None:
        inst = build_fixed_ras_milp(cfg, ctx.facs, prof, a.fix_ras)
    else:
        inst = build_deterministic_model(cfg, ctx.facs, prof)
    plan, sol = solve_model(inst, ctx.bnb)
    diag = plan_diagnostics(inst, plan)
    plan.meta.update(relax_bess=cfg.relax_bess_binaries, fix_ras=a.fix_ras, diagnostics=diag)
    plan.meta.pop("runtime", None)  # keeps repeated runs byte-identical
    write_json(plan_document(plan, ctx.manifest.hash()), ctx.path("plan.json"))
    write_schedules(plan, ctx.path("schedules.csv"), ctx.tag)
    print(f"LCOA {plan.lcoa:.6f} r_AS {plan.r_as:.6f} units {plan.units} "
          f"nodes {sol.nodes_explored} ({sol.runtime:.1f} s)")
    return EXIT_OK


def _deterministic_lcoa(ctx: Context) -> float:
    a = ctx.args
    if a.dlcoa is not None:
        return a.dlcoa
    if a.plan is not None:
        plan, _ = read_plan(a.plan)
        return plan.lcoa
    plan, _ = solve_model(build_deterministic_model(ctx.cfg, ctx.facs, ctx.profile()), ctx.bnb)
    log.info("deterministic LCOA %.6f", plan.lcoa)
    return plan.lcoa


def cmd_igdt(ctx: Context) -> int:
    a = ctx.args
    betas = _floats(a.beta, "beta")
    if any(b < 0 for b in betas):
        raise ConfigError("beta values must be >= 0")
    prof = ctx.profile()
    dlcoa = _deterministic_lcoa(ctx)
    opts = dict(ctx.study.igdt)
    if a.alpha_max is not None:
        opts["alpha_max"] = a.alpha_max
    if a.big_m is not None:
        opts["M"] = a.big_m
    mode = IgdtMode(a.mode)

    def run(item):
        case, beta = item
        row = {"case": case, "mode": mode.value, "beta": beta}
        try:
            ic = IgdtConfig(mode, beta, dlcoa, **opts)
            ic.validate(ctx.cfg)
            s = solve_igdt(ctx.cfg, ctx.facs, prof, ic, ctx.bnb)
        except (InfeasibleError, LimitReached) as exc:
            row["status"] = _status_of(exc)
            return row
        p = s.plan
        row.update(status="optimal", alpha=s.alpha, target_lcoa=ic.target, achieved_lcoa=s.achieved,
                   flh_ae=p.flh_ae, r_as=p.r_as, c_inv_tot=p.c_inv_tot, lin_residual=s.residual,
                   **p.units, **p.capacities)
        if a.recheck:
            try:
                row["recheck_lcoa"] = worst_case_recheck(p, s.alpha, mode, ctx.cfg, ctx.facs,
                                                         prof, ctx.bnb)
            except (InfeasibleError, LimitReached) as exc:
                row["recheck_lcoa"] = None
                row["status"] = f"optimal/recheck-{_status_of(exc)}"
        return row

    rows = ctx.map(run, list(enumerate(betas, start=1)))
    out = ctx.path(f"igdt_{mode.value}.csv")
    fh, w = _csv_writer(out, IGDT_HEADER, ctx.tag)
    with fh:
        for r in rows:
            w.writerow([_fmt(r.get(k)) for k in IGDT_HEADER])
    for r in rows:
        print(f"beta {r['beta']:g}: {r['status']} alpha {_fmt(r.get('alpha'))}")
    return EXIT_OK


def _histogram(values: np.ndarray, bins: int):
    if values.size == 0:
        return []
    counts, edges = np.histogram(values, bins=bins)
    return [(edges[i], edges[i + 1], int(c)) for i, c in enumerate(counts)]


def cmd_posteriori(ctx: Context) -> int:
    a = ctx.args
    plan, doc = read_plan(a.plan)
    prof = ctx.profile()
    if a.history:
        hist = read_history(a.history)
    else:
        hist = synthetic_history(a.years, seed=ctx.seed)
    opts = ctx.study.posteriori
    n_states = a.n_states or opts.get("n_states", 5)
    exclude = [int(y) for y in _floats(a.exclude_years, "year")] if a.exclude_years else \
        opts.get("exclude_years", [])
    model = fit_markov_chain(hist, n_states, exclude)
    scen = sample_scenarios(model, a.n_scenarios, seed=ctx.seed, burn_in=a.burn_in)
    mode = a.infeasible or opts.get("infeasible", "exclude")
    penalty = a.penalty if a.penalty is not None else opts.get("penalty")
    res = posteriori_elcoa(plan, scen, ctx.cfg, ctx.facs, prof, ctx.bnb, mode, penalty,
                           workers=ctx.threads)
    write_scenarios(scen, res.dlcoa, ctx.path("scenarios.csv"), ctx.tag)
    fh, w = _csv_writer(ctx.path("histogram.csv"), HISTOGRAM_HEADER, ctx.tag)
    with fh:
        for lo, hi, c in _histogram(res.distribution, a.bins):
            w.writerow([repr(float(lo)), repr(float(hi)), c])
    write_json({
        "manifest_hash": ctx.manifest.hash(),
        "elcoa": res.elcoa, "dlcoa": plan.lcoa, "n_scenarios": len(scen),
        "n_infeasible": res.n_infeasible, "n_unique": res.n_unique, "infeasible_mode": mode,
        "chain": {"wind": {"values": model.wind.values, "P": model.wind.P},
                  "solar": {"values": model.solar.values, "P": model.solar.P},
                  "meta": model.meta},
    }, ctx.path("posteriori.json"))
    print(f"ELCOA {res.elcoa:.6f} (DLCOA {plan.lcoa:.6f}, {res.n_infeasible} infeasible "
          f"of {len(scen)})")
    return EXIT_OK


def cmd_sweep_flex(ctx: Context) -> int:
    a = ctx.args
    periods = []
    for tok in a.periods.split(","):
        tok = tok.strip()
        periods.append(ctx.cfg.horizon_hours if tok in ("horizon", "N") else float(tok))
    prof = ctx.profile()

    def run(dt_as):
        cfg = replace(ctx.cfg, dt_as=dt_as)
        cfg.validate()
        row = {"dt_as": dt_as, "n_periods": cfg.n_periods}
        try:
            plan, _ = solve_model(build_deterministic_model(cfg, ctx.facs, prof), ctx.bnb)
        except (InfeasibleError, LimitReached) as exc:
            row["status"] = _status_of(exc)
            return row
        row.update(status="optimal", dlcoa=plan.lcoa, r_as=plan.r_as, flh_ae=plan.flh_ae,
                   **plan.units)
        return row

    rows = ctx.map(run, periods)
    fh, w = _csv_writer(ctx.path("flex.csv"), FLEX_HEADER, ctx.tag)
    with fh:
        for r in rows:
            w.writerow([_fmt(r.get(k)) for k in FLEX_HEADER])
    for r in rows:
        print(f"dt_as {r['dt_as']:g} h: {r['status']} DLCOA {_fmt(r.get('dlcoa'))}")
    return EXIT_OK


def cmd_compare_milp(ctx: Context) -> int:
    a = ctx.args
    if a.price < 0:
        raise ConfigError("price must be >= 0")
    grid = _floats(a.ras_grid, "r_AS")
    if any(not 0 < r <= 1 for r in grid):
        raise ConfigError("utilization grid values must lie in (0, 1]")
    prof = ctx.profile()

    def run(r):
        row = {"r_as": r}
        try:
            plan, _ = solve_model(build_fixed_ras_milp(ctx.cfg, ctx.facs, prof, r), ctx.bnb)
        except (InfeasibleError, LimitReached) as exc:
            row["status"] = _status_of(exc)
            return row
        row.update(status="optimal", lcoa=plan.lcoa, revenue=plan.revenue(a.price))
        return row

    rows = ctx.map(run, grid)
    milfp, _ = solve_model(build_deterministic_model(ctx.cfg, ctx.facs, prof), ctx.bnb)
    rev, _ = solve_model(build_revenue_milp(ctx.cfg, ctx.facs, prof, a.price), ctx.bnb)
    fh, w = _csv_writer(ctx.path("compare.csv"), COMPARE_HEADER, ctx.tag)
    with fh:
        for r in rows:
            w.writerow([_fmt(r.get(k)) for k in COMPARE_HEADER])
    feasible = [r["lcoa"] for r in rows if r.get("status") == "optimal"]
    summary = {
        "manifest_hash": ctx.manifest.hash(),
        "price": a.price,
        "milfp": {"lcoa": milfp.lcoa, "r_as": milfp.r_as, "revenue": milfp.revenue(a.price)},
        "revenue_max": {"lcoa": rev.lcoa, "r_as": rev.r_as, "revenue": rev.revenue(a.price)},
        "lcoa_relative_error": (rev.lcoa - milfp.lcoa) / milfp.lcoa,
        "grid_min_lcoa": min(feasible) if feasible else None,
    }
    write_json(summary, ctx.path("compare_summary.json"))
    print(f"MILFP LCOA {milfp.lcoa:.6f} at r_AS {milfp.r_as:.4f}; revenue-max LCOA "
          f"{rev.lcoa:.6f} at r_AS {rev.r_as:.4f} (RE {summary['lcoa_relative_error']:.2%})")
    return EXIT_OK


def cmd_gen_history(ctx: Context) -> int:
    a = ctx.args
    hist = synthetic_history(a.years, seed=ctx.seed)
    out = Path(a.output) if a.output else ctx.path("history.csv")
    write_history(hist, out, ctx.tag)
    print(f"wrote {len(hist)} years to {out}")
    return EXIT_OK


def cmd_gen_profile(ctx: Context) -> int:
    a = ctx.args
    n = a.hours or ctx.cfg.N
    prof = synthetic_profile(n, ctx.cfg.dt, seed=ctx.seed)
    out = Path(a.output) if a.output else ctx.path("profile.csv")
    write_profile(prof, out, ctx.tag)
    print(f"wrote {n} steps to {out} (FLH wind {prof.flh()[0]:.1f}, solar {prof.flh()[1]:.1f})")
    return EXIT_OK


def cmd_validate(ctx: Context) -> int:
    a = ctx.args
    plan, doc = read_plan(a.plan)
    if plan.vector is None:
        raise DataError(f"{a.plan} carries no solution vector")
    meta = plan.meta
    cfg = replace(ctx.cfg, relax_bess_binaries=bool(meta.get("relax_bess", False)),
                  dt_as=float(meta.get("dt_as", ctx.cfg.dt_as)))
    prof = ctx.profile(cfg)
    kind = plan.kind
    if kind == "lcoa":
        inst = build_deterministic_model(cfg, ctx.facs, prof)
    elif kind == "fixed_ras":
        inst = build_fixed_ras_milp(cfg, ctx.facs, prof, float(meta["r_as"]))
    elif kind == "revenue":
        inst = build_revenue_milp(cfg, ctx.facs, prof, float(meta["price"]))
    elif kind == "operation":
        inst = build_operation_model(plan.pinned_capacities(), cfg, ctx.facs, prof,
                                     meta.get("scale_w", 1.0), meta.get("scale_s", 1.0))
    else:
        raise DataError(f"cannot validate plans of kind {kind!r}")
    if meta.get("config_hash") and meta["config_hash"] != inst.meta["config_hash"]:
        raise ConfigError("plan was produced with a different config or profile")
    x, y = inst.pack(plan.vector)
    rep = check_solution(inst.problem, x, y, tol=a.tol)
    total = plan.C_inv + plan.C_OM + plan.R_oper
    ident = abs(plan.lcoa * plan.O_A - total) / max(1.0, total)
    obj = rep.objective * inst.objective_scale
    obj_ok = kind == "revenue" or abs(obj - plan.lcoa) <= 1e-8 * max(1.0, abs(plan.lcoa))
    ok = rep.ok and ident <= 1e-8 and obj_ok
    print(f"rows {rep.max_row_violation:.3g} bounds {rep.max_bound_violation:.3g} "
          f"integrality {rep.max_integrality_violation:.3g} identity {ident:.3g}: "
          f"{'OK' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_FAIL


# ----------------------------------------------------------------------- parser

def _env(name, default=None, cast=str):
    v = os.environ.get(f"IREPTA_{name}")
    if v is None:
        return default
    try:
        return cast(v)
    except ValueError:
        raise ConfigError(f"environment variable IREPTA_{name}={v!r} is invalid") from None


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--config", default=d(None), help="study config JSON")
    p.add_argument("--profile", default=d(None), help="profile CSV t,p_w_sta,p_s_sta "
                   "(synthetic if omitted)")
    p.add_argument("--out-dir", default=d(None), help="output directory (default: .)")
    p.add_argument("--seed", type=int, default=d(None), help="random seed")
    p.add_argument("--threads", type=int, default=d(None), help="parallel solves in sweeps")
    p.add_argument("--lp-backend", choices=BACKENDS, default=d(None), help="LP solver backend")
    p.add_argument("-v", "--verbose", action="count", default=d(0))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irepta", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _add_common(p, suppress=True)
        p.set_defaults(func=fn)
        return p

    p = command("plan", cmd_plan, "solve the deterministic minimum-LCOA plan")
    p.add_argument("--relax-bess", action="store_true", help="drop the charge/discharge binaries")
    p.add_argument("--fix-ras", type=float, help="pin synthesis utilization (linear objective)")
    p.add_argument("--dt-as", type=float, help="override the synthesis scheduling period (h)")

    p = command("igdt", cmd_igdt, "robust / opportunistic horizon sweep over beta")
    p.add_argument("--mode", choices=[m.value for m in IgdtMode], default="robust")
    p.add_argument("--beta", default="0.02,0.04,0.06,0.08,0.10", help="comma list or a:b:step")
    p.add_argument("--dlcoa", type=float, help="deterministic LCOA (solved if omitted)")
    p.add_argument("--plan", help="plan.json to take the deterministic LCOA from")
    p.add_argument("--alpha-max", type=float)
    p.add_argument("--big-m", type=float)
    p.add_argument("--recheck", action="store_true",
                   help="re-simulate each plan on the extreme profile")

    p = command("posteriori", cmd_posteriori, "expected LCOA of a plan over sampled years")
    p.add_argument("--plan", required=True, help="plan.json from 'plan'")
    p.add_argument("--history", help="history CSV year,flh_wind,flh_solar (synthetic if omitted)")
    p.add_argument("--years", type=int, default=20, help="length of a synthetic history")
    p.add_argument("--n-scenarios", type=int, default=200)
    p.add_argument("--n-states", type=int)
    p.add_argument("--burn-in", type=int, default=100)
    p.add_argument("--exclude-years", help="comma list of years dropped before fitting")
    p.add_argument("--infeasible", choices=("exclude", "penalty"))
    p.add_argument("--penalty", type=float)
    p.add_argument("--bins", type=int, default=20)

    p = command("sweep-flex", cmd_sweep_flex, "LCOA versus synthesis scheduling period")
    p.add_argument("--periods", default="24,168,horizon",
                   help="comma list of periods in hours; 'horizon' = whole horizon")

    p = command("compare-milp", cmd_compare_milp, "fixed-utilization and revenue models vs LCOA")
    p.add_argument("--price", type=float, default=3200.0, help="ammonia price per tonne")
    p.add_argument("--ras-grid", default="0.35:1.0:0.05")

    p = command("gen-history", cmd_gen_history, "synthetic annual FLH history CSV")
    p.add_argument("--years", type=int, default=20)
    p.add_argument("--output")

    p = command("gen-profile", cmd_gen_profile, "synthetic hourly profile CSV")
    p.add_argument("--hours", type=int)
    p.add_argument("--output")

    p = command("validate", cmd_validate, "check a saved plan against its model")
    p.add_argument("--plan", required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    return parser


def _resolve_globals(args) -> None:
    args.config = args.config or _env("CONFIG")
    args.profile = args.profile or _env("PROFILE")
    args.out_dir = args.out_dir or _env("OUT_DIR", ".")
    args.seed = args.seed if args.seed is not None else _env("SEED", 0, int)
    args.threads = args.threads if args.threads is not None else _env("THREADS", 1, int)
    args.lp_backend = args.lp_backend or _env("LP_BACKEND")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _resolve_globals(args)
        study = load_config(args.config)
        if args.lp_backend:
            study.solver = replace(study.solver, lp_backend=args.lp_backend)
            study.solver.validate()
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        ctx = Context(args, study, out_dir)
        code = args.func(ctx)
        ctx.manifest.finished = time.time()
        ctx.manifest.write(out_dir)
        return code
    except (ConfigError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except LimitReached as exc:
        print(f"limit reached: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (DecodeError, NumericalFailure, IreptaError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
