"""Configuration, profile, schedule and plan files.

Config JSON::

    {
      "planning":   {"N": 168, "dt": 1.0, "dt_as": 24.0, ...},
      "facilities": [{"id": "W", "I_init": 4000.0, ...}, ...],
      "bounds":     {"N_W": 64, "N_S": 64, "N_AE": 40, "C_HS": 1e6, "C_FC": 50, "C_B": 200},
      "solver":     {"lp_backend": "highs", "time_limit": 600, "node_limit": 100000, ...}
    }

Every section is optional; facility entries override the defaults field by
field. Environment variables ``IREPTA_<SECTION>__<KEY>`` override single
config values (the value is parsed as JSON when possible, e.g.
``IREPTA_PLANNING__N=48``; facility fields use ``IREPTA_FACILITIES__W__I_INIT``).

CSV files may start with ``#`` comment lines, which readers skip.
"""

from __future__ import annotations

import copy
import csv
import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError
from .lp import BACKENDS, LpConfig
from .milfp import BnbConfig
from .model.params import (CapacityBounds, FacilityParams, PlanningConfig, RenewableProfile,
                           default_facilities)
from .model.plan import PlanResult

ENV_PREFIX = "IREPTA_"
PROFILE_HEADER = ("t", "p_w_sta", "p_s_sta")
SCHEDULE_HEADER = ("t", "P_W", "P_S", "P_AE", "P_AS", "P_FC", "P_ch", "P_disc", "P_curt",
                   "n_HS", "ESOC", "q_in", "q_out", "q_out1")
SECTIONS = ("planning", "facilities", "bounds", "solver", "igdt", "posteriori")


@dataclass
class SolverSettings:
    lp_backend: str = "highs"
    time_limit: float = 600.0
    node_limit: int = 100_000
    rel_gap: float = 1e-9
    int_tol: float = 1e-6
    tol_primal: float = 1e-9
    tol_dual: float = 1e-9
    shell_command: str | None = None
    shell_timeout: float | None = None

    def validate(self) -> None:
        if self.lp_backend not in BACKENDS:
            raise ConfigError(f"unknown LP backend {self.lp_backend!r}; choose from {BACKENDS}")
        if self.lp_backend == "mps-shellout" and not self.shell_command:
            raise ConfigError("the mps-shellout backend needs solver.shell_command")
        if self.time_limit <= 0 or self.node_limit < 1:
            raise ConfigError("time and node limits must be positive")

    def bnb(self) -> BnbConfig:
        lp = LpConfig(backend=self.lp_backend, tol_primal=self.tol_primal, tol_dual=self.tol_dual,
                      shell_command=self.shell_command, shell_timeout=self.shell_timeout)
        return BnbConfig(int_tol=self.int_tol, rel_gap=self.rel_gap, node_limit=self.node_limit,
                         time_limit=self.time_limit, lp=lp)


@dataclass
class StudyConfig:
    planning: PlanningConfig
    facilities: dict[str, FacilityParams]
    solver: SolverSettings
    igdt: dict
    posteriori: dict
    raw: dict

    def to_dict(self) -> dict:
        plan = asdict(self.planning)
        bounds = plan.pop("bounds")
        return {
            "planning": plan,
            "facilities": [asdict(f) for f in self.facilities.values()],
            "bounds": bounds,
            "solver": asdict(self.solver),
            "igdt": dict(self.igdt),
            "posteriori": dict(self.posteriori),
        }


def _parse_env_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_env_overrides(doc: dict, environ=None) -> dict:
    """Apply ``IREPTA_<SECTION>__<KEY>[__<FIELD>]`` overrides to a config document."""
    environ = os.environ if environ is None else environ
    doc = copy.deepcopy(doc)
    for name, text in sorted(environ.items()):
        if not name.startswith(ENV_PREFIX) or "__" not in name:
            continue
        parts = name[len(ENV_PREFIX):].split("__")
        section = parts[0].lower()
        if section not in SECTIONS or len(parts) < 2:
            raise ConfigError(f"environment override {name} does not name a config value")
        value = _parse_env_value(text)
        if section == "facilities":
            if len(parts) != 3:
                raise ConfigError(f"{name}: use IREPTA_FACILITIES__<ID>__<FIELD>")
            fid, key = parts[1].upper(), _field_name(FacilityParams, parts[2])
            facs = doc.setdefault("facilities", [])
            entry = next((f for f in facs if f.get("id") == fid), None)
            if entry is None:
                entry = {"id": fid}
                facs.append(entry)
            entry[key] = value
            continue
        if len(parts) != 2:
            raise ConfigError(f"{name}: nested keys only exist for facilities")
        target = {"planning": PlanningConfig, "bounds": CapacityBounds,
                  "solver": SolverSettings}.get(section)
        key = _field_name(target, parts[1]) if target else parts[1].lower()
        doc.setdefault(section, {})[key] = value
    return doc


def _field_name(cls, key: str) -> str:
    names = {f.name.lower(): f.name for f in fields(cls)}
    try:
        return names[key.lower()]
    except KeyError:
        raise ConfigError(f"unknown {cls.__name__} field {key!r}") from None


def config_from_dict(doc: dict) -> StudyConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    try:
        plan_doc = dict(doc.get("planning", {}))
        if "bounds" in plan_doc:
            raise ConfigError("capacity bounds belong in the top-level 'bounds' section")
        bounds = CapacityBounds(**doc.get("bounds", {}))
        planning = PlanningConfig.from_dict({**plan_doc, "bounds": asdict(bounds)})
        facs = default_facilities()
        for entry in doc.get("facilities", []):
            entry = dict(entry)
            fid = entry.pop("id", None)
            if fid not in facs:
                raise ConfigError(f"unknown facility id {fid!r}")
            base = asdict(facs[fid])
            bad = set(entry) - set(base)
            if bad:
                raise ConfigError(f"facility {fid}: unknown fields {sorted(bad)}")
            base.update(entry)
            facs[fid] = FacilityParams(**base)
        solver = SolverSettings(**doc.get("solver", {}))
    except TypeError as exc:
        raise ConfigError(f"bad config value: {exc}") from None
    planning.validate()
    for f in facs.values():
        f.validate()
    solver.validate()
    return StudyConfig(planning, facs, solver, dict(doc.get("igdt", {})),
                       dict(doc.get("posteriori", {})), doc)


def load_config(path: str | Path | None, environ=None) -> StudyConfig:
    """Read a config file (or start from defaults when ``path`` is None) and apply env overrides."""
    doc = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return config_from_dict(apply_env_overrides(doc, environ))


def _reader(path, header):
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    lines = (ln for ln in fh if not ln.startswith("#"))
    reader = csv.reader(lines)
    got = next(reader, None)
    if got is None:
        fh.close()
        raise DataError(f"{path} is empty")
    got = [c.strip() for c in got]
    for c in got:
        if c not in header:
            fh.close()
            raise DataError(f"{path}: unexpected column {c!r} (expected {','.join(header)})")
    for c in header:
        if c not in got:
            fh.close()
            raise DataError(f"{path}: missing column {c!r}")
    return fh, reader, [got.index(c) for c in header]


def read_profile(path: str | Path, dt: float = 1.0) -> RenewableProfile:
    fh, reader, idx = _reader(path, PROFILE_HEADER)
    t, w, s = [], [], []
    with fh:
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                t.append(int(row[idx[0]]))
                w.append(float(row[idx[1]]))
                s.append(float(row[idx[2]]))
            except (ValueError, IndexError):
                raise DataError(f"{path}:{line_no}: malformed profile row") from None
    if not t:
        raise DataError(f"{path}: no profile rows")
    if t != list(range(len(t))):
        raise DataError(f"{path}: column 't' must count 0, 1, 2, ...")
    try:
        return RenewableProfile(np.array(w), np.array(s), dt)
    except ConfigError as exc:
        raise DataError(f"{path}: {exc}") from None


def _writer(path, header, comment):
    fh = open(path, "w", newline="")
    if comment:
        fh.write(f"# {comment}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    return fh, w


def write_profile(prof: RenewableProfile, path: str | Path, comment: str | None = None) -> None:
    fh, w = _writer(path, PROFILE_HEADER, comment)
    with fh:
        for t, (a, b) in enumerate(zip(prof.p_w_sta, prof.p_s_sta)):
            w.writerow([t, repr(float(a)), repr(float(b))])


def write_schedules(plan: PlanResult, path: str | Path, comment: str | None = None) -> None:
    """One row per step; ``n_HS`` and ``ESOC`` are the levels at the start of the step."""
    s = plan.schedules
    N = s["P_W"].size
    fh, w = _writer(path, SCHEDULE_HEADER, comment)
    with fh:
        for t in range(N):
            w.writerow([t] + [repr(float(s[k][t])) for k in SCHEDULE_HEADER[1:]])


def read_csv_header(path: str | Path) -> list[str]:
    with open(path, newline="") as fh:
        for line in fh:
            if not line.startswith("#"):
                return next(csv.reader([line]))
    return []


def plan_document(plan: PlanResult, manifest_hash: str | None = None,
                  include_vector: bool = True) -> dict:
    doc = plan.to_dict()
    if manifest_hash is not None:
        doc["manifest_hash"] = manifest_hash
    if include_vector and plan.vector is not None:
        doc["vector"] = [float(v) for v in plan.vector]
    return doc


def write_json(doc: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def read_plan(path: str | Path) -> tuple[PlanResult, dict]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read plan {path}: {exc}") from None
    plan = PlanResult.from_dict(doc)
    if "vector" in doc:
        plan.vector = np.array(doc["vector"], dtype=float)
    return plan, doc
