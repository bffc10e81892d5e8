"""
Scenario configuration: JSON file + dotted ``key=value`` overrides.

Physical quantities use rad/s, s, cm, torr and degrees Celsius. Every key
has a default, so an empty file (or no file) is a valid scenario.
"""

import copy
import json
from dataclasses import dataclass, fields as dc_fields
from pathlib import Path

from .atoms import EXCITED_SPLITTING, GROUND_SPLITTING, build_d1_16level, build_lambda3
from .lindblad import ConfigError, FieldConfig
from .trapping import PRESETS, CellConfig, preset, rabi_from_power

DEFAULTS = {
    "scheme": "lambda3",
    "cell": {"preset": "long-ne"},
    "d": None,
    "laser_power_mw": 9.0,
    "probe_ratio": 0.2,
    "radiation_trapping": True,
    "fields": {"omega_c": None, "omega_p": None, "omega_as": 0.0,
               "delta_one": 0.0, "delta_two": 0.0, "q_c": 1, "q_p": 1, "q_as": 1},
    "spectrum": {"n_points": 201, "span": 20.0, "n_slices": 64, "method": "full",
                 "seed_ratio": 1.0},
    "pulse": {"n_points": 4096, "center": 0.25, "width": 0.06},
    "storage": {"tau": 4e-4, "n_iter": 20, "tol": 1e-3},
    "sweep": {"axis": "d", "values": [5.0, 10.0, 20.0, 40.0, 80.0]},
    "prominence": 0.01,
    "workers": 1,
    "seed": 1,
    "out": "out",
}

_CELL_KEYS = {f.name for f in dc_fields(CellConfig)} | {"preset"}
_SWEEP_AXES = ("d", "intensity", "tau")

#: Rabi frequency of the control in the compressed (gamma = 1) problem.
DESK_OMEGA = 0.5


def _merge(base, extra, path=""):
    for k, v in extra.items():
        where = f"{path}{k}"
        if k not in base:
            if path.startswith("cell.") or path == "cell.":
                raise ConfigError(f"{where}: unknown cell parameter")
            raise ConfigError(f"{where}: unknown configuration key")
        if isinstance(base[k], dict) and k != "cell":
            if not isinstance(v, dict):
                raise ConfigError(f"{where}: expected an object")
            _merge(base[k], v, where + ".")
        elif k == "cell":
            if not isinstance(v, dict):
                raise ConfigError(f"{where}: expected an object")
            bad = set(v) - _CELL_KEYS
            if bad:
                raise ConfigError(f"cell.{sorted(bad)[0]}: unknown cell parameter")
            base[k].update(v)
        else:
            base[k] = v


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_override(cfg: dict, assignment: str) -> None:
    """Apply ``"a.b.c=value"``; value is parsed as JSON when possible."""
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not of the form key=value")
    key, text = assignment.split("=", 1)
    parts = key.strip().split(".")
    node = {}
    cur = node
    for p in parts[:-1]:
        cur = cur.setdefault(p, {})
    cur[parts[-1]] = _parse_value(text)
    _merge(cfg, node)


@dataclass
class ScenarioConfig:
    """A fully resolved scenario (all defaults materialized in ``data``)."""

    data: dict

    def __post_init__(self):
        self.validate()

    # -- validation -------------------------------------------------------
    def validate(self):
        c = self.data
        if c["scheme"] not in ("lambda3", "d1-16"):
            raise ConfigError(f"scheme: unknown scheme {c['scheme']!r}")
        name = c["cell"].get("preset")
        if name is not None and name not in PRESETS:
            raise ConfigError(f"cell.preset: unknown preset {name!r}; choose from {sorted(PRESETS)}")
        if c["d"] is not None and not (isinstance(c["d"], (int, float)) and c["d"] >= 0):
            raise ConfigError("d: optical depth must be a non-negative number")
        if not c["laser_power_mw"] > 0:
            raise ConfigError("laser_power_mw: must be positive")
        sw = c["sweep"]
        if sw["axis"] not in _SWEEP_AXES:
            raise ConfigError(f"sweep.axis: must be one of {_SWEEP_AXES}")
        if not isinstance(sw["values"], list) or not sw["values"]:
            raise ConfigError("sweep.values: must be a non-empty list")
        if c["spectrum"]["n_slices"] < 32:
            raise ConfigError("spectrum.n_slices: must be at least 32")
        if c["spectrum"]["n_points"] < 3:
            raise ConfigError("spectrum.n_points: must be at least 3")
        if c["spectrum"]["method"] not in ("full", "linear"):
            raise ConfigError("spectrum.method: must be 'full' or 'linear'")
        if c["storage"]["tau"] < 0:
            raise ConfigError("storage.tau: must be non-negative")
        if int(c["storage"]["n_iter"]) < 1:
            raise ConfigError("storage.n_iter: must be >= 1")
        if not 0 <= c["probe_ratio"] <= 1:
            raise ConfigError("probe_ratio: must lie in [0, 1]")
        if not 0 < c["prominence"] < 1:
            raise ConfigError("prominence: must lie in (0, 1)")
        if int(c["workers"]) < 1:
            raise ConfigError("workers: must be >= 1")
        try:
            self.cell
            self.fields
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    # -- derived objects --------------------------------------------------
    @property
    def cell(self) -> CellConfig:
        spec = dict(self.data["cell"])
        name = spec.pop("preset", None)
        cell = preset(name, **spec) if name else CellConfig(**spec)
        if self.data["d"] is not None:
            cell = cell.with_optical_depth(float(self.data["d"]))
        return cell

    @property
    def omega_c(self) -> float:
        oc = self.data["fields"]["omega_c"]
        if oc is None:
            c = self.cell
            return rabi_from_power(self.data["laser_power_mw"], c.beam_diameter, c.gamma_nat)
        return float(oc)

    @property
    def fields(self) -> FieldConfig:
        f = dict(self.data["fields"])
        f["omega_c"] = self.omega_c
        if f["omega_p"] is None:
            f["omega_p"] = float(self.data["probe_ratio"]) * f["omega_c"]
        return FieldConfig(**f)

    def scheme(self, rate_scale: float = 1.0):
        """The level scheme with splittings divided by ``rate_scale``."""
        if self.data["scheme"] == "lambda3":
            return build_lambda3(GROUND_SPLITTING / rate_scale)
        return build_d1_16level(GROUND_SPLITTING / rate_scale, EXCITED_SPLITTING / rate_scale)

    def resolved(self) -> dict:
        out = copy.deepcopy(self.data)
        out["resolved"] = {"cell": self.cell.to_dict(), "fields": self.fields,
                           "relaxation": self.cell.relaxation(self.omega_c,
                                                              self.data["radiation_trapping"])}
        return out


def load_config(path=None, overrides=()) -> ScenarioConfig:
    """Defaults, then the JSON file at ``path``, then ``overrides``."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        try:
            user = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(user, dict):
            raise ConfigError(f"{path}: top level must be an object")
        _merge(cfg, user)
    for item in overrides:
        apply_override(cfg, item)
    return ScenarioConfig(cfg)
