"""Run configuration: a JSON document with geometry, dynamics, crossover,
oracle and output sections.  Every key has a default; unknown keys are
rejected with their dotted location."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .geometry import DEFAULT_GEOMETRY, GeometryError, QubitGeometry

DEFAULTS = {
    "geometry": DEFAULT_GEOMETRY.to_dict(),
    "dynamics": {"p": 0.8, "tau": 0.035, "tau_list": [], "t_max": 400.0, "n_points": 4000},
    "crossover": {"bracket": [0.005, 0.2], "t_stationary": 400.0},
    "oracle": {
        "n_theta": 181, "n_phi": 361, "refine_tol": 1e-9,
        "n_states": 1000, "n_identity": 10000, "seed": 0,
    },
    "output": {"format": "csv", "path": None, "emit_plot": False},
}

PRESETS = ("fig2", "fig2a", "fig2b", "fig2c", "fig3")


class ConfigError(ValueError):
    pass


def _merge(base, update, where=""):
    for key, value in update.items():
        loc = f"{where}.{key}" if where else key
        if key not in base:
            raise ConfigError(f"unknown configuration key '{loc}'")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"'{loc}' must be a section (object)")
            _merge(base[key], value, loc)
        else:
            base[key] = value
    return base


def _number(doc, section, key, kind=float, lo=None, hi=None, lo_open=False):
    loc = f"{section}.{key}"
    v = doc[section][key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"'{loc}' must be a number, got {v!r}")
    if kind is int and int(v) != v:
        raise ConfigError(f"'{loc}' must be an integer, got {v!r}")
    v = kind(v)
    if lo is not None and (v < lo or (lo_open and v == lo)):
        raise ConfigError(f"'{loc}' = {v!r} is below its allowed range")
    if hi is not None and v > hi:
        raise ConfigError(f"'{loc}' = {v!r} is above its allowed range")
    return v


@dataclass
class RunConfig:
    geometry: QubitGeometry = DEFAULT_GEOMETRY
    p: float = 0.8
    tau: float = 0.035
    tau_list: list = field(default_factory=list)
    t_max: float = 400.0
    n_points: int = 4000
    bracket: tuple = (0.005, 0.2)
    t_stationary: float = 400.0
    n_theta: int = 181
    n_phi: int = 361
    refine_tol: float = 1e-9
    n_states: int = 1000
    n_identity: int = 10000
    seed: int = 0
    format: str = "csv"
    path: str | None = None
    emit_plot: bool = False

    @classmethod
    def from_dict(cls, doc):
        """Validate a (possibly partial) configuration document."""
        if not isinstance(doc, dict):
            raise ConfigError("configuration must be a JSON object")
        full = _merge(copy.deepcopy(DEFAULTS), doc)
        try:
            geom = QubitGeometry(**full["geometry"])
        except (GeometryError, TypeError) as exc:
            raise ConfigError(f"geometry: {exc}") from exc
        tau_list = full["dynamics"]["tau_list"]
        if not isinstance(tau_list, list):
            raise ConfigError("'dynamics.tau_list' must be a list")
        for i, x in enumerate(tau_list):
            if isinstance(x, bool) or not isinstance(x, (int, float)) or x < 0:
                raise ConfigError(f"'dynamics.tau_list[{i}]' must be a number >= 0")
        bracket = full["crossover"]["bracket"]
        if (not isinstance(bracket, list) or len(bracket) != 2
                or not all(isinstance(x, (int, float)) for x in bracket)
                or not 0 <= bracket[0] < bracket[1]):
            raise ConfigError("'crossover.bracket' must be [lo, hi] with 0 <= lo < hi")
        fmt = full["output"]["format"]
        if fmt not in ("csv", "report"):
            raise ConfigError(f"'output.format' must be 'csv' or 'report', got {fmt!r}")
        path = full["output"]["path"]
        if path is not None and not isinstance(path, str):
            raise ConfigError("'output.path' must be a string or null")
        if not isinstance(full["output"]["emit_plot"], bool):
            raise ConfigError("'output.emit_plot' must be true or false")
        return cls(
            geometry=geom,
            p=_number(full, "dynamics", "p", lo=0.0, hi=1.0),
            tau=_number(full, "dynamics", "tau", lo=0.0),
            tau_list=[float(x) for x in tau_list],
            t_max=_number(full, "dynamics", "t_max", lo=0.0, lo_open=True),
            n_points=_number(full, "dynamics", "n_points", int, lo=2),
            bracket=(float(bracket[0]), float(bracket[1])),
            t_stationary=_number(full, "crossover", "t_stationary", lo=0.0, lo_open=True),
            n_theta=_number(full, "oracle", "n_theta", int, lo=61),
            n_phi=_number(full, "oracle", "n_phi", int, lo=121),
            refine_tol=_number(full, "oracle", "refine_tol", lo=0.0, lo_open=True),
            n_states=_number(full, "oracle", "n_states", int, lo=1),
            n_identity=_number(full, "oracle", "n_identity", int, lo=1),
            seed=_number(full, "oracle", "seed", int, lo=0),
            format=fmt,
            path=path,
            emit_plot=full["output"]["emit_plot"],
        )

    def to_dict(self):
        return {
            "geometry": self.geometry.to_dict(),
            "dynamics": {
                "p": self.p, "tau": self.tau, "tau_list": list(self.tau_list),
                "t_max": self.t_max, "n_points": self.n_points,
            },
            "crossover": {"bracket": list(self.bracket), "t_stationary": self.t_stationary},
            "oracle": {
                "n_theta": self.n_theta, "n_phi": self.n_phi, "refine_tol": self.refine_tol,
                "n_states": self.n_states, "n_identity": self.n_identity, "seed": self.seed,
            },
            "output": {"format": self.format, "path": self.path, "emit_plot": self.emit_plot},
        }

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def load_document(source):
    """Read a config file, or a shipped preset by name (``fig2a`` ...)."""
    if source in PRESETS:
        text = resources.files("pointerbasis.presets").joinpath(f"{source}.json").read_text()
        where = f"preset {source}"
    else:
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {source!r}: {exc.strerror}") from exc
        where = str(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{where}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_config(source=None, overrides=None) -> RunConfig:
    doc = load_document(source) if source else {}
    if overrides:
        doc = copy.deepcopy(doc)
        for section, values in overrides.items():
            doc.setdefault(section, {})
            if not isinstance(doc[section], dict):
                raise ConfigError(f"'{section}' must be a section (object)")
            doc[section].update(values)
    return RunConfig.from_dict(doc)
