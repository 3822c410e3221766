"""Experiment configuration: JSON schema, validation with field paths, and
the bundled paper-experiment configs.

A config names one experiment end to end: model, grid, initial datum (or
scan/limit-check parameters), solver settings and diagnostics settings.
Complex numbers are [re, im] pairs. load_config validates every referenced
domain invariant up front and reports the offending field path.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .core import ModelSpec, PeriodicGrid, make_grid
from .mae import CauchyData, EnvelopeSpec

__all__ = ["ExperimentConfig", "ConfigError", "load_config", "bundled_config_path"]


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.field_path = path
        super().__init__(f"{path}: {message}")


def _get(d: dict, path: str, key: str, typ, default=None, required=False):
    if key not in d:
        if required:
            raise ConfigError(f"{path}.{key}", "missing required field")
        return default
    v = d[key]
    if typ is float and isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    if typ is int and isinstance(v, int) and not isinstance(v, bool):
        return v
    if typ is not None and not isinstance(v, typ):
        raise ConfigError(f"{path}.{key}", f"expected {typ}, got {type(v).__name__}")
    return v


def _complex(d, path, key, default=0.0 + 0.0j):
    if key not in d:
        return default
    v = d[key]
    if not (isinstance(v, list) and len(v) == 2):
        raise ConfigError(f"{path}.{key}", "complex values are [re, im] pairs")
    return complex(float(v[0]), float(v[1]))


def _times(d, path):
    """Output schedule: either {"times": [...]} or {"start","stop","step"}."""
    if d is None:
        return ()
    if "times" in d:
        return tuple(float(t) for t in d["times"])
    start = _get(d, path, "start", float, required=True)
    stop = _get(d, path, "stop", float, required=True)
    step = _get(d, path, "step", float, required=True)
    if step <= 0:
        raise ConfigError(f"{path}.step", "must be positive")
    n = int(round((stop - start) / step))
    return tuple(round(start + i * step, 12) for i in range(n + 1))


@dataclass
class ExperimentConfig:
    name: str
    output_dir: str
    raw: dict = field(repr=False)
    model: ModelSpec | None = None
    grid: PeriodicGrid | None = None
    initial_type: str | None = None  # planar | radial | doubly_periodic
    data: CauchyData | None = None
    dp_epsilon: float | None = None
    dt: float = 1e-3
    t_end: float | None = None
    output_times: tuple = ()
    conservation_cadence: int = 100
    dealias: bool = False
    threshold: float = 1.5
    compare_times: tuple = ()
    isosurface_level: float = 2.2
    scan: dict | None = None
    limit_check: dict | None = None

    def config_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.raw, sort_keys=True).encode()
        ).hexdigest()

    def canonical(self) -> dict:
        return json.loads(json.dumps(self.raw, sort_keys=True))

    def build_initial_field(self):
        from .initialdata import build_doubly_periodic, build_planar, build_radial

        if self.initial_type == "planar":
            return build_planar(self.data, self.grid)
        if self.initial_type == "radial":
            return build_radial(self.data, self.grid)
        if self.initial_type == "doubly_periodic":
            kx = 2 * np.pi / self.grid.lengths[0]
            ky = 2 * np.pi / self.grid.lengths[1]
            return build_doubly_periodic(self.dp_epsilon, kx, ky, self.grid)
        raise ConfigError("initial.type", f"cannot build {self.initial_type!r}")


def _parse_envelope(d: dict, path: str) -> EnvelopeSpec:
    family = _get(d, path, "family", str, required=True)
    kwargs = {}
    for key, typ in (
        ("gamma", float),
        ("L_Y", float),
        ("d", float),
        ("y_m", float),
    ):
        if key in d:
            kwargs[key] = _get(d, path, key, typ)
    for key in ("samples_s", "samples_f", "samples_g"):
        if key in d and d[key] is not None:
            kwargs[key] = tuple(float(v) for v in d[key])
    try:
        return EnvelopeSpec(family=family, **kwargs)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def parse_config(doc: dict, name_hint: str = "config") -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("$", "top level must be a JSON object")
    name = _get(doc, "$", "name", str, default=name_hint)
    out_dir = _get(doc, "$", "output_dir", str, default="out/" + name)
    cfg = ExperimentConfig(name=name, output_dir=out_dir, raw=doc)

    if "model" in doc:
        m = doc["model"]
        try:
            cfg.model = ModelSpec(
                dim=_get(m, "model", "dim", int, required=True),
                eta1=_get(m, "model", "eta1", int, default=-1),
                eta2=_get(m, "model", "eta2", int, default=-1),
            )
        except ValueError as exc:
            raise ConfigError("model", str(exc)) from exc

    if "grid" in doc:
        g = doc["grid"]
        lengths = _get(g, "grid", "lengths", list, required=True)
        counts = _get(g, "grid", "counts", list, required=True)
        try:
            cfg.grid = make_grid(lengths, counts)
        except ValueError as exc:
            raise ConfigError("grid", str(exc)) from exc
        if cfg.model is not None and cfg.grid.dim != cfg.model.dim:
            raise ConfigError("grid.lengths", f"grid dim {cfg.grid.dim} != model dim {cfg.model.dim}")

    if "initial" in doc:
        ini = doc["initial"]
        p = "initial"
        cfg.initial_type = _get(ini, p, "type", str, default="planar")
        if cfg.initial_type not in ("planar", "radial", "doubly_periodic"):
            raise ConfigError("initial.type", f"unknown type {cfg.initial_type!r}")
        needed_dim = {"planar": 2, "radial": 3, "doubly_periodic": 2}[cfg.initial_type]
        if cfg.grid is not None and cfg.grid.dim != needed_dim:
            raise ConfigError(
                "initial.type",
                f"{cfg.initial_type} datum needs a {needed_dim}-axis grid, "
                f"got {cfg.grid.dim}",
            )
        eps = _get(ini, p, "epsilon", float, required=True)
        if eps < 0:
            raise ConfigError("initial.epsilon", f"must be >= 0, got {eps}")
        if cfg.initial_type == "doubly_periodic":
            cfg.dp_epsilon = eps
        else:
            delta = _get(ini, p, "delta", float, required=True)
            if delta <= 0:
                raise ConfigError("initial.delta", f"must be positive, got {delta}")
            if cfg.grid is None:
                raise ConfigError("grid", "initial datum requires a grid")
            Lx = cfg.grid.lengths[0]
            if not np.pi < Lx < 2 * np.pi:
                raise ConfigError(
                    "grid.lengths",
                    f"Lx={Lx} outside (pi, 2*pi): single-mode experiments need "
                    "exactly one unstable mode",
                )
            envelope = _parse_envelope(
                _get(ini, p, "envelope", dict, required=True), "initial.envelope"
            )
            stable = []
            for i, sm in enumerate(_get(ini, p, "stable_modes", list, default=[])):
                sp = f"initial.stable_modes[{i}]"
                stable.append(
                    (
                        _get(sm, sp, "n", int, required=True),
                        _complex(sm, sp, "c_plus"),
                        _complex(sm, sp, "c_minus"),
                    )
                )
            try:
                cfg.data = CauchyData(
                    epsilon=eps,
                    delta=delta,
                    Lx=Lx,
                    c0_plus=_complex(ini, p, "c0_plus"),
                    c0_minus=_complex(ini, p, "c0_minus"),
                    envelope=envelope,
                    stable_modes=tuple(stable),
                    kind="radial" if cfg.initial_type == "radial" else "planar",
                    slow_halfwidth=_get(ini, p, "slow_halfwidth", float),
                )
            except ValueError as exc:
                raise ConfigError("initial", str(exc)) from exc

    if "solver" in doc:
        s = doc["solver"]
        cfg.dt = _get(s, "solver", "dt", float, default=1e-3)
        if cfg.dt <= 0:
            raise ConfigError("solver.dt", "must be positive")
        cfg.t_end = _get(s, "solver", "t_end", float)
        if cfg.t_end is not None and cfg.t_end <= 0:
            raise ConfigError("solver.t_end", "must be positive")
        cfg.output_times = _times(s.get("output"), "solver.output")
        if any(np.diff(cfg.output_times) <= 0):
            raise ConfigError("solver.output", "output times must be increasing")
        if cfg.t_end is not None and cfg.output_times and cfg.output_times[-1] > cfg.t_end + 1e-12:
            raise ConfigError("solver.output", "output times exceed t_end")
        cfg.conservation_cadence = _get(s, "solver", "conservation_cadence", int, default=100)
        cfg.dealias = bool(s.get("dealias", False))

    if "diagnostics" in doc:
        dd = doc["diagnostics"]
        cfg.threshold = _get(dd, "diagnostics", "threshold", float, default=1.5)
        if cfg.threshold <= 1.0:
            raise ConfigError("diagnostics.threshold", "must exceed the background 1")
        cfg.compare_times = _times(dd.get("compare"), "diagnostics.compare")
        cfg.isosurface_level = _get(dd, "diagnostics", "isosurface_level", float, default=2.2)

    if "scan" in doc:
        sc = doc["scan"]
        pts = _get(sc, "scan", "points", list, required=True)
        for i, pt in enumerate(pts):
            if not ("Lx" in pt and "Ly" in pt):
                raise ConfigError(f"scan.points[{i}]", "needs Lx and Ly")
        cfg.scan = {
            "points": [(float(pt["Lx"]), float(pt["Ly"])) for pt in pts],
            "epsilon": _get(sc, "scan", "epsilon", float, default=1e-2),
            "t_max": _get(sc, "scan", "t_max", float, default=8.0),
            "dt": _get(sc, "scan", "dt", float, default=1e-3),
            "counts": tuple(_get(sc, "scan", "counts", list, default=[32, 32])),
            "cadence": _get(sc, "scan", "cadence", float, default=0.05),
            "threshold": _get(sc, "scan", "threshold", float, default=1.5),
        }

    if "limit_check" in doc:
        lc = doc["limit_check"]
        offsets = _get(lc, "limit_check", "phi_offsets", list, default=[0.3, 0.1, 0.03, 0.01])
        if any(o <= 0 or o >= np.pi / 2 for o in offsets):
            raise ConfigError("limit_check.phi_offsets", "offsets must lie in (0, pi/2)")
        cfg.limit_check = {
            "phi_offsets": [float(o) for o in offsets],
            "x_half": _get(lc, "limit_check", "x_half", float, default=1.0),
            "t_half": _get(lc, "limit_check", "t_half", float, default=1.0),
            "n": _get(lc, "limit_check", "n", int, default=201),
        }

    return cfg


def bundled_config_path(name: str) -> Path:
    """Path of a config shipped with the package (fig1.json, fig2.json, ...)."""
    base = resources.files("q1dnls") / "configs" / name
    with resources.as_file(base) as p:
        return Path(p)


def load_config(path) -> ExperimentConfig:
    """Parse and validate an experiment config; bundled names resolve when
    the path itself does not exist."""
    p = Path(path)
    if not p.exists():
        candidate = bundled_config_path(p.name)
        if candidate.exists():
            p = candidate
        else:
            raise FileNotFoundError(f"config file not found: {path}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON: {exc}") from exc
    return parse_config(doc, name_hint=p.stem)
