"""Strict scenario configuration (INI-style key = value with sections).

Unknown sections or keys are rejected by name so a typo can never be
silently ignored in a scientific run.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .errors import ConfigError

SCENARIOS = (
    "analyze",
    "conformal",
    "theta-sweep",
    "probe-schauder",
    "probe-heinz",
    "bernstein",
    "verify-all",
)

FAMILIES = ("plane", "holomorphic", "scherk", "custom")

FORMATS = ("csv", "json", "svg")

_ALLOWED_KEYS = {
    "run": {"scenario"},
    "surface": {"family", "params", "heights", "radius"},
    "numeric": {
        "modes",
        "grid",
        "tol",
        "seed",
        "radii",
        "samples",
        "point",
        "c1",
        "c2",
        "omega",
        "omega_coeff",
        "theta",
    },
    "output": {"directory", "formats"},
}


@dataclass
class ScenarioConfig:
    scenario: str
    family: str = ""
    params: list = field(default_factory=list)
    heights: list = field(default_factory=list)
    radius: float = 1.0
    modes: int = 32
    grid: tuple = (64, 256)
    tol: float = 1e-3
    seed: int = 0
    radii: list = field(default_factory=lambda: [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0])
    samples: int = 1000
    point: tuple = (0.0, 0.0)
    c1: float = 2.0
    c2: float = 2.0
    omega: float = 1.0
    omega_coeff: float = 1.0
    theta: float = 8.0
    directory: str = "."
    formats: tuple = ("csv", "json", "svg")

    def surface_descriptor(self) -> dict:
        if self.family == "custom":
            return {"kind": "custom", "params": list(self.heights)}
        return {"kind": self.family, "params": list(self.params)}


def _parse_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from exc


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from exc


def _parse_complex_list(raw: str) -> list:
    out = []
    for tok in raw.replace(",", " ").split():
        try:
            out.append(complex(tok))
        except ValueError as exc:
            raise ConfigError(f"[surface] params: bad coefficient {tok!r}") from exc
    return out


def parse_config(path) -> ScenarioConfig:
    """Parse and validate a scenario config file."""
    parser = configparser.ConfigParser(
        inline_comment_prefixes=("#", ";"), interpolation=None, strict=True
    )
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc

    for section in parser.sections():
        if section not in _ALLOWED_KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in _ALLOWED_KEYS[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")

    if "run" not in parser or "scenario" not in parser["run"]:
        raise ConfigError("missing required key 'scenario' in section [run]")
    scenario = parser["run"]["scenario"].strip()
    if scenario not in SCENARIOS:
        raise ConfigError(
            f"unknown scenario {scenario!r}; valid: {', '.join(SCENARIOS)}"
        )
    cfg = ScenarioConfig(scenario=scenario)

    if "surface" in parser:
        sec = parser["surface"]
        if "family" in sec:
            family = sec["family"].strip()
            if family not in FAMILIES:
                raise ConfigError(
                    f"[surface] family: unknown family {family!r}; valid: {', '.join(FAMILIES)}"
                )
            cfg.family = family
        if "radius" in sec:
            cfg.radius = _parse_float("surface", "radius", sec["radius"])
            if cfg.radius <= 0:
                raise ConfigError("[surface] radius must be positive")
        if "params" in sec:
            if cfg.family == "holomorphic":
                cfg.params = _parse_complex_list(sec["params"])
            else:
                cfg.params = [
                    _parse_float("surface", "params", tok)
                    for tok in sec["params"].replace(",", " ").split()
                ]
        if "heights" in sec:
            cfg.heights = [t.strip() for t in sec["heights"].split(";") if t.strip()]

    if "numeric" in parser:
        sec = parser["numeric"]
        if "modes" in sec:
            cfg.modes = _parse_int("numeric", "modes", sec["modes"])
            if cfg.modes < 8:
                raise ConfigError("[numeric] modes must be >= 8")
        if "grid" in sec:
            raw = sec["grid"].lower().replace("x", " ").split()
            if len(raw) != 2:
                raise ConfigError(f"[numeric] grid: expected 'NRxNT', got {sec['grid']!r}")
            n_r = _parse_int("numeric", "grid", raw[0])
            n_t = _parse_int("numeric", "grid", raw[1])
            if n_r < 4 or n_t < 16:
                raise ConfigError("[numeric] grid: need at least 4 radii and 16 angles")
            cfg.grid = (n_r, n_t)
        if "tol" in sec:
            cfg.tol = _parse_float("numeric", "tol", sec["tol"])
            if not cfg.tol > 0:
                raise ConfigError("[numeric] tol must be positive")
        if "seed" in sec:
            cfg.seed = _parse_int("numeric", "seed", sec["seed"])
        if "radii" in sec:
            cfg.radii = [
                _parse_float("numeric", "radii", tok)
                for tok in sec["radii"].replace(",", " ").split()
            ]
            if len(cfg.radii) < 4 or any(
                b <= a for a, b in zip(cfg.radii, cfg.radii[1:])
            ):
                raise ConfigError("[numeric] radii must be >= 4 strictly increasing values")
        if "samples" in sec:
            cfg.samples = _parse_int("numeric", "samples", sec["samples"])
            if cfg.samples < 1:
                raise ConfigError("[numeric] samples must be >= 1")
        if "point" in sec:
            toks = sec["point"].replace(",", " ").split()
            if len(toks) != 2:
                raise ConfigError(f"[numeric] point: expected 'u v', got {sec['point']!r}")
            cfg.point = (
                _parse_float("numeric", "point", toks[0]),
                _parse_float("numeric", "point", toks[1]),
            )
        for key in ("c1", "c2", "omega", "omega_coeff", "theta"):
            if key in sec:
                setattr(cfg, key, _parse_float("numeric", key, sec[key]))
        if cfg.c1 <= 0 or cfg.c2 <= 0:
            raise ConfigError("[numeric] c1 and c2 must be positive")
        if not (0.0 <= cfg.omega < 2.0):
            raise ConfigError("[numeric] omega must lie in [0, 2)")

    if "output" in parser:
        sec = parser["output"]
        if "directory" in sec:
            cfg.directory = sec["directory"].strip()
        if "formats" in sec:
            fmts = tuple(
                t.strip() for t in sec["formats"].replace(",", " ").split() if t.strip()
            )
            for f in fmts:
                if f not in FORMATS:
                    raise ConfigError(
                        f"[output] formats: unknown format {f!r}; valid: {', '.join(FORMATS)}"
                    )
            cfg.formats = fmts

    needs_surface = scenario in ("analyze", "conformal", "theta-sweep")
    if needs_surface and not cfg.family:
        raise ConfigError(f"scenario {scenario!r} requires a [surface] family")
    if cfg.family == "custom" and needs_surface and not cfg.heights:
        raise ConfigError("[surface] custom family requires 'heights' expressions")
    return cfg
