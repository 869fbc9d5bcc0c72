"""Experiment configuration: JSON documents checked against :data:`SCHEMA`.

A minimal config::

    {
      "task": "pade_row",
      "series": {"kind": "rational", "poles": [[1, 1, 1]]},
      "n": {"start": 2, "stop": 10},
      "m": 1
    }

Series declarations are catalog entries (``rational``, ``log_branch``,
``binomial``, ``exp``), coefficient files (``{"kind": "file", "path": ...}``,
relative to the config file) or sums (``{"kind": "sum", "terms": [...]}``),
each optionally scaled by ``"scale"``. Scalars are JSON numbers, strings
(``"1/3"``, ``"0.25"``) or ``[re, im]`` pairs. A pole entry is
``[a, order, coeffs]`` where ``coeffs`` is either the top-order coefficient or
a list of exactly ``order`` coefficients ``c_1..c_order``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

import jsonschema
import mpmath

from .poly import Polynomial
from .scalar import DEFAULT_DIGITS, MIN_DIGITS, Backend, QQi
from .series import (PowerSeries, SeriesSystem, add, catalog_binomial, catalog_entire, catalog_log_branch,
                     catalog_rational, read_coefficient_file, scale)

TASKS = ("pade_row", "hermite_pade_row", "incomplete_row", "diagnose", "conjecture_scan")


class ConfigError(ValueError):
    """Unreadable or schema-invalid configuration, or a missing referenced file (exit 2)."""


class PreconditionError(ValueError):
    """Configuration parses but violates a task precondition (exit 3)."""


_scalar = {"oneOf": [{"type": "number"}, {"type": "string"},
                     {"type": "array", "items": {"type": ["number", "string"]}, "minItems": 2, "maxItems": 2}]}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["task", "n"],
    "additionalProperties": False,
    "$defs": {
        "scalar": _scalar,
        "series": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["rational", "log_branch", "binomial", "exp", "file", "sum"]},
                "poles": {"type": "array", "items": {"type": "array", "minItems": 3, "maxItems": 3}},
                "poly": {"type": "array", "items": {"$ref": "#/$defs/scalar"}},
                "a": {"$ref": "#/$defs/scalar"},
                "alpha": {"type": ["number", "string"]},
                "c": {"$ref": "#/$defs/scalar"},
                "path": {"type": "string"},
                "terms": {"type": "array", "items": {"$ref": "#/$defs/series"}, "minItems": 1},
                "scale": {"$ref": "#/$defs/scalar"},
                "name": {"type": "string"},
            },
            "additionalProperties": False,
        },
    },
    "properties": {
        "task": {"enum": list(TASKS)},
        "series": {"$ref": "#/$defs/series"},
        "system": {"type": "array", "items": {"$ref": "#/$defs/series"}, "minItems": 1},
        "n": {"type": "object", "required": ["start", "stop"], "additionalProperties": False,
              "properties": {"start": {"type": "integer", "minimum": 0},
                             "stop": {"type": "integer", "minimum": 0},
                             "step": {"type": "integer", "minimum": 1}}},
        "m": {"type": "integer", "minimum": 0},
        "m_star": {"type": "integer", "minimum": 1},
        "multi_index": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "strategy": {"type": "object", "required": ["kind"], "additionalProperties": False,
                     "properties": {"kind": {"enum": ["pade_row", "hp_component"]},
                                    "j": {"type": "integer", "minimum": 1},
                                    "k": {"type": "integer", "minimum": 1},
                                    "cancel": {"type": "boolean"}}},
        "precision": {"type": "integer", "minimum": MIN_DIGITS},
        "backend": {"enum": ["exact", "float"]},
        "output": {"type": "string"},
        "knobs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "window": {"type": ["integer", "null"], "minimum": 2},
                "margin": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "match_factor": {"type": "number", "exclusiveMinimum": 0},
                "attract_tol": {"type": "number", "exclusiveMinimum": 0},
                "delta": {"type": "number", "exclusiveMinimum": 0},
                "K_radius": {"type": "number", "exclusiveMinimum": 0},
                "K_kind": {"enum": ["circle", "disk"]},
                "grid": {"type": "integer", "minimum": 2},
                "N": {"type": "integer", "minimum": 4},
                "R_star": {"oneOf": [{"type": "number", "exclusiveMinimum": 0},
                                     {"enum": ["estimate", "metadata"]}]},
                "Q_limit_roots": {"type": "array", "items": {"$ref": "#/$defs/scalar"}},
                "sup_radius": {"type": "number", "exclusiveMinimum": 0},
                "workers": {"type": "integer", "minimum": 1},
            },
        },
    },
}

DEFAULT_KNOBS = {"window": None, "margin": 0.05, "match_factor": 0.25, "attract_tol": 1e-2, "delta": None,
                 "K_radius": None, "K_kind": "circle", "grid": 41, "N": 60, "R_star": "estimate",
                 "Q_limit_roots": None, "sup_radius": None, "workers": 1}


def parse_scalar(x, backend: Backend):
    """JSON scalar -> backend scalar. Floats are read through their decimal text."""
    if isinstance(x, list):
        re, im = (_fraction(v) for v in x)
    else:
        re, im = _fraction(x), Fraction(0)
    if backend == Backend.EXACT:
        return QQi(re, im)
    return mpmath.mpc(mpmath.mpf(re.numerator) / re.denominator, mpmath.mpf(im.numerator) / im.denominator)


def _fraction(v) -> Fraction:
    if isinstance(v, bool):
        raise ConfigError("booleans are not scalars")
    try:
        return Fraction(str(v)) if isinstance(v, float) else Fraction(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad scalar {v!r}: {exc}") from None


@dataclass(frozen=True)
class ExperimentConfig:
    task: str
    ns: tuple
    backend: Backend = Backend.EXACT
    precision: int = DEFAULT_DIGITS
    series: dict | None = None
    system: tuple | None = None
    m: int | None = None
    m_star: int | None = None
    multi_index: tuple | None = None
    strategy: dict | None = None
    output: str = "out"
    knobs: dict = field(default_factory=lambda: dict(DEFAULT_KNOBS))
    base_dir: Path = Path(".")

    def with_overrides(self, precision: int | None = None, backend: str | None = None,
                       output: str | None = None) -> "ExperimentConfig":
        out = self
        if precision is not None:
            if precision < MIN_DIGITS:
                raise PreconditionError(f"precision must be >= {MIN_DIGITS}")
            out = replace(out, precision=precision)
        if backend is not None:
            out = replace(out, backend=Backend(backend))
        if output is not None:
            out = replace(out, output=output)
        return out

    # -- series construction ------------------------------------------------
    def build_series(self, decl: dict | None = None) -> PowerSeries:
        decl = self.series if decl is None else decl
        if decl is None:
            raise PreconditionError(f"task {self.task} needs a 'series' declaration")
        return _build(decl, self.backend, self.base_dir)

    def build_system(self) -> SeriesSystem:
        if not self.system:
            raise PreconditionError(f"task {self.task} needs a 'system' declaration")
        comps = [_build(d, self.backend, self.base_dir) for d in self.system]
        mi = self.multi_index or tuple(1 for _ in comps)
        try:
            return SeriesSystem(tuple(comps), tuple(mi))
        except ValueError as exc:
            raise PreconditionError(str(exc)) from None


def _build(decl: dict, backend: Backend, base: Path) -> PowerSeries:
    kind = decl["kind"]
    if kind == "rational":
        poles = []
        for a, order, cs in decl.get("poles", []):
            if not isinstance(order, int) or order < 1:
                raise ConfigError(f"pole order must be a positive integer, got {order!r}")
            # a list of length ``order`` is (c_1, ..., c_order); anything else is the top coefficient
            if isinstance(cs, list) and len(cs) == order:
                cs = [parse_scalar(c, backend) for c in cs]
            else:
                cs = parse_scalar(cs, backend)
            poles.append((parse_scalar(a, backend), order, cs))
        poly = Polynomial(tuple(parse_scalar(c, backend) for c in decl.get("poly", [])), backend)
        f = catalog_rational(poles, poly, backend, name=decl.get("name", ""))
    elif kind == "log_branch":
        f = catalog_log_branch(parse_scalar(_req(decl, "a"), backend), backend)
    elif kind == "binomial":
        f = catalog_binomial(parse_scalar(_req(decl, "a"), backend), _fraction(_req(decl, "alpha")), backend)
    elif kind == "exp":
        f = catalog_entire(parse_scalar(decl.get("c", 1), backend), backend)
    elif kind == "file":
        path = Path(_req(decl, "path"))
        if not path.is_absolute():
            path = base / path
        if not path.is_file():
            raise ConfigError(f"coefficient file not found: {path}")
        try:
            f = read_coefficient_file(path, backend)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    else:  # sum
        parts = [_build(t, backend, base) for t in decl["terms"]]
        f = parts[0]
        for g in parts[1:]:
            f = add(f, g)
    if "scale" in decl:
        f = scale(parse_scalar(decl["scale"], backend), f)
    return f


def _req(decl: dict, key: str):
    if key not in decl:
        raise ConfigError(f"series kind {decl['kind']!r} needs {key!r}")
    return decl[key]


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    return config_from_dict(doc, path.parent)


def config_from_dict(doc: dict, base_dir: Path | str = ".") -> ExperimentConfig:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from None
    n = doc["n"]
    ns = tuple(range(n["start"], n["stop"] + 1, n.get("step", 1)))
    if not ns:
        raise ConfigError("n range is empty")
    knobs = dict(DEFAULT_KNOBS)
    knobs.update(doc.get("knobs", {}))
    cfg = ExperimentConfig(
        task=doc["task"], ns=ns, backend=Backend(doc.get("backend", "exact")),
        precision=doc.get("precision", DEFAULT_DIGITS), series=doc.get("series"),
        system=tuple(doc["system"]) if "system" in doc else None, m=doc.get("m"), m_star=doc.get("m_star"),
        multi_index=tuple(doc["multi_index"]) if "multi_index" in doc else None, strategy=doc.get("strategy"),
        output=doc.get("output", "out"), knobs=knobs, base_dir=Path(base_dir))
    _check_files(cfg)
    return cfg


def _check_files(cfg: ExperimentConfig) -> None:
    decls = ([cfg.series] if cfg.series else []) + list(cfg.system or ())
    stack = list(decls)
    while stack:
        d = stack.pop()
        if d["kind"] == "sum":
            stack.extend(d["terms"])
        elif d["kind"] == "file":
            p = Path(d["path"])
            p = p if p.is_absolute() else cfg.base_dir / p
            if not p.is_file():
                raise ConfigError(f"coefficient file not found: {p}")
