"""Experiment configuration: a flat sectioned key-value format.

Format::

    # comment
    [experiment]
    name = fkg
    dimension = 2
    distribution = exponential(1)
    replicas = 2000
    master_seed = 7

    [params]
    target = (20, 0)
    t_grid = 0.1, 0.2, 0.3

Keys are case-sensitive identifiers; values run to the end of the line
(a ``#`` starts a comment).  ``[experiment]`` holds the shared fields,
``[params]`` the experiment-specific ones, whose types come from the
experiment's parameter schema.  Errors carry the line and column.
"""
from __future__ import annotations

import hashlib
import json
import math
import re
from dataclasses import dataclass, field
from typing import Any

from ..intervals import IntervalSet, IntervalSyntaxError
from ..weights import DistributionSpec


class ConfigError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0, token: str | None = None):
        where = f"line {line}, column {column}: " if line else ""
        tok = f" (at {token!r})" if token is not None else ""
        super().__init__(f"{where}{message}{tok}")
        self.line, self.column, self.token = line, column, token


@dataclass(frozen=True)
class RawValue:
    text: str
    line: int
    column: int


_SECTION = re.compile(r"\[\s*([A-Za-z_][A-Za-z0-9_]*)\s*\]")
_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def parse_sections(text: str) -> dict[str, dict[str, RawValue]]:
    out: dict[str, dict[str, RawValue]] = {}
    cur: str | None = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        col0 = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            m = _SECTION.fullmatch(stripped)
            if not m:
                raise ConfigError("malformed section header", ln, col0, stripped)
            cur = m.group(1)
            if cur in out:
                raise ConfigError(f"duplicate section [{cur}]", ln, col0, stripped)
            out[cur] = {}
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", ln, col0, stripped)
        key_part, val_part = line.split("=", 1)
        key = key_part.strip()
        if not _KEY.fullmatch(key):
            raise ConfigError("invalid key", ln, col0, key)
        if cur is None:
            raise ConfigError("key outside any section", ln, col0, key)
        if key in out[cur]:
            raise ConfigError(f"duplicate key {key!r}", ln, col0, key)
        vcol = len(key_part) + 2 + (len(val_part) - len(val_part.lstrip()))
        val = val_part.strip()
        if not val:
            raise ConfigError(f"empty value for {key!r}", ln, vcol, key)
        out[cur][key] = RawValue(val, ln, vcol)
    return out


# ----------------------------------------------------------------- value types

def _fail(rv: RawValue, msg: str, offset: int = 0, token: str | None = None) -> ConfigError:
    return ConfigError(msg, rv.line, rv.column + offset, token if token is not None else rv.text)


def _int(rv: RawValue) -> int:
    try:
        return int(rv.text)
    except ValueError:
        raise _fail(rv, "expected an integer") from None


def _float(rv: RawValue) -> float:
    try:
        v = float(rv.text)
    except ValueError:
        raise _fail(rv, "expected a number") from None
    if math.isnan(v):
        raise _fail(rv, "NaN is not allowed")
    return v


def _list(rv: RawValue, conv) -> list:
    out = []
    pos = 0
    for part in rv.text.split(","):
        tok = part.strip()
        off = pos + (len(part) - len(part.lstrip()))
        pos += len(part) + 1
        try:
            out.append(conv(tok))
        except ValueError:
            raise _fail(rv, "bad list element", off, tok) from None
    return out


def _point(rv: RawValue) -> tuple:
    m = re.fullmatch(r"\(\s*(-?\d+(?:\s*,\s*-?\d+)+)\s*\)", rv.text)
    if not m:
        raise _fail(rv, "expected an integer point like (20, 0)")
    return tuple(int(c) for c in m.group(1).split(","))


def _interval(rv: RawValue) -> IntervalSet:
    try:
        return IntervalSet.parse(rv.text)
    except IntervalSyntaxError as exc:
        raise ConfigError(f"bad interval literal: {exc.message}", rv.line, rv.column + exc.column - 1,
                          exc.token) from None


def _intervals(rv: RawValue) -> list:
    # sets separated by ';', or the word none for an empty list
    if rv.text.strip().lower() == "none":
        return []
    out, pos = [], 0
    for part in rv.text.split(";"):
        off = pos + (len(part) - len(part.lstrip()))
        pos += len(part) + 1
        out.append(_interval(RawValue(part.strip(), rv.line, rv.column + off)))
    return out


def _dist(rv: RawValue) -> DistributionSpec:
    try:
        return DistributionSpec.parse(rv.text)
    except ValueError as exc:
        raise _fail(rv, str(exc)) from None


def _bool(rv: RawValue) -> bool:
    t = rv.text.lower()
    if t in ("true", "yes", "1"):
        return True
    if t in ("false", "no", "0"):
        return False
    raise _fail(rv, "expected true or false")


PARSERS = {
    "int": _int, "float": _float, "point": _point, "interval": _interval, "intervals": _intervals,
    "dist": _dist, "bool": _bool, "str": lambda rv: rv.text,
    "ints": lambda rv: _list(rv, int), "floats": lambda rv: _list(rv, float),
}


def to_jsonable(v: Any) -> Any:
    if isinstance(v, IntervalSet):
        return str(v)
    if isinstance(v, DistributionSpec):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


# ------------------------------------------------------------------- the config

@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    dimension: int
    distribution: DistributionSpec
    replicas: int
    master_seed: int
    padding: float = 1.0
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name, "dimension": self.dimension, "distribution": str(self.distribution),
            "replicas": self.replicas, "master_seed": self.master_seed, "padding": self.padding,
            "params": {k: to_jsonable(v) for k, v in sorted(self.params.items())},
        }

    def canonical(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    def hash(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()

    def replace(self, **kw) -> "ExperimentConfig":
        d = dict(name=self.name, dimension=self.dimension, distribution=self.distribution,
                 replicas=self.replicas, master_seed=self.master_seed, padding=self.padding,
                 params=dict(self.params))
        d.update(kw)
        return ExperimentConfig(**d)


SHARED = {"name": "str", "dimension": "int", "distribution": "dist", "replicas": "int",
          "master_seed": "int", "padding": "float"}


def build_config(sections: dict[str, dict[str, RawValue]], registry: dict) -> ExperimentConfig:
    for s in sections:
        if s not in ("experiment", "params"):
            rv = next(iter(sections[s].values()), None)
            raise ConfigError(f"unknown section [{s}]", rv.line if rv else 0, 1, s)
    exp = sections.get("experiment", {})
    if "name" not in exp:
        raise ConfigError("missing 'name' in [experiment]")
    name = exp["name"].text
    if name not in registry:
        raise ConfigError(f"unknown experiment {name!r}", exp["name"].line, exp["name"].column, name)
    spec = registry[name]
    base = spec.default_config()
    shared = {}
    for k, rv in exp.items():
        if k not in SHARED:
            raise ConfigError(f"unknown key {k!r} in [experiment]", rv.line, 1, k)
        shared[k] = PARSERS[SHARED[k]](rv)
    params = dict(base.params)
    for k, rv in sections.get("params", {}).items():
        if k not in spec.schema:
            raise ConfigError(f"unknown parameter {k!r} for {name}", rv.line, 1, k)
        params[k] = PARSERS[spec.schema[k]](rv)
    cfg = base.replace(params=params, **{k: v for k, v in shared.items() if k != "name"})
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig) -> None:
    if cfg.dimension < 2:
        raise ConfigError("dimension must be at least 2")
    if cfg.replicas < 2:
        raise ConfigError("replicas must be at least 2")
    if cfg.padding < 0:
        raise ConfigError("padding must be non-negative")


def parse_config(text: str, registry: dict) -> ExperimentConfig:
    return build_config(parse_sections(text), registry)


def load_config(path: str, registry: dict) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, registry)


def render_config(cfg: ExperimentConfig, schema: dict) -> str:
    """Config file text that parses back to ``cfg``."""
    lines = ["[experiment]", f"name = {cfg.name}", f"dimension = {cfg.dimension}",
             f"distribution = {cfg.distribution}", f"replicas = {cfg.replicas}",
             f"master_seed = {cfg.master_seed}", f"padding = {cfg.padding!r}", "", "[params]"]
    for k in sorted(cfg.params):
        v, kind = cfg.params[k], schema[k]
        if kind == "point":
            s = "(" + ", ".join(str(c) for c in v) + ")"
        elif kind in ("ints", "floats"):
            s = ", ".join(repr(x) for x in v)
        elif kind == "intervals":
            s = "; ".join(str(x) for x in v) if v else "none"
        elif kind == "bool":
            s = "true" if v else "false"
        elif kind == "float":
            s = repr(v)
        else:
            s = str(v)
        lines.append(f"{k} = {s}")
    return "\n".join(lines) + "\n"
