"""Flat ``key = value`` experiment files.

Recognised keys: omega, a, b, t_u, t1, t2, model (standard | hypersurface |
direct), v, t_a, n_trials, seed.  ``v`` is required for the hypersurface
model and ``t_a`` for the direct model; blank lines and ``#`` comments are
allowed.  Anything else is an error.
"""

from __future__ import annotations

from pathlib import Path

from .protocol import ConfigError, DirectMeasurement, HypersurfaceCollapse, ProtocolConfig, StandardQM
from .spacetime import GeometryError

FLOAT_KEYS = ("omega", "a", "b", "t_u", "t1", "t2", "v", "t_a")
INT_KEYS = ("n_trials", "seed")
REQUIRED = ("omega", "a", "b", "t_u", "t1", "t2", "model")
KEYS = FLOAT_KEYS + INT_KEYS + ("model",)
MODELS = ("standard", "hypersurface", "direct")

DEFAULT_TRIALS = 1000
DEFAULT_SEED = 0


def parse_config_text(text: str, overrides: dict | None = None) -> ProtocolConfig:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key in FLOAT_KEYS:
                values[key] = float(value)
            elif key in INT_KEYS:
                values[key] = int(value)
            else:
                values[key] = value
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value {value!r} for {key}") from None
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return config_from_values(values)


def config_from_values(values: dict) -> ProtocolConfig:
    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    kind = values["model"]
    if kind not in MODELS:
        raise ConfigError(f"model must be one of {'|'.join(MODELS)}, got {kind!r}")

    if kind == "standard":
        model = StandardQM()
    elif kind == "direct":
        if "t_a" not in values:
            raise ConfigError("model=direct requires t_a")
        model = DirectMeasurement(values["t_a"])
    else:
        if "v" not in values:
            raise ConfigError("model=hypersurface requires v")
        model = None

    fields = {k: values[k] for k in ("omega", "a", "b", "t_u", "t1", "t2")}
    config = ProtocolConfig(
        **fields,
        model=model or StandardQM(),
        n_trials=values.get("n_trials", DEFAULT_TRIALS),
        seed=values.get("seed", DEFAULT_SEED),
    )
    if model is None:
        try:
            config = config.with_surface(values["v"])
        except GeometryError as exc:
            raise ConfigError(f"spacelike surface invariant violated: {exc}") from None
    return config


def load_config(path: str | Path, overrides: dict | None = None) -> ProtocolConfig:
    return parse_config_text(Path(path).read_text(encoding="utf-8"), overrides)


def config_items(config: ProtocolConfig) -> list[tuple[str, str]]:
    """Ordered (key, value) pairs that parse back to ``config`` exactly."""
    items = [(k, repr(float(getattr(config, k)))) for k in ("omega", "a", "b", "t_u", "t1", "t2")]
    model = config.model
    items.append(("model", model.name))
    if isinstance(model, HypersurfaceCollapse):
        items.append(("v", repr(float(model.surface.v))))
    elif isinstance(model, DirectMeasurement):
        items.append(("t_a", repr(float(model.t_a))))
    items.append(("n_trials", str(int(config.n_trials))))
    items.append(("seed", str(int(config.seed))))
    return items


def format_config(config: ProtocolConfig) -> str:
    return "".join(f"{k} = {v}\n" for k, v in config_items(config))

