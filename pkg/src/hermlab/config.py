"""Flat key = value experiment configuration.

The config format is one ``key = value`` pair per line (no nesting, ``#``
comments allowed), chosen to be diff-friendly and trivially parseable.
Unknown keys are rejected.  Every randomized experiment requires an
explicit seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

from .errors import ValidationError
from .spaces import ValueSpace

__all__ = ["ExperimentConfig", "parse_config", "load_config"]

EXPERIMENTS = (
    "basis-identities",
    "kernel-identities",
    "polarization",
    "equivalence",
    "meda-condition",
    "identity-4.1",
    "sobolev-equivalence",
    "fspace-equivalence",
)

RANDOMIZED = (
    "basis-identities",
    "polarization",
    "equivalence",
    "identity-4.1",
    "sobolev-equivalence",
    "fspace-equivalence",
)


@dataclass
class ExperimentConfig:
    experiment: str
    n: int = 1
    cap: int = 8
    spatial_nodes: int = 400
    time_nodes: int = 200
    t_min: float = 1e-4
    t_max: float = 40.0
    p: tuple[float, ...] = (2.0,)
    value_space: str = "scalar"
    seed: int | None = None
    draws: int = 2000
    corpus: int = 20
    order: tuple[int, ...] = (1,)
    alpha: tuple[int, ...] = (1,)
    ell: int = 1
    beta: float | None = None
    k_order: int = 2
    symbol: str = "identity"
    sector: float | None = None
    omega: float = 1.0
    growth: str = "exponential"
    u_cutoff: float = 40.0
    threads: int = 1
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValidationError(
                f"unknown experiment {self.experiment!r}; known: {', '.join(EXPERIMENTS)}"
            )
        if not 1 <= self.n <= 3:
            raise ValidationError("dimension n must be 1..3")
        if not 0 <= self.cap <= 64:
            raise ValidationError("cap must be 0..64")
        if self.spatial_nodes < 64:
            raise ValidationError("spatial_nodes must be >= 64")
        if self.spatial_nodes ** self.n > 2 ** 24:
            raise ValidationError("spatial grid exceeds the node budget")
        if self.experiment in RANDOMIZED and self.seed is None:
            raise ValidationError(f"experiment {self.experiment!r} requires a seed")
        if self.draws < 100:
            raise ValidationError("draws must be >= 100")
        if self.corpus < 1:
            raise ValidationError("corpus must be >= 1")
        if any(v <= 1 for v in self.p):
            raise ValidationError("every p must be > 1")
        if self.format not in ("json", "csv"):
            raise ValidationError("format must be json or csv")
        if self.threads < 1:
            raise ValidationError("threads must be >= 1")
        self.space()  # validates the value-space spec

    def space(self) -> ValueSpace:
        spec = self.value_space.strip()
        if spec in ("scalar", "real"):
            return ValueSpace.real()
        if spec == "complex":
            return ValueSpace.complex()
        if spec.startswith("lq(") and spec.endswith(")"):
            body = spec[3:-1]
            parts = [s.strip() for s in body.split(",")]
            if len(parts) != 2:
                raise ValidationError(f"value_space {spec!r}: expected lq(q, d)")
            try:
                return ValueSpace.lq(float(parts[0]), int(parts[1]))
            except ValueError as exc:
                raise ValidationError(f"value_space {spec!r}: {exc}") from exc
        raise ValidationError(f"unknown value_space {spec!r} (scalar | complex | lq(q, d))")

    def echo(self) -> dict:
        """Config as a flat ordered dict of printable values (report echo).

        Execution-only keys (threads, out, format) are omitted: they cannot
        change any number, and reports must hash identically across worker
        counts and output destinations.
        """
        out = {}
        for f in fields(self):
            if f.name in ("threads", "out", "format"):
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                out[f.name] = ", ".join(repr(x) for x in v)
            else:
                out[f.name] = "" if v is None else (v if isinstance(v, (int, str)) else repr(v))
        return out


_INT_KEYS = {"n", "cap", "spatial_nodes", "time_nodes", "seed", "draws", "corpus",
             "ell", "k_order", "threads"}
_FLOAT_KEYS = {"t_min", "t_max", "beta", "sector", "omega", "u_cutoff"}
_TUPLE_FLOAT_KEYS = {"p"}
_TUPLE_INT_KEYS = {"order", "alpha"}
_STR_KEYS = {"experiment", "value_space", "symbol", "growth", "out", "format"}


def parse_config(text: str, overrides: dict | None = None) -> ExperimentConfig:
    """Parse flat key = value text into a validated ExperimentConfig."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        values[key] = val
    if overrides:
        for key, val in overrides.items():
            if val is not None:
                values[key] = val
    typed: dict = {}
    for key, val in values.items():
        if isinstance(val, (int, float, tuple)):
            typed[key] = val
            continue
        if key in _INT_KEYS:
            typed[key] = int(val)
        elif key in _FLOAT_KEYS:
            typed[key] = float(val)
        elif key in _TUPLE_FLOAT_KEYS:
            typed[key] = tuple(float(s) for s in str(val).split(","))
        elif key in _TUPLE_INT_KEYS:
            typed[key] = tuple(int(s) for s in str(val).split(","))
        elif key in _STR_KEYS:
            typed[key] = str(val)
        else:
            raise ValidationError(f"unknown config key {key!r}")
    if "experiment" not in typed:
        raise ValidationError("config must set 'experiment'")
    try:
        return ExperimentConfig(**typed)
    except TypeError as exc:
        raise ValidationError(str(exc)) from exc


def load_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), overrides)


def item_rng(seed: int, item_id: str) -> np.random.Generator:
    """Counter-based generator keyed by (seed, item id).

    Parallel schedules cannot change results: every item draws from its own
    Philox stream regardless of execution order.
    """
    import zlib

    key = (int(seed) << 32) ^ zlib.crc32(item_id.encode())
    return np.random.default_rng(np.random.Philox(key=key))
