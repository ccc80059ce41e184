"""Run configuration: a flat ``key = value`` file overridden by command-line flags."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Dict, Optional

from .convexity.scan import LogGrid
from .energies import EnergySpec, MaterialParams
from .errors import InvalidInputError, ParseError

# CLI shorthands for model tags; the value is (model, dim or None)
MODEL_ALIASES = {
    "dev3exp": ("dev_exp", 3),
    "dev2exp": ("dev_exp", 2),
    "logexp": ("log_full_exp", None),
    "sharp": ("eH_sharp", 3),
    "quadratic": ("H", None),
}


def parse_real(text: str) -> float:
    """Plain decimals, or e-power literals: 'e4' -> e^4, 'e-1', '-e2' -> -e^2, 'e' -> e."""
    s = str(text).strip()
    sign = 1.0
    body = s
    if body.startswith("-") and body[1:2] in ("e", "E"):
        sign, body = -1.0, body[1:]
    if body[:1] in ("e", "E"):
        expo = body[1:]
        try:
            return sign * math.exp(float(expo) if expo else 1.0)
        except ValueError:
            raise InvalidInputError(f"bad e-power literal {text!r}") from None
    try:
        return float(s)
    except ValueError:
        raise InvalidInputError(f"not a number: {text!r}") from None


def parse_vector(text: str):
    return [parse_real(t) for t in str(text).split(",") if t.strip()]


def resolve_model(tag: str, dim: Optional[int] = None):
    model, fixed = MODEL_ALIASES.get(tag, (tag, None))
    if fixed is not None and dim is not None and dim != fixed:
        raise InvalidInputError(f"model {tag!r} is {fixed}-dimensional, got dim {dim}")
    return model, fixed if fixed is not None else (dim or 3)


@dataclass
class RunConfig:
    mu: Optional[float] = None
    kappa: Optional[float] = None
    E: Optional[float] = None
    nu: Optional[float] = None
    k: float = 0.25
    khat: float = 0.25
    model: str = "eH"
    dim: Optional[int] = None
    grid_lo: float = -2.0
    grid_hi: float = 2.0
    grid_n: int = 20
    dev_bound: Optional[float] = None
    jitter: float = 0.0
    seed: int = 42
    output: Optional[str] = None
    workers: int = 1
    a: Optional[float] = None
    a_hat: Optional[float] = None
    m: int = 2

    def __post_init__(self):
        if self.workers < 1:
            raise InvalidInputError(f"workers must be >= 1, got {self.workers}")
        if (self.E is None) != (self.nu is None):
            raise InvalidInputError("give E and nu together")
        if self.E is not None and (self.mu is not None or self.kappa is not None):
            raise InvalidInputError("give either (mu, kappa) or (E, nu), not both")

    @property
    def params(self) -> MaterialParams:
        if self.E is not None:
            return MaterialParams.from_E_nu(self.E, self.nu, self.k, self.khat)
        mu = 1.0 if self.mu is None else self.mu
        kappa = 1.0 if self.kappa is None else self.kappa
        return MaterialParams(mu, kappa, self.k, self.khat)

    def spec(self) -> EnergySpec:
        model, dim = resolve_model(self.model, self.dim)
        p = self.params
        if model in ("dev_exp", "log_full_exp"):
            p = replace(p, khat=p.k)
        elif model == "vol_exp":
            p = replace(p, k=p.khat)
        return EnergySpec(model, p, dim, a=self.a, a_hat=self.a_hat, m=self.m)

    def grid(self, incompressible: bool = False) -> LogGrid:
        dim = resolve_model(self.model, self.dim)[1]
        return LogGrid(dim, self.grid_lo, self.grid_hi, self.grid_n, self.dev_bound,
                       self.jitter, self.seed, incompressible)

    # ------------------------------------------------------------------

    @classmethod
    def keys(cls):
        return [f.name for f in fields(cls)]

    @classmethod
    def from_mapping(cls, values: Dict[str, str]) -> "RunConfig":
        kw = {}
        types = {f.name: f.type for f in fields(cls)}
        for key, raw in values.items():
            if key not in types:
                raise InvalidInputError(f"unknown config key {key!r}")
            kw[key] = _convert(key, types[key], raw)
        return cls(**kw)


def _convert(key, typ, raw):
    if raw is None or isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return raw
    t = str(typ)
    s = str(raw).strip()
    if s.lower() in ("none", ""):
        return None
    if "int" in t:
        try:
            return int(s)
        except ValueError:
            raise InvalidInputError(f"{key} must be an integer, got {s!r}") from None
    if "float" in t:
        return parse_real(s)
    return s


def read_config(path) -> Dict[str, str]:
    """``key = value`` lines; '#' starts a comment."""
    out: Dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected key = value", line=lineno)
            key, value = (s.strip() for s in line.split("=", 1))
            if not key:
                raise ParseError("empty key", line=lineno)
            out[key] = value
    return out


def load_config(path=None, **overrides) -> RunConfig:
    base = RunConfig.from_mapping(read_config(path)) if path else RunConfig()
    conv = {k: _convert(k, next(f.type for f in fields(RunConfig) if f.name == k), v)
            for k, v in overrides.items() if v is not None}
    merged = {**{f.name: getattr(base, f.name) for f in fields(RunConfig)}, **conv}
    return RunConfig(**merged)
