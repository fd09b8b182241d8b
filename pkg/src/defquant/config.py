"""Run configuration: one JSON document, strictly parsed."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .core import Deformation, Family, Harmonic, PowerLaw, QuantumBox, SystemSpec, UnitsConvention
from .errors import ConfigError, DefquantError
from .ode import OdeConfig
from .quadrature import QuadratureConfig

__all__ = ["OutputSpec", "RunConfig", "SYSTEM_KINDS", "load_config", "system_to_dict", "system_from_dict"]

SYSTEM_KINDS = {"box": QuantumBox, "harmonic": Harmonic, "powerlaw": PowerLaw}
_KIND_OF = {cls: kind for kind, cls in SYSTEM_KINDS.items()}
_TOP_KEYS = {"system", "deformation", "units", "ode", "quad", "output"}


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ConfigError(f"output.format must be 'csv' or 'json', got {self.format!r}")


@dataclass(frozen=True)
class RunConfig:
    system: SystemSpec = field(default_factory=Harmonic)
    deformation: Deformation = field(default_factory=Deformation)
    units: UnitsConvention = field(default_factory=UnitsConvention)
    ode: OdeConfig = field(default_factory=OdeConfig)
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    output: OutputSpec = field(default_factory=OutputSpec)

    def to_dict(self) -> dict:
        return {
            "system": system_to_dict(self.system),
            "deformation": {"family": self.deformation.family.value, "s": self.deformation.s},
            "units": asdict(self.units),
            "ode": asdict(self.ode),
            "quad": asdict(self.quad),
            "output": asdict(self.output),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("configuration must be a JSON object")
        _reject_unknown(doc, _TOP_KEYS, "")
        try:
            system = system_from_dict(doc.get("system", {"kind": "harmonic"}))
            dfm = doc.get("deformation", {})
            _reject_unknown(dfm, {"family", "s"}, "deformation.")
            deformation = Deformation(float(dfm.get("s", 0.0)), Family(dfm.get("family", "linear")))
            units = _build(UnitsConvention, doc.get("units", {}), "units.")
            ode = _build(OdeConfig, doc.get("ode", {}), "ode.")
            quad = _build(QuadratureConfig, doc.get("quad", {}), "quad.")
            output = _build(OutputSpec, doc.get("output", {}), "output.")
        except ConfigError:
            raise
        except (DefquantError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        return cls(system, deformation, units, ode, quad, output)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _reject_unknown(doc, allowed, prefix):
    if not isinstance(doc, dict):
        raise ConfigError(f"{prefix.rstrip('.') or 'document'} must be a JSON object")
    extra = sorted(set(doc) - set(allowed))
    if extra:
        raise ConfigError(f"unknown configuration key(s): {', '.join(prefix + k for k in extra)}")


def _build(cls, doc, prefix):
    names = {f.name for f in fields(cls)}
    _reject_unknown(doc, names, prefix)
    return cls(**doc)


def system_to_dict(spec: SystemSpec) -> dict:
    out = {"kind": _KIND_OF[type(spec)]}
    out.update(asdict(spec))
    return out


def system_from_dict(doc: dict) -> SystemSpec:
    if not isinstance(doc, dict):
        raise ConfigError("system must be a JSON object")
    kind = doc.get("kind", "harmonic")
    if kind not in SYSTEM_KINDS:
        raise ConfigError(f"system.kind must be one of {sorted(SYSTEM_KINDS)}, got {kind!r}")
    cls = SYSTEM_KINDS[kind]
    params = {k: v for k, v in doc.items() if k != "kind"}
    return _build(cls, params, "system.")


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return RunConfig.from_dict(doc)
