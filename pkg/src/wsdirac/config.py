"""Run configuration: strict JSON parsing, validation and serialization.

Every rejected field raises :class:`~wsdirac.errors.ValidationError` with a
JSON pointer to the field.  Unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .errors import ParameterError, ParseError, ValidationError
from .potential import PekerisSource, PotentialParams
from .spectra import Kind, SymmetryCase

__all__ = [
    "QuantumSpec",
    "OutputSpec",
    "OracleSpec",
    "WavefunctionSpec",
    "SwaveTableSpec",
    "PekerisSpec",
    "RunConfig",
    "parse_config",
    "serialize_config",
    "config_to_dict",
]

FORMATS = ("csv", "json")
NORMALIZE = ("quadrature", "series", "none")


@dataclass(frozen=True)
class QuantumSpec:
    n_max: int
    kappa_list: tuple[int, ...]


@dataclass(frozen=True)
class OutputSpec:
    format: str | None = None
    path: str | None = None


@dataclass(frozen=True)
class OracleSpec:
    """Overrides for the shooting runs of ``verify``."""

    rtol: float = 1e-12
    r_min: float | None = None
    r_max: float | None = None
    r_match: float | None = None
    bracket_rel: float = 0.05
    bracket_max_rel: float = 0.25


@dataclass(frozen=True)
class WavefunctionSpec:
    n: int
    kappa: int
    root: int | None = None
    r_min: float | None = None
    r_max: float | None = None
    points: int = 201
    normalize: str = "quadrature"


@dataclass(frozen=True)
class SwaveTableSpec:
    q_values: tuple[float, ...] = (1.0, 2.0, -1.0, -2.0)


@dataclass(frozen=True)
class PekerisSpec:
    x_lo: float = -0.2
    x_hi: float = 0.2
    alpha_values: tuple[float, ...] | None = None


@dataclass(frozen=True)
class RunConfig:
    potential: PotentialParams
    symmetry: SymmetryCase
    quantum: QuantumSpec
    pekeris_source: PekerisSource = PekerisSource.TAYLOR
    output: OutputSpec = field(default_factory=OutputSpec)
    oracle: OracleSpec = field(default_factory=OracleSpec)
    wavefunction: WavefunctionSpec | None = None
    swave_table: SwaveTableSpec = field(default_factory=SwaveTableSpec)
    pekeris: PekerisSpec = field(default_factory=PekerisSpec)


# -- field readers ---------------------------------------------------------


class _Obj:
    """A JSON object under validation, tracking its pointer and used keys."""

    def __init__(self, data: Any, ptr: str, allowed: tuple[str, ...]):
        if not isinstance(data, dict):
            raise ValidationError(ptr, "must be an object")
        extra = sorted(set(data) - set(allowed))
        if extra:
            raise ValidationError(f"{ptr}/{extra[0]}", "unknown key")
        self.data = data
        self.ptr = ptr

    def at(self, key: str) -> str:
        return f"{self.ptr}/{key}"

    def has(self, key: str) -> bool:
        return key in self.data and self.data[key] is not None

    def raw(self, key: str, required: bool):
        if key not in self.data:
            if required:
                raise ValidationError(self.at(key), "required field is missing")
            return None
        return self.data[key]

    def number(self, key: str, required: bool = True, default=None) -> float | None:
        v = self.raw(key, required)
        if v is None:
            return default
        return _number(v, self.at(key))

    def integer(self, key: str, required: bool = True, default=None) -> int | None:
        v = self.raw(key, required)
        if v is None:
            return default
        return _integer(v, self.at(key))

    def choice(self, key: str, options, required: bool = False, default=None):
        v = self.raw(key, required)
        if v is None:
            return default
        if v not in options:
            raise ValidationError(self.at(key), f"must be one of {', '.join(options)}")
        return v

    def obj(self, key: str, allowed: tuple[str, ...], required: bool = False) -> "_Obj | None":
        v = self.raw(key, required)
        if v is None:
            return None
        return _Obj(v, self.at(key), allowed)


def _number(v, ptr: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(ptr, "must be a number")
    v = float(v)
    if not math.isfinite(v):
        raise ValidationError(ptr, "must be finite")
    return v


def _integer(v, ptr: str) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
        raise ValidationError(ptr, "must be an integer")
    return int(v)


def _number_list(v, ptr: str) -> tuple[float, ...]:
    if not isinstance(v, list) or not v:
        raise ValidationError(ptr, "must be a nonempty array")
    return tuple(_number(x, f"{ptr}/{i}") for i, x in enumerate(v))


# -- sections --------------------------------------------------------------


def _potential(o: _Obj) -> PotentialParams:
    V0 = o.number("V0")
    q = o.number("q")
    if q == 0:
        raise ValidationError(o.at("q"), "must be nonzero (q = 0 is the excluded exponential case)")
    a = o.number("a")
    if not a > 0:
        raise ValidationError(o.at("a"), "must be > 0")
    R0 = o.number("R0", required=False)
    if R0 is not None and R0 < 0:
        raise ValidationError(o.at("R0"), "must be >= 0")
    hbar_c = o.number("hbar_c", required=False, default=1.0)
    if not hbar_c > 0:
        raise ValidationError(o.at("hbar_c"), "must be > 0")
    return PotentialParams(V0, q, a, R0, hbar_c)


def _symmetry(o: _Obj) -> SymmetryCase:
    kind = o.choice("kind", tuple(k.value for k in Kind), required=True)
    A = o.number("A")
    mass = o.number("mass")
    if not mass > 0:
        raise ValidationError(o.at("mass"), "must be > 0")
    return SymmetryCase(Kind(kind), A, mass)


def _quantum(o: _Obj) -> QuantumSpec:
    n_max = o.integer("n_max")
    if n_max < 0:
        raise ValidationError(o.at("n_max"), "must be >= 0")
    ks = o.raw("kappa_list", True)
    ptr = o.at("kappa_list")
    if not isinstance(ks, list) or not ks:
        raise ValidationError(ptr, "must be a nonempty array")
    kappas = []
    for i, k in enumerate(ks):
        k = _integer(k, f"{ptr}/{i}")
        if k == 0:
            raise ValidationError(f"{ptr}/{i}", "kappa must be a nonzero integer (+-1, +-2, ...)")
        kappas.append(k)
    return QuantumSpec(n_max, tuple(kappas))


def _output(o: _Obj | None) -> OutputSpec:
    if o is None:
        return OutputSpec()
    fmt = o.choice("format", FORMATS)
    path = o.raw("path", False)
    if path is not None and not isinstance(path, str):
        raise ValidationError(o.at("path"), "must be a string")
    return OutputSpec(fmt, path)


def _positive(o: _Obj, key: str, default):
    v = o.number(key, required=False, default=default)
    if v is not None and not v > 0:
        raise ValidationError(o.at(key), "must be > 0")
    return v


def _oracle(o: _Obj | None) -> OracleSpec:
    if o is None:
        return OracleSpec()
    rtol = _positive(o, "rtol", 1e-12)
    if rtol >= 1e-3:
        raise ValidationError(o.at("rtol"), "must be < 1e-3")
    r_min = _positive(o, "r_min", None)
    r_max = _positive(o, "r_max", None)
    r_match = _positive(o, "r_match", None)
    if r_min is not None and r_max is not None and not r_min < r_max:
        raise ValidationError(o.at("r_max"), "must exceed r_min")
    rel = _positive(o, "bracket_rel", 0.05)
    max_rel = _positive(o, "bracket_max_rel", 0.25)
    if max_rel < rel:
        raise ValidationError(o.at("bracket_max_rel"), "must be >= bracket_rel")
    return OracleSpec(rtol, r_min, r_max, r_match, rel, max_rel)


def _wavefunction(o: _Obj | None) -> WavefunctionSpec | None:
    if o is None:
        return None
    n = o.integer("n")
    if n < 0:
        raise ValidationError(o.at("n"), "must be >= 0")
    kappa = o.integer("kappa")
    if kappa == 0:
        raise ValidationError(o.at("kappa"), "must be a nonzero integer")
    root = o.integer("root", required=False)
    if root is not None and root not in (0, 1):
        raise ValidationError(o.at("root"), "must be 0 or 1")
    r_min = o.number("r_min", required=False)
    if r_min is not None and r_min < 0:
        raise ValidationError(o.at("r_min"), "must be >= 0")
    r_max = _positive(o, "r_max", None)
    if r_min is not None and r_max is not None and not r_min < r_max:
        raise ValidationError(o.at("r_max"), "must exceed r_min")
    points = o.integer("points", required=False, default=201)
    if points < 2:
        raise ValidationError(o.at("points"), "must be >= 2")
    normalize = o.choice("normalize", NORMALIZE, default="quadrature")
    return WavefunctionSpec(n, kappa, root, r_min, r_max, points, normalize)


def _swave(o: _Obj | None) -> SwaveTableSpec:
    if o is None or not o.has("q_values"):
        return SwaveTableSpec()
    ptr = o.at("q_values")
    qs = _number_list(o.raw("q_values", True), ptr)
    for i, q in enumerate(qs):
        if q == 0:
            raise ValidationError(f"{ptr}/{i}", "must be nonzero")
    return SwaveTableSpec(qs)


def _pekeris(o: _Obj | None) -> PekerisSpec:
    if o is None:
        return PekerisSpec()
    x_lo = o.number("x_lo", required=False, default=-0.2)
    x_hi = o.number("x_hi", required=False, default=0.2)
    if x_lo <= -1:
        raise ValidationError(o.at("x_lo"), "must be > -1")
    if not x_lo < x_hi:
        raise ValidationError(o.at("x_hi"), "must exceed x_lo")
    alphas = None
    if o.has("alpha_values"):
        ptr = o.at("alpha_values")
        alphas = _number_list(o.raw("alpha_values", True), ptr)
        for i, al in enumerate(alphas):
            if not al > 0:
                raise ValidationError(f"{ptr}/{i}", "must be > 0")
    return PekerisSpec(x_lo, x_hi, alphas)


_TOP = (
    "potential", "symmetry", "quantum", "pekeris_source", "output",
    "oracle", "wavefunction", "swave_table", "pekeris",
)


def parse_config(text: bytes | str) -> RunConfig:
    """Parse and validate a UTF-8 JSON configuration document.

    Raises
    ------
    ParseError
        Malformed UTF-8 or JSON.
    ValidationError
        A field violates its bound; ``err.pointer`` locates it.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from exc
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    top = _Obj(data, "", _TOP)
    try:
        return RunConfig(
            potential=_potential(top.obj("potential", ("V0", "q", "a", "R0", "hbar_c"), True)),
            symmetry=_symmetry(top.obj("symmetry", ("kind", "A", "mass"), True)),
            quantum=_quantum(top.obj("quantum", ("n_max", "kappa_list"), True)),
            pekeris_source=PekerisSource(
                top.choice("pekeris_source", tuple(s.value for s in PekerisSource), default="taylor")
            ),
            output=_output(top.obj("output", ("format", "path"))),
            oracle=_oracle(top.obj("oracle", (
                "rtol", "r_min", "r_max", "r_match", "bracket_rel", "bracket_max_rel",
            ))),
            wavefunction=_wavefunction(top.obj("wavefunction", (
                "n", "kappa", "root", "r_min", "r_max", "points", "normalize",
            ))),
            swave_table=_swave(top.obj("swave_table", ("q_values",))),
            pekeris=_pekeris(top.obj("pekeris", ("x_lo", "x_hi", "alpha_values"))),
        )
    except ParameterError as exc:  # a bound enforced by a domain type
        raise ValidationError("", str(exc)) from exc


def _reject_constant(name: str):
    raise ParseError(f"non-standard JSON constant {name}")


def config_to_dict(cfg: RunConfig) -> dict:
    """Plain-JSON form of ``cfg``; inverse of :func:`parse_config`."""
    p, s, qs = cfg.potential, cfg.symmetry, cfg.quantum
    out: dict[str, Any] = {
        "potential": {"V0": p.V0, "q": p.q, "a": p.a, "R0": p.R0, "hbar_c": p.hbar_c},
        "symmetry": {"kind": s.kind.value, "A": s.A, "mass": s.mass},
        "quantum": {"n_max": qs.n_max, "kappa_list": list(qs.kappa_list)},
        "pekeris_source": cfg.pekeris_source.value,
        "output": {"format": cfg.output.format, "path": cfg.output.path},
        "oracle": vars_of(cfg.oracle),
        "swave_table": {"q_values": list(cfg.swave_table.q_values)},
        "pekeris": {
            "x_lo": cfg.pekeris.x_lo,
            "x_hi": cfg.pekeris.x_hi,
            "alpha_values": None if cfg.pekeris.alpha_values is None else list(cfg.pekeris.alpha_values),
        },
    }
    if cfg.wavefunction is not None:
        out["wavefunction"] = vars_of(cfg.wavefunction)
    return out


def vars_of(obj) -> dict:
    return {k: getattr(obj, k) for k in obj.__dataclass_fields__}


def serialize_config(cfg: RunConfig) -> str:
    """Canonical JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True) + "\n"
