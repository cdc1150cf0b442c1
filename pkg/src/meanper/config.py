"""
Experiment configuration for meanper.
"""

import cmath
import json
import logging
import math
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .entire.catalog import EntireFunctionSpec
from .errors import ConfigError
from .growth import YoungSpec

logger = logging.getLogger(__name__)

DEFAULT_PATHS = (
    Path.cwd() / 'meanper.json',
    Path.cwd() / 'meanper.yaml',
    Path.home() / '.meanper' / 'config.json',
)

ENV_MAPPINGS = {
    'MEANPER_THREADS': ('threads',),
    'MEANPER_LOG_LEVEL': ('log_level',),
    'MEANPER_OUT': ('outputs', 'directory'),
}


class ComplexNumber(BaseModel):
    """A complex number written as {"re": ..., "im": ...}; a bare real is accepted."""

    model_config = ConfigDict(extra='forbid')

    re: float = 0.0
    im: float = 0.0

    @model_validator(mode='before')
    @classmethod
    def _from_real(cls, data: Any) -> Any:
        if isinstance(data, (int, float)) and not isinstance(data, bool):
            return {'re': float(data), 'im': 0.0}
        return data

    @classmethod
    def of(cls, z: complex) -> 'ComplexNumber':
        z = complex(z)
        return cls(re=z.real, im=z.imag)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


class TermConfig(BaseModel):
    """One term w exp(lambda xi) or p(xi) exp(lambda xi)."""

    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    weight: Optional[ComplexNumber] = None
    coeffs: Optional[List[ComplexNumber]] = None
    lam: ComplexNumber = Field(default_factory=ComplexNumber, alias='lambda')

    @model_validator(mode='before')
    @classmethod
    def _from_pair(cls, data: Any) -> Any:
        # [w, lambda] or [[p_0, p_1, ...], lambda]
        if isinstance(data, (list, tuple)) and len(data) == 2:
            first, lam = data
            key = 'coeffs' if isinstance(first, (list, tuple)) else 'weight'
            return {key: first, 'lambda': lam}
        return data


class FunctionConfig(BaseModel):
    """A catalog entire function."""

    model_config = ConfigDict(extra='forbid')

    kind: Literal['expsum', 'polyexpsum', 'polynomial', 'segment_average', 'sin', 'cos']
    terms: List[TermConfig] = Field(default_factory=list)
    coeffs: List[ComplexNumber] = Field(default_factory=list)
    t: Optional[float] = None
    omega: Optional[float] = None
    amplitude: ComplexNumber = Field(default_factory=lambda: ComplexNumber(re=1.0))
    label: str = ""

    @model_validator(mode='after')
    def _check_kind(self) -> 'FunctionConfig':
        errors = []
        if self.kind == 'expsum':
            if not self.terms:
                errors.append("expsum needs terms")
            if any(term.weight is None for term in self.terms):
                errors.append("expsum terms need a weight")
        elif self.kind == 'polyexpsum':
            if not self.terms:
                errors.append("polyexpsum needs terms")
            if any(not term.coeffs for term in self.terms):
                errors.append("polyexpsum terms need coeffs")
        elif self.kind == 'polynomial':
            if not self.coeffs:
                errors.append("polynomial needs coeffs")
        elif self.kind == 'segment_average':
            if self.t is None or not self.t > 0:
                errors.append("segment_average needs a positive t")
        elif self.omega is None:
            errors.append(f"{self.kind} needs omega")
        if errors:
            raise ValueError('; '.join(errors))
        self.to_spec()
        return self

    def to_spec(self) -> EntireFunctionSpec:
        """The catalog function; sin and cos expand by Euler's formula."""
        if self.kind == 'expsum':
            return EntireFunctionSpec.exp_sum([(t.weight.value, t.lam.value) for t in self.terms], self.label)
        if self.kind == 'polyexpsum':
            return EntireFunctionSpec.poly_exp_sum(
                [([c.value for c in t.coeffs], t.lam.value) for t in self.terms], self.label)
        if self.kind == 'polynomial':
            return EntireFunctionSpec.polynomial([c.value for c in self.coeffs], self.label)
        if self.kind == 'segment_average':
            return EntireFunctionSpec.segment_average(self.t, self.label)
        a = self.amplitude.value
        iw = 1j * self.omega
        label = self.label or f"{a:g}*{self.kind}({self.omega:g} z)"
        if self.kind == 'sin':
            return EntireFunctionSpec.exp_sum([(a / 2j, iw), (-a / 2j, -iw)], label)
        return EntireFunctionSpec.exp_sum([(a / 2, iw), (a / 2, -iw)], label)


class ThetaConfig(BaseModel):
    """Young function: linear, power (c x^p) or a table of (x, theta) points."""

    model_config = ConfigDict(extra='forbid')

    kind: Literal['linear', 'power', 'table'] = 'linear'
    p: Optional[float] = None
    coefficient: float = 1.0
    points: Optional[List[Tuple[float, float]]] = None

    @model_validator(mode='after')
    def _check_kind(self) -> 'ThetaConfig':
        if self.kind == 'power' and self.p is None:
            raise ValueError("power theta needs p")
        if self.kind == 'table' and not self.points:
            raise ValueError("table theta needs points")
        self.to_spec()
        return self

    def to_spec(self) -> YoungSpec:
        if self.kind == 'linear':
            return YoungSpec.linear()
        if self.kind == 'power':
            return YoungSpec.power(self.p, self.coefficient)
        return YoungSpec.tabulated(self.points)


class GridConfig(BaseModel):
    """Sample points in the z-plane."""

    model_config = ConfigDict(extra='forbid')

    kind: Literal['disk', 'line', 'points'] = 'disk'
    radius: float = Field(1.0, gt=0)
    n_radial: int = Field(4, ge=1)
    n_angular: int = Field(16, ge=1)
    start: ComplexNumber = Field(default_factory=lambda: ComplexNumber(re=-1.0))
    end: ComplexNumber = Field(default_factory=lambda: ComplexNumber(re=1.0))
    n: int = Field(21, ge=1)
    values: List[ComplexNumber] = Field(default_factory=list)

    @model_validator(mode='after')
    def _check_points(self) -> 'GridConfig':
        if self.kind == 'points' and not self.values:
            raise ValueError("points grid needs values")
        return self

    def points(self) -> List[complex]:
        if self.kind == 'points':
            return [v.value for v in self.values]
        if self.kind == 'line':
            a, b = self.start.value, self.end.value
            if self.n == 1:
                return [a]
            return [a + (b - a) * i / (self.n - 1) for i in range(self.n)]
        out = [0j]
        for i in range(1, self.n_radial + 1):
            r = self.radius * i / self.n_radial
            out.extend(cmath.rect(r, 2.0 * math.pi * j / self.n_angular) for j in range(self.n_angular))
        return out


class Tolerances(BaseModel):
    model_config = ConfigDict(extra='forbid')

    zero_tol: float = Field(1e-10, gt=0)
    residual: float = Field(1e-8, gt=0)
    identity: float = Field(1e-9, gt=0)
    pairing_tail: float = Field(1e-10, gt=0)
    condition_flag: float = Field(1e12, gt=0)


class OutputsConfig(BaseModel):
    """Output directory and file names."""

    model_config = ConfigDict(extra='forbid')

    directory: str = "results"
    zeros: str = "zeros.csv"
    counting: str = "counting.csv"
    verdict: str = "verdict.json"
    general: str = "coefficients_general.csv"
    interpolating: str = "coefficients_interpolating.csv"
    norms: str = "norms.json"
    reconstruction: str = "reconstruction.csv"
    convergence: str = "convergence.json"
    verification: str = "verification.json"


class ExperimentConfig(BaseModel):
    """One experiment: transform Phi, growth scale, input function and outputs."""

    model_config = ConfigDict(extra='forbid')

    description: str = ""
    phi: FunctionConfig
    theta: ThetaConfig = Field(default_factory=ThetaConfig)
    f: Optional[FunctionConfig] = None
    radius: float = Field(..., gt=0)
    K: Optional[int] = Field(None, ge=0)
    grid: GridConfig = Field(default_factory=GridConfig)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    m_grid: List[float] = Field(default_factory=lambda: [1.0, 2.0], min_length=1)
    norm_p: List[float] = Field(default_factory=lambda: [1.0, 2.0, 3.0], min_length=1)
    identity_grid: Optional[List[ComplexNumber]] = None
    identity_orders: int = Field(3, ge=0, le=10)
    threads: Optional[int] = Field(None, ge=1)
    log_level: str = "INFO"
    log_file: Optional[str] = None
    outputs: OutputsConfig = Field(default_factory=OutputsConfig)

    @model_validator(mode='after')
    def _check(self) -> 'ExperimentConfig':
        errors = []
        if any(m <= 0 for m in self.m_grid):
            errors.append("m_grid entries must be positive")
        if any(p <= 0 for p in self.norm_p):
            errors.append("norm_p entries must be positive")
        if self.log_level.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            errors.append(f"unknown log_level {self.log_level!r}")
        if errors:
            raise ValueError('; '.join(errors))
        return self

    def identity_points(self) -> List[complex]:
        """Grid for the monomial identity check, 8 points on |xi| = 3 by default."""
        if self.identity_grid:
            return [v.value for v in self.identity_grid]
        return [cmath.rect(3.0, 2.0 * math.pi * j / 8 + math.pi / 8) for j in range(8)]

    def output_path(self, name: str) -> Path:
        return Path(self.outputs.directory) / getattr(self.outputs, name)

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary."""
        return self.model_dump(mode='json', by_alias=True, exclude_none=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        """Validate a dictionary.

        Raises:
            ConfigError: one diagnostic per invalid field.
        """
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            diagnostics = [f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}"
                           for err in e.errors()]
            raise ConfigError("Configuration validation failed", diagnostics) from None

    @classmethod
    def from_file(cls, path: Path) -> 'ExperimentConfig':
        """Load a JSON document, or YAML for .yaml/.yml files."""
        return cls.from_dict(read_document(Path(path)))

    def to_file(self, path: Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w') as f:
            if path.suffix in ('.yaml', '.yml'):
                yaml.dump(self.to_dict(), f, default_flow_style=False, sort_keys=False)
            else:
                json.dump(self.to_dict(), f, indent=2)
                f.write('\n')


def read_document(path: Path) -> Dict[str, Any]:
    """Parse a config file, reporting syntax errors with line and column."""
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from None
    if path.suffix in ('.yaml', '.yml'):
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as e:
            mark = getattr(e, 'problem_mark', None)
            where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
            problem = getattr(e, 'problem', None) or str(e)
            raise ConfigError(f"{path}: YAML error at {where}: {problem}") from None
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            where = f"line {e.lineno}, column {e.colno}"
            raise ConfigError(f"{path}: JSON error at {where}: {e.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def _set_path(data: Dict[str, Any], keys: Tuple[str, ...], value: Any) -> None:
    for key in keys[:-1]:
        data = data.setdefault(key, {})
    data[keys[-1]] = value


def load_config(path: Optional[Path] = None, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Load an experiment: CLI overrides > environment > file > defaults.

    Args:
        path: Config file; the default locations are tried when omitted.
        overrides: Dotted keys (``"tolerances.residual"``) or top-level keys
            with non-None values.

    Raises:
        ConfigError: missing file, syntax error or invalid field.
    """
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Config file not found: {path}")
    else:
        path = next((p for p in DEFAULT_PATHS if p.exists()), None)
        if path is None:
            raise ConfigError("No config given and none found at "
                              + ", ".join(str(p) for p in DEFAULT_PATHS))
    data = read_document(path)
    logger.debug(f"Loaded config document from {path}")

    for env_var, keys in ENV_MAPPINGS.items():
        value = os.environ.get(env_var)
        if value:
            _set_path(data, keys, value)

    for key, value in (overrides or {}).items():
        if value is not None:
            _set_path(data, tuple(key.split('.')), value)

    return ExperimentConfig.from_dict(data)


def default_config() -> ExperimentConfig:
    """Fourier reduction: Phi = e^xi - 1 (T = delta_1 - delta_0), f = sin(2 pi z)."""
    return ExperimentConfig(
        description="Fourier series as an interpolating expansion: T = delta_1 - delta_0, f = sin(2 pi z)",
        phi=FunctionConfig(kind='expsum', terms=[
            TermConfig(weight=ComplexNumber(re=1.0), lam=ComplexNumber(re=1.0)),
            TermConfig(weight=ComplexNumber(re=-1.0), lam=ComplexNumber()),
        ], label="exp(xi) - 1"),
        f=FunctionConfig(kind='sin', omega=2.0 * math.pi),
        radius=20.0,
        grid=GridConfig(kind='disk', radius=1.0),
    )


def create_default_config(path: Path) -> Path:
    """Create a default experiment file (JSON, or commented YAML)."""
    path = Path(path)
    config = default_config()
    config.to_file(path)
    if path.suffix in ('.yaml', '.yml'):
        body = path.read_text()
        header = ("# meanper experiment\n"
                  "# phi: transform of the convolutor T, f: input function\n"
                  "# complex numbers are {re: ..., im: ...}; radius bounds the zero search\n")
        path.write_text(header + body)
    logger.info(f"Created default configuration at {path}")
    return path
