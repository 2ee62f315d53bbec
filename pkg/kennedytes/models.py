"""Typed data contracts for the receiver simulation.

Every stage reads and writes one of these models. Parameter objects are frozen pydantic models
with range constraints, so an invalid receiver or detector never reaches the numerics. Value
types that carry arrays hold read-only numpy arrays and validate their invariants on
construction.

Stage flow::

    ReceiverParams      -> photon_statistics -> PhotonDistribution
    PhotonDistribution  -> discriminator     -> ConditionalDistribution -> error probability
    TesResponseModel    -> trace_model       -> Trace / MatchedFilter / ScoreHistogram
    ExperimentConfig    -> experiment        -> ExperimentResult / CurvePoint
"""

from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import ConfigError

# Tolerance for "sums to one" on every probability vector.
NORMALIZATION_TOL = 1e-9

# Default score separation between zero and one absorbed photon, in units of score noise.
DEFAULT_SNR_PER_PHOTON = 6.0

DetectorMode = Literal["ideal", "trace"]
BetaMode = Literal["optimize", "fixed"]
ScoreMethod = Literal["matched", "height"]
OutputFormat = Literal["csv", "json"]

_ARRAY_MODEL = ConfigDict(arbitrary_types_allowed=True, frozen=True, extra="forbid")


def _readonly(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


def _check_probabilities(p: np.ndarray, name: str) -> np.ndarray:
    if p.ndim != 1 or p.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D array")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"{name} contains non-finite entries")
    if np.any(p < 0):
        raise ValueError(f"{name} contains negative entries")
    total = float(np.sum(p))
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"{name} sums to {total!r}, not 1")
    return p


# --------------------------------------------------------------------------- #
# bounds
# --------------------------------------------------------------------------- #
class SignalIntensity(BaseModel):
    """Mean photon number |alpha|^2 of the signal."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha_sq: float = Field(ge=0, allow_inf_nan=False)

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha_sq)


# --------------------------------------------------------------------------- #
# photon_statistics
# --------------------------------------------------------------------------- #
class ReceiverParams(BaseModel):
    """Imperfections of the displacement receiver and its detector.

    ``dark_low_profile`` weights low-energy dark events over photon numbers 1, 2, 3, ...
    (normalised on use); the default is proportional to 2^-n.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    transmissivity: float = Field(0.982, gt=0, le=1)
    visibility: float = Field(0.998, ge=0, le=1)
    efficiency: float = Field(0.98, gt=0, le=1)
    dark_low_rate: float = Field(0.0, ge=0, lt=1)
    dark_high_rate: float = Field(0.0, ge=0, lt=1)
    dark_high_threshold: int = Field(15, ge=1)
    dark_low_profile: Tuple[float, ...] = (0.5, 0.25, 0.125)

    @field_validator("dark_low_profile")
    @classmethod
    def _profile_is_weights(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not v or any(not math.isfinite(w) or w < 0 for w in v) or sum(v) <= 0:
            raise ValueError("dark_low_profile needs finite, non-negative weights with a positive sum")
        return v

    @model_validator(mode="after")
    def _dark_rates_below_one(self) -> "ReceiverParams":
        if self.dark_low_rate + self.dark_high_rate >= 1:
            raise ValueError("dark_low_rate + dark_high_rate must be < 1")
        return self

    @property
    def has_dark(self) -> bool:
        return self.dark_low_rate > 0 or self.dark_high_rate > 0


class DisplacedMeans(BaseModel):
    """Mean photon numbers N+ and N- reaching the detector after displacement."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_plus: float = Field(ge=0, allow_inf_nan=False)
    n_minus: float = Field(ge=0, allow_inf_nan=False)


class PhotonDistribution(BaseModel):
    """Photon-number probabilities for n = 0..n_max."""

    model_config = _ARRAY_MODEL

    probabilities: np.ndarray

    @field_validator("probabilities", mode="before")
    @classmethod
    def _validate(cls, v) -> np.ndarray:
        return _check_probabilities(_readonly(v), "probabilities")

    @property
    def n_max(self) -> int:
        return self.probabilities.size - 1

    @property
    def mean(self) -> float:
        return float(np.dot(np.arange(self.probabilities.size), self.probabilities))


# --------------------------------------------------------------------------- #
# discriminator
# --------------------------------------------------------------------------- #
class Decision(str, Enum):
    """The branch a receiver assigns to an outcome."""

    PLUS = "plus"
    MINUS = "minus"


class ConditionalDistribution(BaseModel):
    """P(outcome | +alpha, beta) and P(outcome | -alpha, beta) on one shared support.

    ``labels`` default to 0..k-1 (photon numbers or score-bin indices).
    """

    model_config = _ARRAY_MODEL

    labels: np.ndarray
    p_plus: np.ndarray
    p_minus: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def _default_labels(cls, data):
        if isinstance(data, dict) and data.get("labels") is None and "p_plus" in data:
            data = {**data, "labels": np.arange(len(data["p_plus"]))}
        return data

    @field_validator("labels", mode="before")
    @classmethod
    def _labels(cls, v) -> np.ndarray:
        labels = _readonly(v, dtype=np.int64)
        if labels.ndim != 1 or np.unique(labels).size != labels.size:
            raise ValueError("labels must be a 1-D array of distinct outcomes")
        return labels

    @field_validator("p_plus", "p_minus", mode="before")
    @classmethod
    def _branch(cls, v, info) -> np.ndarray:
        return _check_probabilities(_readonly(v), info.field_name)

    @model_validator(mode="after")
    def _shared_support(self) -> "ConditionalDistribution":
        if not self.labels.size == self.p_plus.size == self.p_minus.size:
            raise ValueError("labels, p_plus and p_minus must have identical length")
        return self

    @property
    def size(self) -> int:
        return self.labels.size


# --------------------------------------------------------------------------- #
# optimizer
# --------------------------------------------------------------------------- #
class Optimum(BaseModel):
    """Displacement minimising the expected error, and that minimum."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    beta_opt: float = Field(ge=0, allow_inf_nan=False)
    p_err_min: float = Field(ge=0, le=1, allow_inf_nan=False)
    evaluations: int = Field(ge=1)

    @property
    def beta_sq(self) -> float:
        return self.beta_opt**2


# --------------------------------------------------------------------------- #
# trace_model
# --------------------------------------------------------------------------- #
class TesResponseModel(BaseModel):
    """Synthetic TES: a fixed pulse shape scaled by the absorbed energy, plus white noise.

    Time is in units of the record length, so ``dt = 1 / n_samples``. The reference pulse is a
    difference of exponentials with unit energy (sum of squares times dt equals one). When
    ``noise_rms`` is omitted it is set so one photon moves the matched-filter score by
    ``DEFAULT_SNR_PER_PHOTON`` noise standard deviations. Above ``n_sat`` photons each extra
    photon adds only ``compression`` of a photon's amplitude; ``compression = 1`` disables
    saturation.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_samples: int = Field(256, ge=8)
    tau_rise: float = Field(0.1, gt=0)
    tau_fall: float = Field(0.3, gt=0)
    gain: float = Field(1.0, gt=0, allow_inf_nan=False)
    noise_rms: float = Field(ge=0, allow_inf_nan=False)
    n_sat: float = Field(15.0, ge=1, allow_inf_nan=False)
    compression: float = Field(0.5, ge=0, le=1)

    @model_validator(mode="before")
    @classmethod
    def _default_noise(cls, data):
        if isinstance(data, dict) and data.get("noise_rms") is None:
            gain = float(data.get("gain", 1.0))
            n_samples = int(data.get("n_samples", 256))
            data = {**data, "noise_rms": gain * math.sqrt(n_samples) / DEFAULT_SNR_PER_PHOTON}
        return data

    @model_validator(mode="after")
    def _rise_before_fall(self) -> "TesResponseModel":
        if self.tau_rise >= self.tau_fall:
            raise ValueError("tau_rise must be shorter than tau_fall")
        return self

    @property
    def dt(self) -> float:
        return 1.0 / self.n_samples


class Trace(BaseModel):
    """One sampled detector voltage record."""

    model_config = _ARRAY_MODEL

    samples: np.ndarray
    dt: float = Field(gt=0, allow_inf_nan=False)

    @field_validator("samples", mode="before")
    @classmethod
    def _finite(cls, v) -> np.ndarray:
        samples = _readonly(v)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("a trace needs at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValueError("trace samples must be finite")
        return samples

    @property
    def length(self) -> int:
        return self.samples.size


class MatchedFilter(BaseModel):
    """Template V0(t) that traces are projected onto."""

    model_config = _ARRAY_MODEL

    template: np.ndarray
    dt: float = Field(gt=0, allow_inf_nan=False)

    @field_validator("template", mode="before")
    @classmethod
    def _non_zero(cls, v) -> np.ndarray:
        template = _readonly(v)
        if template.ndim != 1 or template.size == 0 or not np.all(np.isfinite(template)):
            raise ValueError("template must be a finite, non-empty 1-D array")
        if float(np.dot(template, template)) <= 0:
            raise ValueError("template is identically zero")
        return template

    @property
    def length(self) -> int:
        return self.template.size


class HistogramConfig(BaseModel):
    """Binning and smoothing used to turn training scores into conditionals."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    min_bins: int = Field(200, ge=2)
    max_bins: int = Field(4096, ge=2)
    smoothing: float = Field(0.5, ge=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _ordered(self) -> "HistogramConfig":
        if self.max_bins < self.min_bins:
            raise ValueError("max_bins must be >= min_bins")
        return self


class ScoreHistogram(BaseModel):
    """Raw per-branch counts of training scores on common bins."""

    model_config = _ARRAY_MODEL

    edges: np.ndarray
    counts_plus: np.ndarray
    counts_minus: np.ndarray

    @field_validator("edges", mode="before")
    @classmethod
    def _increasing(cls, v) -> np.ndarray:
        edges = _readonly(v)
        if edges.ndim != 1 or edges.size < 2 or not np.all(np.diff(edges) > 0):
            raise ValueError("edges must be strictly increasing with at least two entries")
        return edges

    @field_validator("counts_plus", "counts_minus", mode="before")
    @classmethod
    def _counts(cls, v, info) -> np.ndarray:
        counts = _readonly(v)
        if counts.ndim != 1 or np.any(counts < 0):
            raise ValueError(f"{info.field_name} must be non-negative")
        return counts

    @model_validator(mode="after")
    def _aligned(self) -> "ScoreHistogram":
        n_bins = self.edges.size - 1
        if self.counts_plus.size != n_bins or self.counts_minus.size != n_bins:
            raise ValueError("counts must have one entry per bin")
        return self

    @property
    def n_bins(self) -> int:
        return self.edges.size - 1

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


# --------------------------------------------------------------------------- #
# experiment
# --------------------------------------------------------------------------- #
# Fields that only make sense when traces are simulated.
TRACE_ONLY_FIELDS = (
    "tes",
    "histogram",
    "score_method",
    "filter_traces",
    "filter_mean_photons",
    "histogram_dir",
)


class ExperimentConfig(BaseModel):
    """Everything a Monte Carlo run depends on. The seed is mandatory.

    ``beta_mode='optimize'`` uses the displacement minimising the expected ideal-counter error;
    ``'fixed'`` uses ``beta_sq``. ``alpha_sq_grid`` / ``beta_grid`` turn a config-file run into
    an intensity sweep or a relative-displacement sweep. ``training_trials`` is per branch and
    only used in trace mode.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha_sq: float = Field(1.5, ge=0, allow_inf_nan=False)
    alpha_sq_grid: Optional[List[float]] = None
    beta_mode: BetaMode = "optimize"
    beta_sq: Optional[float] = Field(None, ge=0, allow_inf_nan=False)
    beta_grid: Optional[List[float]] = None
    params: ReceiverParams = Field(default_factory=ReceiverParams)
    mode: DetectorMode = "ideal"
    tes: Optional[TesResponseModel] = None
    histogram: Optional[HistogramConfig] = None
    score_method: Optional[ScoreMethod] = None
    filter_traces: Optional[int] = Field(None, ge=1)
    filter_mean_photons: Optional[float] = Field(None, gt=0, allow_inf_nan=False)
    histogram_dir: Optional[Path] = None
    training_trials: int = Field(1_000_000, ge=1)
    evaluation_trials: int = Field(1_000_000, ge=1)
    seed: int = Field(ge=0, lt=2**64)
    workers: int = Field(1, ge=1)
    chunk_trials: int = Field(50_000, ge=1)
    out: Optional[Path] = None
    format: OutputFormat = "csv"

    @field_validator("alpha_sq_grid")
    @classmethod
    def _intensity_grid(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None and (not v or any(not math.isfinite(x) or x < 0 for x in v)):
            raise ValueError("alpha_sq_grid must be a non-empty list of finite values >= 0")
        return v

    @field_validator("beta_grid")
    @classmethod
    def _relative_grid(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None and (not v or any(not math.isfinite(x) or x <= 0 for x in v)):
            raise ValueError("beta_grid must be a non-empty list of finite multipliers > 0")
        return v

    @model_validator(mode="after")
    def _consistent(self) -> "ExperimentConfig":
        if self.beta_mode == "fixed" and self.beta_sq is None:
            raise ConfigError("beta_mode 'fixed' needs beta_sq")
        if self.beta_mode == "optimize" and self.beta_sq is not None:
            raise ConfigError("beta_sq is given but beta_mode is 'optimize'")
        if self.alpha_sq_grid is not None and self.beta_grid is not None:
            raise ConfigError("alpha_sq_grid and beta_grid are mutually exclusive")
        if self.mode == "ideal":
            given = [f for f in TRACE_ONLY_FIELDS if getattr(self, f) is not None]
            if given:
                raise ConfigError(f"trace-model settings given in ideal mode: {', '.join(given)}")
        return self

    # Trace-mode settings with their defaults filled in.
    @property
    def tes_model(self) -> TesResponseModel:
        return self.tes or TesResponseModel()

    @property
    def histogram_config(self) -> HistogramConfig:
        return self.histogram or HistogramConfig()

    @property
    def trace_score_method(self) -> ScoreMethod:
        return self.score_method or "matched"

    @property
    def matched_filter_traces(self) -> int:
        return self.filter_traces or 10_000

    @property
    def matched_filter_mean_photons(self) -> float:
        return self.filter_mean_photons or 3.0


class ExperimentResult(BaseModel):
    """Outcome of one Monte Carlo run at a single (alpha, beta).

    ``p_err_stderr`` is the counting-statistics standard error sqrt(p(1-p)/N); when no errors
    were observed it is the Clopper-Pearson 95% upper bound instead. ``p_sql`` and
    ``p_helstrom`` are evaluated at the efficiency-rescaled intensity ``alpha_sq_rescaled``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha_sq: float
    alpha_sq_rescaled: float
    beta_sq: float
    beta_relative: Optional[float] = None
    p_err: float = Field(ge=0, le=1)
    p_err_stderr: float = Field(ge=0)
    p_err_analytic: float = Field(ge=0, le=1)
    errors: int = Field(ge=0)
    trials: int = Field(ge=1)
    p_sql: float
    p_helstrom: float
    improvement_db: Optional[float] = None
    mode: DetectorMode
    seed: int


class CurvePoint(BaseModel):
    """One point of the analytic ideal-counter curve against the SQL.

    ``improvement_db_low`` / ``_high`` bracket the improvement over the efficiency
    uncertainty interval used for the SQL rescaling.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha_sq: float
    alpha_sq_rescaled: float
    beta_sq: float
    p_err: float
    p_sql: float
    p_helstrom: float
    improvement_db: Optional[float] = None
    improvement_db_low: Optional[float] = None
    improvement_db_high: Optional[float] = None
    with_dark: bool = False
