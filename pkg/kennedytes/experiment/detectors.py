"""Detector backends for the Monte Carlo harness.

A detector turns absorbed photon numbers into discrete outcomes and holds the frozen MAP
decision for each outcome. ``IdealCounter`` reports the photon number itself and decides on the
analytic conditionals; ``TraceDetector`` simulates TES traces, scores them, and decides on
histogram conditionals learned from an independent training set.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np

from ..discriminator import decision_table, ideal_counter_distribution
from ..models import (
    ConditionalDistribution,
    ExperimentConfig,
    HistogramConfig,
    MatchedFilter,
    ReceiverParams,
    ScoreHistogram,
    ScoreMethod,
    TesResponseModel,
)
from ..photon_statistics import PhotonSource
from ..trace_model import (
    DEFAULT_BATCH,
    build_histogram,
    histogram_conditional,
    locate_bins,
    pulse_template,
    score_traces,
    simulate_traces,
    trace_height,
)
from .parallel import PHASE_FILTER, PHASE_TRAIN_MINUS, PHASE_TRAIN_PLUS, RunPlan, stream

log = logging.getLogger(__name__)


class Detector(ABC):
    """Maps photon numbers to outcome indices and decides each outcome by MAP."""

    decisions: Optional[np.ndarray] = None

    @abstractmethod
    def train(self, source: PhotonSource, plan: RunPlan) -> None:
        """Fix ``decisions`` (True = plus) for every outcome index."""

    @abstractmethod
    def outcomes(self, photons: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Outcome index observed for each absorbed photon number."""

    @property
    @abstractmethod
    def name(self) -> str: ...

    def count_errors(
        self, plus: np.ndarray, photons: np.ndarray, rng: np.random.Generator
    ) -> int:
        if self.decisions is None:
            raise RuntimeError(f"{self.name} detector used before training")
        decided_plus = self.decisions[self.outcomes(photons, rng)]
        return int(np.count_nonzero(decided_plus != plus))


class IdealCounter(Detector):
    """Perfect photon-number resolution, deciding on the analytic conditionals."""

    def __init__(self, alpha: float, beta: float, params: ReceiverParams):
        self.alpha = alpha
        self.beta = beta
        self.params = params
        self.conditional: Optional[ConditionalDistribution] = None

    @classmethod
    def from_config(cls, config: ExperimentConfig, alpha: float, beta: float) -> "IdealCounter":
        return cls(alpha, beta, config.params)

    def train(self, source: PhotonSource, plan: RunPlan) -> None:
        self.conditional = ideal_counter_distribution(
            self.alpha, self.beta, self.params, with_dark=self.params.has_dark
        )
        self.decisions = decision_table(self.conditional)

    def outcomes(self, photons: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        # Counts beyond the truncated support fall into its last (nearest) bin.
        return np.minimum(photons, self.decisions.size - 1)

    @property
    def name(self) -> str:
        return "ideal"


def _training_scores(task) -> np.ndarray:
    detector, source, plus, n, seed, key = task
    rng = stream(seed, key)
    photons = source.sample(np.full(n, plus), rng)
    return detector.scores(photons, rng)


class TraceDetector(Detector):
    """Simulated TES traces reduced to scalar scores and decided on score histograms."""

    def __init__(
        self,
        model: TesResponseModel,
        histogram: HistogramConfig,
        score_method: ScoreMethod = "matched",
        filter_traces: int = 10_000,
        filter_mean_photons: float = 3.0,
        training_trials: int = 1_000_000,
    ):
        self.model = model
        self.histogram_config = histogram
        self.score_method = score_method
        self.filter_traces = filter_traces
        self.filter_mean_photons = filter_mean_photons
        self.training_trials = training_trials
        self.template = pulse_template(model)
        self.filter: Optional[MatchedFilter] = None
        self.histogram: Optional[ScoreHistogram] = None
        self.conditional: Optional[ConditionalDistribution] = None

    @classmethod
    def from_config(cls, config: ExperimentConfig, alpha: float, beta: float) -> "TraceDetector":
        return cls(
            config.tes_model,
            config.histogram_config,
            score_method=config.trace_score_method,
            filter_traces=config.matched_filter_traces,
            filter_mean_photons=config.matched_filter_mean_photons,
            training_trials=config.training_trials,
        )

    def build_filter(self, rng: np.random.Generator) -> MatchedFilter:
        """Pointwise mean of traces from a weak Poissonian signal, not rescaled."""
        total = np.zeros(self.model.n_samples)
        for start in range(0, self.filter_traces, DEFAULT_BATCH):
            k = min(DEFAULT_BATCH, self.filter_traces - start)
            photons = rng.poisson(self.filter_mean_photons, size=k)
            total += simulate_traces(photons, self.model, rng, self.template).sum(axis=0)
        return MatchedFilter(template=total / self.filter_traces, dt=self.model.dt)

    def scores(self, photons: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        out = np.empty(photons.size)
        for start in range(0, photons.size, DEFAULT_BATCH):
            batch = photons[start : start + DEFAULT_BATCH]
            samples = simulate_traces(batch, self.model, rng, self.template)
            if self.score_method == "height":
                out[start : start + batch.size] = trace_height(samples)
            else:
                out[start : start + batch.size] = score_traces(samples, self.filter)
        return out

    def _branch_scores(self, source: PhotonSource, plan: RunPlan, plus: bool) -> np.ndarray:
        phase = PHASE_TRAIN_PLUS if plus else PHASE_TRAIN_MINUS
        tasks = [
            (self, source, plus, n, plan.seed, plan.key(phase, i))
            for i, n in enumerate(plan.chunks(self.training_trials))
        ]
        return np.concatenate(plan.map(_training_scores, tasks))

    def train(self, source: PhotonSource, plan: RunPlan) -> None:
        if self.score_method == "matched":
            self.filter = self.build_filter(plan.stream(PHASE_FILTER))
        scores_plus = self._branch_scores(source, plan, plus=True)
        scores_minus = self._branch_scores(source, plan, plus=False)
        self.histogram = build_histogram(scores_plus, scores_minus, self.histogram_config)
        self.conditional = histogram_conditional(self.histogram, self.histogram_config.smoothing)
        self.decisions = decision_table(self.conditional)
        log.info(
            "trained %s detector on %d scores per branch, %d bins",
            self.score_method,
            self.training_trials,
            self.histogram.n_bins,
        )

    def outcomes(self, photons: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        scores = self.scores(photons, rng)
        outside = np.count_nonzero(
            (scores < self.histogram.edges[0]) | (scores > self.histogram.edges[-1])
        )
        if outside:
            log.debug("%d scores outside the trained range, assigned to the nearest bin", outside)
        return locate_bins(self.histogram, scores)

    @property
    def name(self) -> str:
        return f"trace:{self.score_method}"


_DETECTORS = {
    "ideal": IdealCounter,
    "trace": TraceDetector,
}


def get_detector(
    mode: str, config: ExperimentConfig, alpha: float, beta: float
) -> Detector:
    """Factory keyed by detector mode (``ideal`` or ``trace``)."""
    if mode not in _DETECTORS:
        raise ValueError(f"Unknown detector mode '{mode}'. Choose from: {', '.join(_DETECTORS)}")
    return _DETECTORS[mode].from_config(config, alpha, beta)


def detector_modes() -> Tuple[str, ...]:
    return tuple(_DETECTORS)
