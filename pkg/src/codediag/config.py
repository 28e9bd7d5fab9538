"""Engine configuration: every tunable constant lives here, in one place.

Values can be overridden from a JSON file (``EngineConfig.from_file``) or by
CLI flags; defaults below are the documented baseline used by the test suite.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List


def _default_emotion_factors() -> Dict[str, float]:
    return {
        "Neutral": 1.0,
        "Happy": 1.0,
        "Boredom": 0.8,
        "Sad": 0.8,
        "Anger": 0.7,
        "Fear": 0.7,
        "Disgust": 0.7,
    }


def _default_link_factors() -> Dict[str, float]:
    return {"synonym": 1.0, "homonym": 0.7, "abstraction": 0.5}


@dataclass
class EngineConfig:
    # interpreter
    step_limit: int = 100_000
    float_tolerance: float = 1e-9

    # variable mapping similarity blend (type / usage signature / trace values)
    map_weight_type: float = 0.4
    map_weight_usage: float = 0.3
    map_weight_trace: float = 0.3
    map_min_pair_score: float = 0.35

    # student-model priors and rates
    recall_prior: float = 0.3
    learn_rate: float = 0.2
    slip: float = 0.1
    guess: float = 0.2
    emotion_factors: Dict[str, float] = field(default_factory=_default_emotion_factors)
    social_floor: float = 0.5  # social modifier = floor + (1-floor)*participation

    # adjustment model: logistic blend, one intercept per DSim bucket
    adjustment_weights: Dict[str, float] = field(
        default_factory=lambda: {"recall": 2.0, "dsim": 2.0, "imp": 2.0}
    )
    adjustment_bias: Dict[str, float] = field(
        default_factory=lambda: {"low": -3.2, "mid": -3.0, "high": -2.8}
    )
    dsim_high: float = 0.75
    dsim_low: float = 0.4

    # trace-capacity accumulation
    psi_gain: float = 0.1
    psi_tau_seconds: float = 300.0

    # classifier
    severity_increment: float = 0.25
    prerequisite_topics: List[str] = field(
        default_factory=lambda: ["ascii-codes", "format-descriptors", "binary-representation"]
    )
    stuck_max_statements: int = 1  # executable statements at or below this => stuck-at-start

    # dialog
    alpha: float = 1.0
    beta: float = 0.5
    transition_weight: float = 0.25
    likelihood_lambda: float = 0.1
    mutation_threshold: float = 0.5
    link_factors: Dict[str, float] = field(default_factory=_default_link_factors)
    max_iteration: int = 20
    resolve_epsilon: float = 0.05
    stability_epsilon: float = 1e-3
    stability_window: int = 3
    max_candidate_profiles: int = 120
    cross_concept_distance: int = 3

    # transition matrices
    transition_smoothing: float = 1.0

    # ingestion
    sampling_period_seconds: int = 120

    def merged(self, overrides: Dict) -> "EngineConfig":
        """Return a copy with the given key/value overrides applied."""
        known = {f.name for f in dataclasses.fields(self)}
        bad = sorted(set(overrides) - known)
        if bad:
            raise KeyError(f"unknown config keys: {', '.join(bad)}")
        return dataclasses.replace(self, **overrides)

    @classmethod
    def from_file(cls, path: str | Path) -> "EngineConfig":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return cls().merged(data)

    def to_dict(self) -> Dict:
        return dataclasses.asdict(self)


DEFAULT_CONFIG = EngineConfig()
