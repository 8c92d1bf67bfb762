"""Shot-based Monte-Carlo estimation of the convolution of an expectation
value with a shift rule: a +-1 shot oracle plus the two samplers (plain and
parameter-folded). Sampling is grouped by atom: the atom counts are drawn
from one multinomial and each atom's shots from a binomial, which is
distributionally identical to per-shot sampling at O(atoms) cost."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpectrumError
from .linalg import Rng
from .measures import AtomicMeasure, FoldingMap
from .model import ModelInstance, expectation, expectation_batch

PM_ONE_TOL = 1e-9


@dataclass
class EstimateReport:
    """Monte-Carlo estimate with shot count, spread, and the magnitudes of the
    parameter values at which the oracle was queried."""

    mean: float
    empirical_variance: float
    shots: int
    max_mopv: float
    mean_mopv: float

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "variance": self.empirical_variance,
            "shots": self.shots,
            "max_mopv": self.max_mopv,
            "mean_mopv": self.mean_mopv,
        }


class ShotOracle:
    """Independent +-1 draws with mean f(s), for observables with +-1 spectrum.

    Simulated by computing the exact expectation and sampling the Bernoulli
    marginal, which is all that a +-1 observable exposes.
    """

    def __init__(self, model: ModelInstance, rng: Rng):
        eigs = np.linalg.eigvalsh(model.m)
        if np.max(np.abs(np.abs(eigs) - 1.0)) > PM_ONE_TOL:
            raise SpectrumError("shot oracle requires an observable with eigenvalues in {-1,+1}")
        self.model = model
        self.rng = rng

    def shot(self, s: float) -> int:
        """One +-1 draw with mean f(s)."""
        return self.draws_at_value(expectation(self.model, s), 1)[0]

    def draws_at_value(self, value: float, n: int) -> np.ndarray:
        """n independent +-1 draws with the given mean (clipped into [-1,1])."""
        p = min(1.0, max(0.0, 0.5 * (1.0 + value)))
        plus = self.rng.generator.binomial(n, p)
        return np.concatenate([np.ones(plus, dtype=int), -np.ones(n - plus, dtype=int)])

    def plus_counts(self, values: np.ndarray, counts: np.ndarray) -> np.ndarray:
        """For each value with its shot count, the number of +1 outcomes."""
        p = np.clip(0.5 * (1.0 + values), 0.0, 1.0)
        return self.rng.generator.binomial(counts, p)


def _grouped_estimate(
    oracle: ShotOracle, m: AtomicMeasure, queries: np.ndarray, shots: int
) -> EstimateReport:
    norm = m.norm()
    probs = np.abs(m.weights) / norm
    signs = np.sign(m.weights)
    counts = oracle.rng.generator.multinomial(shots, probs)
    active = counts > 0
    f_vals = np.zeros(len(m))
    f_vals[active] = expectation_batch(oracle.model, queries[active])
    plus = np.zeros(len(m), dtype=np.int64)
    plus[active] = oracle.plus_counts(f_vals[active], counts[active])
    # per-trial values are sign_j * F * ||m||, so each trial contributes +-||m||
    total = norm * float(np.sum(signs * (2 * plus - counts)))
    mean = total / shots
    if shots > 1:
        empirical_variance = (shots * norm * norm - shots * mean * mean) / (shots - 1)
    else:
        empirical_variance = 0.0
    mags = np.abs(queries)
    return EstimateReport(
        mean=mean,
        empirical_variance=float(empirical_variance),
        shots=shots,
        max_mopv=float(np.max(mags[active])),
        mean_mopv=float(np.sum(counts * mags) / shots),
    )


def obvious_estimate(oracle: ShotOracle, m: AtomicMeasure, x: float, shots: int) -> EstimateReport:
    """Unbiased estimator of (f * m)(x): sample an atom with probability
    |u_j|/||m||, query the oracle at x - s_j, return shot * sign(u_j) * ||m||."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    return _grouped_estimate(oracle, m, x - m.shifts, shots)


def folding_estimate(
    oracle: ShotOracle, m: AtomicMeasure, fold: FoldingMap, x: float, shots: int
) -> EstimateReport:
    """As obvious_estimate, but the oracle is queried at fold(x - s_j), so
    every queried parameter value lies in the image of the folding map."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    return _grouped_estimate(oracle, m, np.asarray(fold(x - m.shifts), dtype=float), shots)
