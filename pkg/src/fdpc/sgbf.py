"""Syndrome-guided bit flipping.

A failed decode leaves behind two useful artifacts: the posterior LLRs and
the set of unsatisfied checks.  Positions that are both low-confidence and
implicated in many failed checks are the prime suspects.  This module ranks
them, then retries the decode with one suspect's channel LLR sign-flipped at
a time, keeping the first retry whose syndrome comes out clean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BinaryMatrix
from .lnms import DecodeOutcome, DecoderConfig, batch_row_outcome, decode, decode_many


@dataclass(frozen=True)
class SgbfConfig:
    """Flip budget T and evaluation strategy.

    With evaluate_all set, every candidate is scored in one batched decode
    and the lowest-weight one wins (ties go to the earlier candidate).
    Otherwise candidates run one at a time and the search stops at the first
    clean syndrome.  Both strategies select the same winner; evaluate_all
    additionally fills in every candidate's weight.
    """

    T: int
    evaluate_all: bool = True

    def __post_init__(self):
        if self.T < 1:
            raise ValueError(f"flip budget must be at least 1, got {self.T}")


@dataclass(frozen=True)
class ReliabilityReport:
    failure_counts: np.ndarray
    reliabilities: np.ndarray
    flip_positions: np.ndarray


@dataclass(frozen=True)
class SgbfOutcome:
    """final is the adopted decode: the winning candidate's when rescued,
    otherwise the original outcome object untouched.  candidate_weights[t]
    is candidate t's syndrome weight, -1 where the lazy path never got
    that far."""

    final: DecodeOutcome
    rescued: bool
    chosen_flip: int | None
    candidate_weights: np.ndarray


def failure_counts(H: BinaryMatrix, syndrome: np.ndarray) -> np.ndarray:
    """Per-variable count of unsatisfied checks it participates in."""
    counts = np.zeros(H.cols, dtype=np.int64)
    for j in np.flatnonzero(syndrome):
        counts[H.row_support[j]] += 1
    return counts


def reliability(posterior_llr: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Posterior magnitude discounted by failed-check involvement.

    The denominator is 1 + max(count, 1), so even a variable with no failed
    checks is scored at half its magnitude; this keeps the scale comparable
    across variables instead of exempting the untouched ones.
    """
    return np.abs(posterior_llr) / (1.0 + np.maximum(counts, 1))


def select_flip_set(reliabilities: np.ndarray, T: int) -> np.ndarray:
    """Indices of the T least reliable positions, ties broken by index."""
    return np.argsort(reliabilities, kind="stable")[:T]


def build_report(H: BinaryMatrix, outcome: DecodeOutcome, T: int) -> ReliabilityReport:
    counts = failure_counts(H, outcome.syndrome)
    rel = reliability(outcome.posterior_llr, counts)
    return ReliabilityReport(counts, rel, select_flip_set(rel, T))


def run_sgbf(
    original: DecodeOutcome,
    channel_llr: np.ndarray,
    H: BinaryMatrix,
    decoder_config: DecoderConfig,
    sgbf_config: SgbfConfig,
) -> SgbfOutcome:
    """Retry a failed decode with single-position sign flips.

    Returns the first candidate (in reliability order) that converges to a
    zero syndrome; if none does, the original outcome is returned unchanged.
    """
    if original.syndrome_weight == 0:
        raise ValueError("post-processing a converged decode makes no sense")
    T = sgbf_config.T
    if T > H.cols:
        raise ValueError(f"flip budget {T} exceeds block length {H.cols}")

    report = build_report(H, original, T)
    flips = report.flip_positions
    weights = np.full(T, -1, dtype=np.int64)

    if sgbf_config.evaluate_all:
        candidates = np.tile(np.asarray(channel_llr, dtype=np.float64), (T, 1))
        candidates[np.arange(T), flips] *= -1.0
        batch = decode_many(candidates, H, decoder_config)
        weights[:] = batch.syndrome_weight
        t_star = int(np.argmin(weights))
        if weights[t_star] == 0:
            return SgbfOutcome(
                final=batch_row_outcome(batch, t_star, H),
                rescued=True,
                chosen_flip=int(flips[t_star]),
                candidate_weights=weights,
            )
        return SgbfOutcome(original, False, None, weights)

    base = np.asarray(channel_llr, dtype=np.float64)
    for t in range(T):
        candidate = base.copy()
        candidate[flips[t]] *= -1.0
        outcome = decode(candidate, H, decoder_config)
        weights[t] = outcome.syndrome_weight
        if outcome.syndrome_weight == 0:
            return SgbfOutcome(outcome, True, int(flips[t]), weights)
    return SgbfOutcome(original, False, None, weights)
