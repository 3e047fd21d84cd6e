"""Attack simulations estimating re-identification and disclosure risk.

Three adversarial games are played against the synthetic table: singling
out (crafting predicates that isolate one record), linkability (joining
two disjoint auxiliary views through nearest neighbors), and attribute
inference (guessing a secret column from auxiliary columns).  Success
rates come back as Wilson-interval risk estimates.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.stats

from .tabular import (
    CATEGORICAL,
    DEFAULT_BINS,
    NUMERIC,
    Dataset,
    encode_aligned,
    normalize,
    pairwise_mixed_distances,
)

SINGLING_OUT_MODES = ("univariate", "multivariate")
# Draw budget per multivariate trial before the trial is abandoned.
_MAX_PREDICATE_TRIES = 100


def wilson_interval(
    successes: int, trials: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion, clamped to [0, 1].

    The boundary cases (0 or all successes) are returned exactly, since
    the score interval provably touches 0 and 1 there.
    """
    if trials < 1:
        raise ValueError("wilson_interval needs at least one trial")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes {successes} outside [0, {trials}]")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    z = float(scipy.stats.norm.ppf(0.5 * (1.0 + confidence)))
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials))
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == trials else min(1.0, center + half)
    return low, high


@dataclass(frozen=True)
class RiskEstimate:
    """Attack success rate with its confidence interval.

    ``n_attacks`` counts the attacks actually carried out; zero means no
    attack could be generated, in which case the interval is vacuous
    (0, 1).
    """

    risk: float
    ci_low: float
    ci_high: float
    n_attacks: int
    n_success: int
    confidence: float = 0.95

    def __post_init__(self) -> None:
        if not 0 <= self.n_success <= max(self.n_attacks, 0):
            raise ValueError("n_success must lie in [0, n_attacks]")
        if not self.ci_low <= self.risk <= self.ci_high:
            raise ValueError("confidence interval must bracket the risk")

    def to_dict(self) -> dict:
        return {
            "risk": self.risk,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "n_attacks": self.n_attacks,
            "n_success": self.n_success,
            "confidence": self.confidence,
        }


def _estimate(successes: int, trials: int, confidence: float) -> RiskEstimate:
    if trials == 0:
        return RiskEstimate(0.0, 0.0, 1.0, 0, 0, confidence)
    low, high = wilson_interval(successes, trials, confidence)
    return RiskEstimate(successes / trials, low, high, trials, successes, confidence)


@dataclass(frozen=True)
class AuxSplit:
    """Two disjoint auxiliary column views available to the linker."""

    side_a: tuple[str, ...]
    side_b: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "side_a", tuple(self.side_a))
        object.__setattr__(self, "side_b", tuple(self.side_b))
        if not self.side_a or not self.side_b:
            raise ValueError("both auxiliary sides must be non-empty")
        overlap = set(self.side_a) & set(self.side_b)
        if overlap:
            raise ValueError(f"auxiliary sides overlap on {sorted(overlap)}")


# -------------------------------------------------------------- predicates
#
# A predicate is a tuple of conditions; a condition is ("eq"|"le"|"ge",
# column, value) or ("near", column, center, half_width).


def _match_mask(dataset: Dataset, conditions) -> np.ndarray:
    mask = np.ones(dataset.n_rows, dtype=bool)
    for cond in conditions:
        op, name = cond[0], cond[1]
        col = dataset.column(name)
        if op == "eq":
            mask &= col == cond[2]
        elif op == "le":
            mask &= col <= cond[2]
        elif op == "ge":
            mask &= col >= cond[2]
        elif op == "near":
            mask &= np.abs(col - cond[2]) <= cond[3]
        else:  # pragma: no cover - internal invariant
            raise ValueError(f"unknown predicate op {op!r}")
    return mask


def _matches_exactly_one(dataset: Dataset, conditions) -> bool:
    return int(_match_mask(dataset, conditions).sum()) == 1


def _univariate_candidates(synthetic: Dataset) -> list[tuple]:
    """Deterministic pool of single-column predicates that isolate one
    synthetic record: equalities on once-occurring values plus extreme
    bounds when the extreme itself is unique.  Columns are interleaved
    round-robin so early columns do not crowd out the rest.
    """
    per_column: list[list[tuple]] = []
    for spec in synthetic.schema:
        col = synthetic.column(spec.name)
        values, counts = np.unique(col, return_counts=True)
        cands: list[tuple] = [("eq", spec.name, v) for v in values[counts == 1]]
        if spec.kind == NUMERIC and values.size > 1:
            if counts[0] == 1:
                cands.append(("le", spec.name, values[0]))
            if counts[-1] == 1:
                cands.append(("ge", spec.name, values[-1]))
        per_column.append(cands)
    pool: list[tuple] = []
    for tier in itertools.zip_longest(*per_column):
        pool.extend((cond,) for cond in tier if cond is not None)
    return pool


def _multivariate_predicates(
    synthetic: Dataset, n_attacks: int, seed: int, bins: int
) -> list[tuple]:
    """Sampled conjunctions of 2-4 column conditions, each retained only
    if it matches exactly one synthetic record.  Numeric conditions are
    intervals around a sampled record's value with half-width of one
    bin of the observed synthetic range.
    """
    schema = synthetic.schema
    names = schema.names
    halves = {}
    for spec in schema:
        if spec.kind == NUMERIC:
            col = synthetic.column(spec.name)
            halves[spec.name] = float(col.max() - col.min()) / bins
    predicates: list[tuple] = []
    for child in np.random.SeedSequence(seed).spawn(n_attacks):
        rng = np.random.default_rng(child)
        for _ in range(_MAX_PREDICATE_TRIES):
            width = min(int(rng.integers(2, 5)), len(names))
            chosen = rng.choice(len(names), size=width, replace=False)
            row = synthetic.row(int(rng.integers(synthetic.n_rows)))
            conditions = []
            for idx in sorted(chosen):
                name = names[idx]
                value = row[idx]
                if schema[name].kind == CATEGORICAL:
                    conditions.append(("eq", name, value))
                else:
                    conditions.append(("near", name, float(value), halves[name]))
            conditions = tuple(conditions)
            if _matches_exactly_one(synthetic, conditions):
                predicates.append(conditions)
                break
    return predicates


def singling_out_risk(
    original: Dataset,
    synthetic: Dataset,
    n_attacks: int = 500,
    mode: str = "multivariate",
    *,
    seed: int,
    bins: int = DEFAULT_BINS,
    confidence: float = 0.95,
) -> RiskEstimate:
    """Risk that a predicate isolating one synthetic record also isolates
    exactly one original record.

    Univariate mode enumerates its candidate pool deterministically (the
    seed only matters for multivariate conjunction sampling); it probes
    marginal distributions only, so it cannot distinguish per-column
    shuffles of the original.
    """
    if n_attacks < 1:
        raise ValueError("n_attacks must be at least 1")
    if mode not in SINGLING_OUT_MODES:
        raise ValueError(f"mode must be one of {SINGLING_OUT_MODES}")
    synthetic.validate_against(original.schema)
    if mode == "univariate":
        predicates = _univariate_candidates(synthetic)[:n_attacks]
    else:
        predicates = _multivariate_predicates(synthetic, n_attacks, seed, bins)
    if not predicates:
        warnings.warn("no singling-out predicate could be generated; risk reported as 0")
        return _estimate(0, 0, confidence)
    successes = sum(_matches_exactly_one(original, p) for p in predicates)
    return _estimate(successes, len(predicates), confidence)


# ------------------------------------------------------- neighbor attacks


def _check_columns(dataset: Dataset, names: Sequence[str], label: str) -> None:
    missing = [n for n in names if n not in dataset.schema.names]
    if missing:
        raise ValueError(f"{label} columns missing from dataset: {missing}")


def _cross_distance_matrix(
    original: Dataset, synthetic: Dataset, columns: Sequence[str], targets: np.ndarray
) -> np.ndarray:
    """Mixed distances from the selected original rows to every synthetic
    row, using only the given columns."""
    sub_o = original.select(columns).take(targets)
    sub_s = synthetic.select(columns)
    mat_o, mat_s, is_cat = encode_aligned(sub_o, sub_s)
    return pairwise_mixed_distances(mat_o, mat_s, is_cat)


def _nearest_sets(distances: np.ndarray, k: int) -> np.ndarray:
    # stable sort keeps ties in index order, making the result
    # deterministic and prefix-monotone in k
    return np.argsort(distances, axis=1, kind="stable")[:, :k]


def _sample_targets(n_rows: int, n_attacks: int, seed: int, label: str) -> tuple[np.ndarray, int]:
    if n_attacks < 1:
        raise ValueError("n_attacks must be at least 1")
    if n_attacks > n_rows:
        warnings.warn(
            f"{label}: n_attacks lowered from {n_attacks} to the {n_rows} available records"
        )
        n_attacks = n_rows
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return rng.choice(n_rows, size=n_attacks, replace=False), n_attacks


def linkability_risk(
    original: Dataset,
    synthetic: Dataset,
    aux: AuxSplit,
    n_attacks: int = 500,
    n_neighbors: int = 1,
    *,
    seed: int,
    confidence: float = 0.95,
) -> RiskEstimate:
    """Risk that the two auxiliary views of an original record retrieve
    overlapping nearest-neighbor sets in the synthetic table.

    Distances are mixed record distances on data normalized to the
    original's ranges.
    """
    for ds, label in ((original, "original"), (synthetic, "synthetic")):
        _check_columns(ds, aux.side_a + aux.side_b, f"{label} auxiliary")
    if n_neighbors < 1:
        raise ValueError("n_neighbors must be at least 1")
    if n_neighbors > synthetic.n_rows:
        raise ValueError(
            f"n_neighbors {n_neighbors} exceeds the {synthetic.n_rows} synthetic records"
        )
    targets, n_attacks = _sample_targets(original.n_rows, n_attacks, seed, "linkability")
    norm_o = normalize(original, original.schema)
    norm_s = normalize(synthetic, original.schema)
    sets_a = _nearest_sets(
        _cross_distance_matrix(norm_o, norm_s, aux.side_a, targets), n_neighbors
    )
    sets_b = _nearest_sets(
        _cross_distance_matrix(norm_o, norm_s, aux.side_b, targets), n_neighbors
    )
    hits = (sets_a[:, :, None] == sets_b[:, None, :]).any(axis=(1, 2))
    return _estimate(int(hits.sum()), n_attacks, confidence)


def inference_risk(
    original: Dataset,
    synthetic: Dataset,
    aux_columns: Sequence[str],
    secret: str,
    n_attacks: int = 500,
    *,
    seed: int,
    tolerance: float = 0.05,
    confidence: float = 0.95,
) -> RiskEstimate:
    """Risk that the nearest synthetic record under the auxiliary columns
    reveals an original record's secret attribute.

    Categorical secrets must match exactly; numeric secrets count as
    disclosed within ``tolerance`` of the normalized range.
    """
    aux_columns = list(aux_columns)
    if not aux_columns:
        raise ValueError("aux_columns must be non-empty")
    if secret in aux_columns:
        raise ValueError(f"secret column {secret!r} must not be auxiliary")
    for ds, label in ((original, "original"), (synthetic, "synthetic")):
        _check_columns(ds, aux_columns + [secret], f"{label} inference")
    targets, n_attacks = _sample_targets(original.n_rows, n_attacks, seed, "inference")
    norm_o = normalize(original, original.schema)
    norm_s = normalize(synthetic, original.schema)
    distances = _cross_distance_matrix(norm_o, norm_s, aux_columns, targets)
    nearest = distances.argmin(axis=1)
    guesses = norm_s.column(secret)[nearest]
    truths = norm_o.column(secret)[targets]
    if original.schema[secret].kind == CATEGORICAL:
        successes = int((guesses == truths).sum())
    else:
        successes = int((np.abs(guesses - truths) <= tolerance).sum())
    return _estimate(successes, n_attacks, confidence)
