"""Distance- and uniqueness-based privacy metrics.

Five complementary views of how close synthetic records sit to the
original table they were trained on:

* ``disco`` — share of original records whose quasi-identifier
  combination, looked up in the synthetic data, discloses their true
  target value (all synthetic records sharing the combination agree on
  a single target that matches).  Higher means more disclosure.
* ``rep_u`` — share of original records whose quasi-identifier
  combination is unique in both tables (replicated uniques).
* ``nndr`` — mean ratio of nearest to second-nearest original-record
  distance per synthetic record.  Near 0 flags verbatim copying.
* ``dcr`` — mean distance of each synthetic record to its closest
  original record.
* ``nnaa`` — nearest-neighbor adversarial accuracy: how well a
  nearest-neighbor rule distinguishes real from synthetic.  0.5 is the
  indistinguishable ideal, 0 means memorization.

The neighbor searches are exact full scans (chunked for memory), never
approximate.  Distance metrics expect numeric columns on a comparable
scale; the report helper normalizes both tables to the original's
ranges before scanning.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from syntab.tabular import (
    DEFAULT_BINS,
    Dataset,
    Schema,
    discretize,
    encode_aligned,
    normalize,
    pairwise_mixed_distances,
    sample_rows,
)

_CHUNK = 1024


def _grouping_cells(dataset: Dataset, names: Sequence[str], reference: Schema, bins: int):
    """Per-row tuples of group labels; numeric columns binned on the reference range."""
    columns = []
    for name in names:
        ref_spec = reference[name]
        values = dataset.column(name)
        if ref_spec.is_numeric:
            columns.append(discretize(values, ref_spec, bins))
        else:
            columns.append(values)
    return list(zip(*columns)) if columns else [()] * dataset.n_rows


def _check_key_columns(original: Dataset, synthetic: Dataset, keys: Sequence[str]) -> None:
    if not keys:
        raise ValueError("need at least one key column")
    for name in keys:
        original.schema[name]
        synthetic.schema[name]


def disco(
    original: Dataset,
    synthetic: Dataset,
    keys: Sequence[str],
    target: str,
    *,
    bins: int = DEFAULT_BINS,
) -> float:
    """Disclosive-synthetic-correct-original score, in percent.

    A key combination q is disclosive when every synthetic record with q
    carries one single target value; an original record scores when its
    own target equals that value.  Numeric keys and targets are binned
    (equal-width, original's range) before grouping.
    """
    _check_key_columns(original, synthetic, keys)
    if target in keys:
        raise ValueError("target column cannot also be a key")
    original.schema[target]

    reference = original.schema
    syn_keys = _grouping_cells(synthetic, keys, reference, bins)
    syn_targets = _grouping_cells(synthetic, [target], reference, bins)
    disclosed: defaultdict[tuple, set] = defaultdict(set)
    for q, (t,) in zip(syn_keys, syn_targets):
        disclosed[q].add(t)

    orig_keys = _grouping_cells(original, keys, reference, bins)
    orig_targets = _grouping_cells(original, [target], reference, bins)
    hits = 0
    for q, (t,) in zip(orig_keys, orig_targets):
        values = disclosed.get(q)
        if values is not None and len(values) == 1 and t in values:
            hits += 1
    return 100.0 * hits / original.n_rows


def rep_u(
    original: Dataset,
    synthetic: Dataset,
    keys: Sequence[str],
    *,
    bins: int = DEFAULT_BINS,
) -> float:
    """Replicated uniques: percent of original records whose key combo is
    unique in the original AND unique in the synthetic data."""
    _check_key_columns(original, synthetic, keys)
    reference = original.schema
    orig_counts = Counter(_grouping_cells(original, keys, reference, bins))
    syn_counts = Counter(_grouping_cells(synthetic, keys, reference, bins))
    hits = sum(
        count
        for q, count in orig_counts.items()
        if count == 1 and syn_counts.get(q, 0) == 1
    )
    return 100.0 * hits / original.n_rows


def _two_smallest_cross(synthetic: Dataset, original: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Per synthetic record: distances to nearest and second-nearest original."""
    syn_mat, orig_mat, is_cat = encode_aligned(synthetic, original)
    n = syn_mat.shape[0]
    d1 = np.empty(n)
    d2 = np.empty(n)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        dist = pairwise_mixed_distances(syn_mat[start:stop], orig_mat, is_cat)
        part = np.partition(dist, 1, axis=1)
        d1[start:stop] = part[:, 0]
        d2[start:stop] = part[:, 1]
    return d1, d2


def _cross_min_both_ways(a: Dataset, b: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise and column-wise minima of the |A| x |B| distance matrix."""
    a_mat, b_mat, is_cat = encode_aligned(a, b)
    row_mins = np.empty(a_mat.shape[0])
    col_mins = np.full(b_mat.shape[0], np.inf)
    for start in range(0, a_mat.shape[0], _CHUNK):
        stop = min(start + _CHUNK, a_mat.shape[0])
        dist = pairwise_mixed_distances(a_mat[start:stop], b_mat, is_cat)
        row_mins[start:stop] = dist.min(axis=1)
        np.minimum(col_mins, dist.min(axis=0), out=col_mins)
    return row_mins, col_mins


def _within_min(dataset: Dataset) -> np.ndarray:
    """Distance of each record to its nearest neighbor in the same table
    (self excluded by index, so duplicate records yield distance 0)."""
    mat, _, is_cat = encode_aligned(dataset, dataset)
    n = mat.shape[0]
    out = np.empty(n)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        dist = pairwise_mixed_distances(mat[start:stop], mat, is_cat)
        dist[np.arange(stop - start), np.arange(start, stop)] = np.inf
        out[start:stop] = dist.min(axis=1)
    return out


def nndr(synthetic: Dataset, original: Dataset) -> float:
    """Mean nearest/second-nearest distance ratio of synthetic records.

    Measured against the original table, ratios in [0, 1]; a 0/0 case
    (two exact original matches) counts as 0 — maximal closeness.
    """
    if synthetic.n_rows < 1:
        raise ValueError("need at least one synthetic record")
    if original.n_rows < 2:
        raise ValueError("need at least two original records for a second neighbor")
    d1, d2 = _two_smallest_cross(synthetic, original)
    ratios = np.where(d1 == 0.0, 0.0, d1 / np.where(d2 == 0.0, 1.0, d2))
    return float(ratios.mean())


def dcr(synthetic: Dataset, original: Dataset) -> float:
    """Mean distance of each synthetic record to its closest original record."""
    if synthetic.n_rows < 1 or original.n_rows < 1:
        raise ValueError("both datasets must be non-empty")
    row_mins, _ = _cross_min_both_ways(synthetic, original)
    return float(row_mins.mean())


def nnaa(original: Dataset, synthetic: Dataset, *, seed: int) -> float:
    """Nearest-neighbor adversarial accuracy between the two tables.

    Requires equal record counts; the larger side is subsampled once
    with the run seed.  Comparisons are strict, within-table neighbors
    exclude the record itself, and the two directional terms are
    averaged, which makes the score symmetric in its arguments.
    """
    if original.n_rows < 2 or synthetic.n_rows < 2:
        raise ValueError("need at least two records on each side")
    if original.n_rows > synthetic.n_rows:
        original = sample_rows(original, synthetic.n_rows, seed=seed)
    elif synthetic.n_rows > original.n_rows:
        synthetic = sample_rows(synthetic, original.n_rows, seed=seed)
    d_ts, d_st = _cross_min_both_ways(original, synthetic)
    d_tt = _within_min(original)
    d_ss = _within_min(synthetic)
    term_real = float(np.mean(d_ts > d_tt))
    term_syn = float(np.mean(d_st > d_ss))
    return 0.5 * (term_real + term_syn)


@dataclass(frozen=True)
class DistancePrivacyReport:
    """The five distance-privacy scores plus the settings that shaped them."""

    disco: float
    rep_u: float
    nndr: float
    dcr: float
    nnaa: float
    keys: tuple[str, ...]
    target: str
    bins: int
    seed: int
    n_original: int
    n_synthetic: int

    def to_dict(self) -> dict:
        return {
            "disco": self.disco,
            "rep_u": self.rep_u,
            "nndr": self.nndr,
            "dcr": self.dcr,
            "nnaa": self.nnaa,
            "keys": list(self.keys),
            "target": self.target,
            "bins": self.bins,
            "seed": self.seed,
            "n_original": self.n_original,
            "n_synthetic": self.n_synthetic,
        }


def distance_privacy_report(
    original: Dataset,
    synthetic: Dataset,
    *,
    keys: Sequence[str],
    target: str,
    seed: int,
    bins: int = DEFAULT_BINS,
) -> DistancePrivacyReport:
    """Compute all five metrics with numeric columns normalized to the
    original's ranges (group-based scores bin on the raw reference range,
    which is equivalent)."""
    norm_orig = normalize(original, original.schema)
    norm_syn = normalize(synthetic, original.schema)
    return DistancePrivacyReport(
        disco=disco(original, synthetic, keys, target, bins=bins),
        rep_u=rep_u(original, synthetic, keys, bins=bins),
        nndr=nndr(norm_syn, norm_orig),
        dcr=dcr(norm_syn, norm_orig),
        nnaa=nnaa(norm_orig, norm_syn, seed=seed),
        keys=tuple(keys),
        target=target,
        bins=bins,
        seed=seed,
        n_original=original.n_rows,
        n_synthetic=synthetic.n_rows,
    )
