"""Statistical similarity between an original table and a synthetic one.

Six families of scores, each aggregated so that 1.0 (or 0.0 distance)
means "statistically indistinguishable":

* Wasserstein-1 distance per numeric column — exact sorted-sample form,
  a seeded subsample variant, and an entropically regularized
  optimal-transport cost over full mixed records (Sinkhorn).
* Two-sample Kolmogorov-Smirnov score, ``mean(1 - D)`` over columns.
* Correlation-structure similarity (Pearson / Spearman).
* Normalized-mutual-information structure similarity on binned columns.
* Jensen-Shannon similarity per column (base-2, bounded).
* Mean absolute difference of per-column mean / median / variance.

Distances that compare values across tables expect numeric columns
already normalized to the original's ranges; :func:`similarity_report`
does that for you.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import rankdata

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

WASSERSTEIN_MODES = ("auto", "exact_1d", "sampled", "sinkhorn")

# Above this row count the report switches from the exact per-column
# distance to the subsampled Sinkhorn cost.
AUTO_SINKHORN_THRESHOLD = 20_000
SINKHORN_SUBSAMPLE_CAP = 2_000


# ------------------------------------------------------------- wasserstein


def _w1_between_samples(x: np.ndarray, y: np.ndarray) -> float:
    """Exact 1-D Wasserstein-1 between two empirical distributions."""
    x = np.sort(np.asarray(x, dtype=np.float64))
    y = np.sort(np.asarray(y, dtype=np.float64))
    if len(x) == len(y):
        return float(np.abs(x - y).mean())
    # unequal sizes: integrate |F - G| over the merged support
    grid = np.sort(np.concatenate([x, y]))
    deltas = np.diff(grid)
    fx = np.searchsorted(x, grid[:-1], side="right") / len(x)
    fy = np.searchsorted(y, grid[:-1], side="right") / len(y)
    return float(np.sum(np.abs(fx - fy) * deltas))


def wasserstein_per_column(original: Dataset, synthetic: Dataset) -> dict[str, float]:
    numeric = original.schema.numeric_names()
    if not numeric:
        raise ValueError("no numeric columns to compare")
    return {
        name: _w1_between_samples(original.column(name), synthetic.column(name))
        for name in numeric
    }


def wasserstein_exact_1d(original: Dataset, synthetic: Dataset) -> float:
    """Mean exact 1-D Wasserstein-1 distance over numeric columns."""
    per_column = wasserstein_per_column(original, synthetic)
    return float(np.mean(list(per_column.values())))


def wasserstein_sampled(
    original: Dataset,
    synthetic: Dataset,
    *,
    sample_size: int,
    seed: int,
) -> float:
    """Exact 1-D distance on seeded subsamples of both tables."""
    if sample_size < 1:
        raise ValueError("sample_size must be positive")

    def shrink(ds: Dataset) -> Dataset:
        if sample_size >= ds.n_rows:
            warnings.warn(
                f"sample_size {sample_size} >= {ds.n_rows} rows; using the full table"
            )
            return ds
        return sample_rows(ds, sample_size, seed=seed)

    return wasserstein_exact_1d(shrink(original), shrink(synthetic))


# ---------------------------------------------------------------- sinkhorn


@dataclass(frozen=True)
class SinkhornResult:
    """Outcome of one entropic optimal-transport solve.

    ``marginal_error`` is the residual violation of the returned plan
    (after feasibility rounding); ``iterate_error`` is the violation of
    the last raw Sinkhorn iterate, which drives the convergence check.
    """

    cost: float
    marginal_error: float
    iterations: int
    converged: bool
    epsilon: float
    iterate_error: float = math.inf
    # Dual objective per tracked iteration; provably non-decreasing.
    dual_trace: tuple[float, ...] = field(repr=False, default=())
    cost_trace: tuple[float, ...] = field(repr=False, default=())


def _logsumexp(m: np.ndarray, axis: int) -> np.ndarray:
    mx = m.max(axis=axis, keepdims=True)
    return np.squeeze(mx + np.log(np.exp(m - mx).sum(axis=axis, keepdims=True)), axis=axis)


def _round_to_marginals(plan: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Project an almost-feasible plan onto the transport polytope.

    Overfull rows and then columns are scaled down, and the missing
    mass is restored through a rank-one correction, so the result has
    exact marginals while moving at most the original violation's worth
    of mass.
    """
    row = plan.sum(axis=1)
    plan = plan * np.minimum(1.0, np.where(row > 0, a / np.where(row > 0, row, 1.0), 1.0))[:, None]
    col = plan.sum(axis=0)
    plan = plan * np.minimum(1.0, np.where(col > 0, b / np.where(col > 0, col, 1.0), 1.0))[None, :]
    missing_rows = a - plan.sum(axis=1)
    missing_cols = b - plan.sum(axis=0)
    total = missing_rows.sum()
    if total > 0:
        plan = plan + np.outer(missing_rows, missing_cols) / total
    return plan


def sinkhorn_transport(
    cost_matrix: np.ndarray,
    *,
    epsilon: float = 0.05,
    max_iter: int = 500,
    tol: float = 1e-6,
    anneal: bool = True,
    trace: bool = False,
) -> SinkhornResult:
    """Entropic OT between uniform marginals, solved in the log domain.

    With ``anneal=True`` the regularization follows a geometric schedule
    from the cost scale down to ``epsilon`` (warm-started potentials),
    which keeps small-epsilon solves tractable.  ``max_iter`` bounds the
    iterations at the final epsilon, each checked against ``tol`` on the
    largest absolute row/column-sum violation.  The returned cost is
    evaluated on the final plan projected to exact marginals, so
    ``marginal_error`` is machine-precision small even when the raw
    iterates stop at ``max_iter`` (see ``iterate_error``).
    """
    C = np.asarray(cost_matrix, dtype=np.float64)
    if C.ndim != 2 or C.size == 0:
        raise ValueError("cost matrix must be a non-empty 2-D array")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n, m = C.shape
    log_a = np.full(n, -math.log(n))
    log_b = np.full(m, -math.log(m))
    a = np.exp(log_a)
    b = np.exp(log_b)

    schedule = [epsilon]
    if anneal:
        e = float(C.max())
        while e > epsilon * 1.001:
            schedule.append(e)
            e /= 3.0
        schedule.reverse()

    f = np.zeros(n)
    g = np.zeros(m)
    dual_trace: list[float] = []
    cost_trace: list[float] = []
    iterations = 0
    iterate_error = math.inf
    converged = False

    for stage, eps_cur in enumerate(schedule):
        final = stage == len(schedule) - 1
        budget = max_iter if final else 50
        for _ in range(budget):
            f = eps_cur * (log_a - _logsumexp((g[None, :] - C) / eps_cur, axis=1))
            g = eps_cur * (log_b - _logsumexp((f[:, None] - C) / eps_cur, axis=0))
            if not final:
                continue
            iterations += 1
            plan = np.exp((f[:, None] + g[None, :] - C) / eps_cur)
            if trace:
                dual_trace.append(
                    float(f @ a + g @ b - eps_cur * plan.sum())
                )
                cost_trace.append(float((plan * C).sum()))
            iterate_error = max(
                float(np.abs(plan.sum(axis=1) - a).max()),
                float(np.abs(plan.sum(axis=0) - b).max()),
            )
            if iterate_error < tol:
                converged = True
                break
        if final and converged:
            break

    plan = _round_to_marginals(np.exp((f[:, None] + g[None, :] - C) / epsilon), a, b)
    marginal_error = max(
        float(np.abs(plan.sum(axis=1) - a).max()),
        float(np.abs(plan.sum(axis=0) - b).max()),
    )
    cost = float((plan * C).sum())
    return SinkhornResult(
        cost=cost,
        marginal_error=marginal_error,
        iterations=iterations,
        converged=converged,
        epsilon=epsilon,
        iterate_error=iterate_error,
        dual_trace=tuple(dual_trace),
        cost_trace=tuple(cost_trace),
    )


def mixed_cost_matrix(original: Dataset, synthetic: Dataset) -> np.ndarray:
    orig_mat, syn_mat, is_cat = encode_aligned(original, synthetic)
    return pairwise_mixed_distances(orig_mat, syn_mat, is_cat)


def sinkhorn_distance(
    original: Dataset,
    synthetic: Dataset,
    *,
    epsilon: float = 0.05,
    max_iter: int = 500,
    tol: float = 1e-6,
) -> float:
    """Entropic OT cost between the two record clouds (mixed distances).

    Callers are expected to subsample large tables first; a
    non-converged solve is reported through a warning carrying the
    achieved marginal violation.
    """
    result = sinkhorn_transport(
        mixed_cost_matrix(original, synthetic),
        epsilon=epsilon,
        max_iter=max_iter,
        tol=tol,
    )
    if not result.converged:
        warnings.warn(
            f"sinkhorn stopped at max_iter={max_iter} with iterate violation "
            f"{result.iterate_error:.3e} (tol {tol:.1e}); cost taken from the "
            "feasibility-rounded plan"
        )
    return result.cost


# -------------------------------------------------------------------- K-S


def _ks_numeric(x: np.ndarray, y: np.ndarray) -> float:
    x = np.sort(np.asarray(x, dtype=np.float64))
    y = np.sort(np.asarray(y, dtype=np.float64))
    grid = np.concatenate([x, y])
    fx = np.searchsorted(x, grid, side="right") / len(x)
    fy = np.searchsorted(y, grid, side="right") / len(y)
    return float(np.abs(fx - fy).max())


def _ks_categorical(x: np.ndarray, y: np.ndarray, order: Sequence[str]) -> float:
    # CDF over the fixed category order; D is the largest cumulative gap.
    fx = np.cumsum([np.mean(x == c) for c in order])
    fy = np.cumsum([np.mean(y == c) for c in order])
    return float(np.abs(fx - fy).max())


def ks_per_column(original: Dataset, synthetic: Dataset) -> dict[str, float]:
    """Per-column KS similarity 1 - D (1.0 = identical distributions)."""
    scores: dict[str, float] = {}
    for spec in original.schema:
        x = original.column(spec.name)
        y = synthetic.column(spec.name)
        if spec.is_numeric:
            d = _ks_numeric(x, y)
        else:
            other = synthetic.schema[spec.name]
            order = sorted(set(spec.categories or ()) | set(other.categories or ()))
            d = _ks_categorical(x, y, order)
        scores[spec.name] = 1.0 - d
    return scores


def ks_similarity(original: Dataset, synthetic: Dataset) -> float:
    """Mean of per-column (1 - KS statistic)."""
    scores = ks_per_column(original, synthetic)
    return float(np.mean(list(scores.values())))


# ------------------------------------------------------------- correlation


def _ordinal_codes(values: np.ndarray, order: Sequence[str]) -> np.ndarray:
    lookup = {c: i for i, c in enumerate(order)}
    try:
        return np.asarray([lookup[v] for v in values], dtype=np.float64)
    except KeyError as exc:
        raise ValueError(f"value {exc.args[0]!r} missing from the configured order") from None


def _correlation_columns(
    dataset: Dataset,
    method: str,
    ordinal_orders: Mapping[str, Sequence[str]] | None,
) -> tuple[list[str], np.ndarray]:
    names: list[str] = []
    cols: list[np.ndarray] = []
    for spec in dataset.schema:
        if spec.is_numeric:
            names.append(spec.name)
            cols.append(np.asarray(dataset.column(spec.name), dtype=np.float64))
        elif method == "spearman" and ordinal_orders and spec.name in ordinal_orders:
            names.append(spec.name)
            cols.append(_ordinal_codes(dataset.column(spec.name), ordinal_orders[spec.name]))
    return names, np.column_stack(cols) if cols else np.empty((dataset.n_rows, 0))


def correlation_matrix(
    dataset: Dataset,
    method: str = "pearson",
    *,
    ordinal_orders: Mapping[str, Sequence[str]] | None = None,
) -> tuple[list[str], np.ndarray]:
    """Correlation matrix over numeric (and configured-ordinal) columns.

    Zero-variance columns get NaN rows/columns rather than raising; the
    score aggregation skips those pairs.
    """
    if method not in ("pearson", "spearman"):
        raise ValueError(f"unknown correlation method {method!r}")
    names, data = _correlation_columns(dataset, method, ordinal_orders)
    if method == "spearman":
        data = np.column_stack(
            [rankdata(data[:, j], method="average") for j in range(data.shape[1])]
        ) if data.shape[1] else data
    k = data.shape[1]
    out = np.full((k, k), np.nan)
    std = data.std(axis=0)
    centered = data - data.mean(axis=0)
    for i in range(k):
        out[i, i] = 1.0 if std[i] > 0 else np.nan
        for j in range(i + 1, k):
            if std[i] == 0.0 or std[j] == 0.0:
                continue
            cov = float(np.mean(centered[:, i] * centered[:, j]))
            out[i, j] = out[j, i] = cov / (std[i] * std[j])
    return names, out


def correlation_similarity(
    original: Dataset,
    synthetic: Dataset,
    method: str = "pearson",
    *,
    ordinal_orders: Mapping[str, Sequence[str]] | None = None,
) -> float:
    """Mean over column pairs of 1 - |corr_syn - corr_orig| / 2."""
    names_o, mat_o = correlation_matrix(original, method, ordinal_orders=ordinal_orders)
    names_s, mat_s = correlation_matrix(synthetic, method, ordinal_orders=ordinal_orders)
    if names_o != names_s:
        raise ValueError("datasets expose different correlation columns")
    if len(names_o) < 2:
        raise ValueError("need at least two usable columns for correlation similarity")
    scores = []
    skipped = []
    for i in range(len(names_o)):
        for j in range(i + 1, len(names_o)):
            o, s = mat_o[i, j], mat_s[i, j]
            if math.isnan(o) or math.isnan(s):
                skipped.append((names_o[i], names_o[j]))
                continue
            scores.append(1.0 - abs(s - o) / 2.0)
    if skipped:
        warnings.warn(
            f"skipped {len(skipped)} zero-variance column pair(s): {skipped[:3]}"
        )
    if not scores:
        raise ValueError("all column pairs were skipped (zero variance)")
    return float(np.mean(scores))


# ---------------------------------------------------------------------- NMI


def _binned_codes(dataset: Dataset, reference: Schema, bins: int) -> dict[str, np.ndarray]:
    codes: dict[str, np.ndarray] = {}
    for spec in dataset.schema:
        values = dataset.column(spec.name)
        if spec.is_numeric:
            labels = discretize(values, reference[spec.name], bins)
            lookup = {f"bin{i}": i for i in range(bins)}
            codes[spec.name] = np.asarray([lookup[v] for v in labels], dtype=np.int64)
        else:
            ref_spec = reference[spec.name]
            order = sorted(set(ref_spec.categories or ()) | set(spec.categories or ()))
            lookup = {c: i for i, c in enumerate(order)}
            codes[spec.name] = np.asarray([lookup[v] for v in values], dtype=np.int64)
    return codes


def _entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())


def _pair_nmi(x: np.ndarray, y: np.ndarray) -> float:
    """Normalized mutual information 2*MI/(Hx+Hy); 0 if either entropy is 0."""
    n = len(x)
    kx = int(x.max()) + 1
    ky = int(y.max()) + 1
    joint = np.bincount(x * ky + y, minlength=kx * ky).astype(np.float64)
    px = np.bincount(x, minlength=kx).astype(np.float64)
    py = np.bincount(y, minlength=ky).astype(np.float64)
    hx, hy = _entropy(px), _entropy(py)
    if hx == 0.0 or hy == 0.0:
        return 0.0
    pj = joint / n
    outer = np.outer(px / n, py / n).ravel()
    mask = pj > 0
    mi = float((pj[mask] * np.log(pj[mask] / outer[mask])).sum())
    return 2.0 * max(mi, 0.0) / (hx + hy)


def nmi_matrix(
    dataset: Dataset,
    *,
    reference: Schema | None = None,
    bins: int = DEFAULT_BINS,
) -> tuple[list[str], np.ndarray]:
    """Pairwise NMI among all columns, numeric ones binned on the reference."""
    reference = reference or dataset.schema
    codes = _binned_codes(dataset, reference, bins)
    names = list(dataset.schema.names)
    zero_entropy = [
        n for n in names if len(np.unique(codes[n])) < 2
    ]
    if zero_entropy:
        warnings.warn(
            f"column(s) with a single observed level get NMI 0: {zero_entropy}"
        )
    k = len(names)
    out = np.zeros((k, k))
    for i in range(k):
        out[i, i] = 0.0 if names[i] in zero_entropy else 1.0
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = _pair_nmi(codes[names[i]], codes[names[j]])
    return names, out


def nmi_similarity(
    original: Dataset,
    synthetic: Dataset,
    *,
    bins: int = DEFAULT_BINS,
) -> float:
    """Mean over column pairs of 1 - |NMI_syn - NMI_orig|."""
    if len(original.schema) < 2:
        raise ValueError("need at least two columns for pairwise NMI")
    names, mat_o = nmi_matrix(original, reference=original.schema, bins=bins)
    _, mat_s = nmi_matrix(synthetic, reference=original.schema, bins=bins)
    scores = [
        1.0 - abs(mat_s[i, j] - mat_o[i, j])
        for i in range(len(names))
        for j in range(i + 1, len(names))
    ]
    return float(np.mean(scores))


# ------------------------------------------------------------ JS divergence


def _js_divergence(p: np.ndarray, q: np.ndarray) -> float:
    """Jensen-Shannon divergence in bits; 0 <= value <= 1."""
    m = (p + q) / 2.0

    def kl(a: np.ndarray) -> float:
        mask = a > 0
        return float((a[mask] * np.log2(a[mask] / m[mask])).sum())

    return 0.5 * kl(p) + 0.5 * kl(q)


def js_per_column(
    original: Dataset,
    synthetic: Dataset,
    *,
    bins: int = DEFAULT_BINS,
) -> dict[str, float]:
    """Per-column JS similarity 1 - divergence over a shared support."""
    scores: dict[str, float] = {}
    for spec in original.schema:
        x = original.column(spec.name)
        y = synthetic.column(spec.name)
        if spec.is_numeric:
            x = discretize(x, spec, bins)
            y = discretize(y, spec, bins)
            support: Sequence[str] = [f"bin{i}" for i in range(bins)]
        else:
            other = synthetic.schema[spec.name]
            support = sorted(set(spec.categories or ()) | set(other.categories or ()))
        p = np.asarray([np.mean(x == c) for c in support])
        q = np.asarray([np.mean(y == c) for c in support])
        scores[spec.name] = 1.0 - _js_divergence(p, q)
    return scores


def js_similarity(
    original: Dataset,
    synthetic: Dataset,
    *,
    bins: int = DEFAULT_BINS,
) -> float:
    scores = js_per_column(original, synthetic, bins=bins)
    return float(np.mean(list(scores.values())))


# ------------------------------------------------------------- basic stats


@dataclass(frozen=True)
class StatsDiff:
    """Mean absolute per-column gaps of three location/spread summaries."""

    mean_diff: float
    median_diff: float
    var_diff: float

    def to_dict(self) -> dict:
        return {
            "mean_diff": self.mean_diff,
            "median_diff": self.median_diff,
            "var_diff": self.var_diff,
        }


def column_stats(dataset: Dataset) -> dict[str, dict[str, float]]:
    """Per numeric column mean/median/population-variance."""
    out: dict[str, dict[str, float]] = {}
    for name in dataset.schema.numeric_names():
        col = dataset.column(name)
        out[name] = {
            "mean": float(np.mean(col)),
            "median": float(np.median(col)),
            "var": float(np.var(col)),
        }
    return out


def basic_stats_diff(original: Dataset, synthetic: Dataset) -> StatsDiff:
    """Average absolute difference of mean, median and variance.

    Expects numeric columns on the normalized scale so the three gaps
    are comparable across columns.  Identical tables give (0, 0, 0).
    """
    numeric = original.schema.numeric_names()
    if not numeric:
        raise ValueError("no numeric columns to compare")
    stats_o = column_stats(original)
    stats_s = column_stats(synthetic)
    gaps = {key: [] for key in ("mean", "median", "var")}
    for name in numeric:
        for key in gaps:
            gaps[key].append(abs(stats_s[name][key] - stats_o[name][key]))
    return StatsDiff(
        mean_diff=float(np.mean(gaps["mean"])),
        median_diff=float(np.mean(gaps["median"])),
        var_diff=float(np.mean(gaps["var"])),
    )


# ------------------------------------------------------------------ report


@dataclass(frozen=True)
class SimilarityReport:
    """All similarity scores for one original/synthetic pair.

    Metrics that cannot be computed for a given table (for example
    correlation on a single numeric column) are None; the triggering
    condition is surfaced as a warning at build time.
    """

    wasserstein: float | None
    wasserstein_mode: str
    ks: float
    correlation_pearson: float | None
    correlation_spearman: float | None
    nmi: float | None
    js: float
    stats: StatsDiff | None
    bins: int
    seed: int
    wasserstein_by_mode: dict[str, float] = field(default_factory=dict)
    ks_columns: dict[str, float] = field(default_factory=dict)
    wasserstein_columns: dict[str, float] = field(default_factory=dict)
    js_columns: dict[str, float] = field(default_factory=dict)
    sinkhorn: SinkhornResult | None = None

    def to_dict(self) -> dict:
        out = {
            "wasserstein": self.wasserstein,
            "wasserstein_mode": self.wasserstein_mode,
            "ks": self.ks,
            "correlation_pearson": self.correlation_pearson,
            "correlation_spearman": self.correlation_spearman,
            "nmi": self.nmi,
            "js": self.js,
            "stats": self.stats.to_dict() if self.stats is not None else None,
            "bins": self.bins,
            "seed": self.seed,
            "wasserstein_by_mode": dict(self.wasserstein_by_mode),
            "ks_columns": dict(self.ks_columns),
            "wasserstein_columns": dict(self.wasserstein_columns),
            "js_columns": dict(self.js_columns),
        }
        if self.sinkhorn is not None:
            out["sinkhorn"] = {
                "marginal_error": self.sinkhorn.marginal_error,
                "iterations": self.sinkhorn.iterations,
                "converged": self.sinkhorn.converged,
                "epsilon": self.sinkhorn.epsilon,
            }
        return out


def resolve_wasserstein_mode(mode: str, n_rows: int) -> str:
    if mode not in WASSERSTEIN_MODES:
        raise ValueError(f"unknown wasserstein mode {mode!r}")
    if mode != "auto":
        return mode
    return "sinkhorn" if n_rows > AUTO_SINKHORN_THRESHOLD else "exact_1d"


def _guarded(fn, label: str):
    try:
        return fn()
    except ValueError as exc:
        warnings.warn(f"{label} skipped: {exc}")
        return None


def similarity_report(
    original: Dataset,
    synthetic: Dataset,
    *,
    seed: int,
    bins: int = DEFAULT_BINS,
    wasserstein_mode: str = "auto",
    sample_size: int = 20,
    sinkhorn_epsilon: float = 0.05,
    sinkhorn_max_iter: int = 500,
    sinkhorn_tol: float = 1e-6,
    sinkhorn_cap: int = SINKHORN_SUBSAMPLE_CAP,
    compare_modes: Sequence[str] = ("exact_1d", "sampled"),
    ordinal_orders: Mapping[str, Sequence[str]] | None = None,
) -> SimilarityReport:
    """All similarity metrics with numerics normalized to the original.

    ``wasserstein_mode="auto"`` uses the exact per-column distance up to
    20,000 rows and the subsampled Sinkhorn cost beyond that.  Modes in
    ``compare_modes`` are additionally computed for side-by-side plots.
    """
    norm_o = normalize(original, original.schema)
    norm_s = normalize(synthetic, original.schema)
    mode = resolve_wasserstein_mode(
        wasserstein_mode, max(original.n_rows, synthetic.n_rows)
    )

    sinkhorn_result: SinkhornResult | None = None
    by_mode: dict[str, float] = {}

    def run_mode(name: str) -> float | None:
        nonlocal sinkhorn_result
        if name == "exact_1d":
            return _guarded(lambda: wasserstein_exact_1d(norm_o, norm_s), "wasserstein")
        if name == "sampled":
            return _guarded(
                lambda: wasserstein_sampled(
                    norm_o, norm_s, sample_size=sample_size, seed=seed
                ),
                "wasserstein (sampled)",
            )
        if name == "sinkhorn":
            small_o = (
                sample_rows(norm_o, sinkhorn_cap, seed=seed)
                if norm_o.n_rows > sinkhorn_cap
                else norm_o
            )
            small_s = (
                sample_rows(norm_s, sinkhorn_cap, seed=seed)
                if norm_s.n_rows > sinkhorn_cap
                else norm_s
            )
            sinkhorn_result = sinkhorn_transport(
                mixed_cost_matrix(small_o, small_s),
                epsilon=sinkhorn_epsilon,
                max_iter=sinkhorn_max_iter,
                tol=sinkhorn_tol,
            )
            if not sinkhorn_result.converged:
                warnings.warn(
                    "sinkhorn stopped at max_iter with iterate violation "
                    f"{sinkhorn_result.iterate_error:.3e}; cost taken from "
                    "the feasibility-rounded plan"
                )
            return sinkhorn_result.cost
        raise ValueError(f"unknown wasserstein mode {name!r}")

    for name in dict.fromkeys([mode, *compare_modes]):
        value = run_mode(name)
        if value is not None:
            by_mode[name] = value

    ws_columns = _guarded(lambda: wasserstein_per_column(norm_o, norm_s), "wasserstein")

    return SimilarityReport(
        wasserstein=by_mode.get(mode),
        wasserstein_mode=mode,
        ks=ks_similarity(norm_o, norm_s),
        correlation_pearson=_guarded(
            lambda: correlation_similarity(norm_o, norm_s, "pearson"), "pearson correlation"
        ),
        correlation_spearman=_guarded(
            lambda: correlation_similarity(
                norm_o, norm_s, "spearman", ordinal_orders=ordinal_orders
            ),
            "spearman correlation",
        ),
        nmi=_guarded(lambda: nmi_similarity(norm_o, norm_s, bins=bins), "nmi"),
        js=js_similarity(norm_o, norm_s, bins=bins),
        stats=_guarded(lambda: basic_stats_diff(norm_o, norm_s), "basic stats"),
        bins=bins,
        seed=seed,
        wasserstein_by_mode=by_mode,
        ks_columns=ks_per_column(norm_o, norm_s),
        wasserstein_columns=ws_columns or {},
        js_columns=js_per_column(norm_o, norm_s, bins=bins),
        sinkhorn=sinkhorn_result,
    )
