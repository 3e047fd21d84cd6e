"""Built-in synthetic-data generators: Gaussian mixture, Gaussian copula,
and verbatim random resampling.

These are intentionally simple reference generators so an evaluation run
can be exercised end to end without any external synthesizer.  Mixture
and copula models are fitted on a normalized ordinal encoding; sampled
categoricals are mapped back onto the original category levels.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.stats

from .tabular import (
    CATEGORICAL,
    NUMERIC,
    ColumnSpec,
    Dataset,
    Schema,
    sample_rows,
)

COV_REGULARIZATION = 1e-6


# ---------------------------------------------------------------- encoding


def encode_mixture_features(data: Dataset) -> np.ndarray:
    """Normalized feature matrix used by the mixture model.

    Numeric columns are min-max scaled to their schema range; categorical
    columns become ordinal codes scaled onto [0, 1] by their level count.
    The inverse lives in ``_decode_mixture_samples``.
    """
    cols = []
    for spec in data.schema:
        values = data.column(spec.name)
        if spec.kind == NUMERIC:
            lo, hi = float(spec.min), float(spec.max)
            if hi > lo:
                cols.append(np.clip((values - lo) / (hi - lo), 0.0, 1.0))
            else:
                cols.append(np.zeros(len(values)))
        else:
            index = {level: i for i, level in enumerate(spec.categories)}
            codes = np.fromiter((index[v] for v in values), dtype=np.float64, count=len(values))
            span = max(len(spec.categories) - 1, 1)
            cols.append(codes / span)
    return np.column_stack(cols)


def _decode_mixture_samples(matrix: np.ndarray, schema: Schema) -> Dataset:
    columns: dict[str, np.ndarray] = {}
    specs = []
    for j, spec in enumerate(schema):
        raw = matrix[:, j]
        if spec.kind == NUMERIC:
            lo, hi = float(spec.min), float(spec.max)
            values = lo + raw * (hi - lo)
            columns[spec.name] = values
            rng_lo, rng_hi = (float(values.min()), float(values.max())) if values.size else (lo, hi)
            specs.append(ColumnSpec(spec.name, NUMERIC, min=rng_lo, max=rng_hi))
        else:
            levels = np.asarray(spec.categories, dtype=object)
            span = max(len(levels) - 1, 1)
            idx = np.clip(np.rint(raw * span), 0, len(levels) - 1).astype(int)
            columns[spec.name] = levels[idx]
            specs.append(spec)
    return Dataset(Schema(tuple(specs)), columns, validate=False)


# ---------------------------------------------------------------- mixture


@dataclass(frozen=True, eq=False)
class GmmModel:
    """Gaussian mixture fitted in the normalized feature space."""

    k: int
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray
    schema: Schema
    loglik_trace: tuple[float, ...] = field(repr=False, default=())


def _log_gaussian(matrix: np.ndarray, mean: np.ndarray, cov: np.ndarray) -> np.ndarray:
    d = matrix.shape[1]
    chol = np.linalg.cholesky(cov)
    diff = matrix - mean
    half = scipy.linalg.solve_triangular(chol, diff.T, lower=True)
    quad = np.sum(half * half, axis=0)
    logdet = 2.0 * float(np.sum(np.log(np.diag(chol))))
    return -0.5 * (d * math.log(2.0 * math.pi) + logdet + quad)


def _kmeanspp_centers(matrix: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = matrix.shape[0]
    centers = [matrix[int(rng.integers(n))]]
    for _ in range(k - 1):
        d2 = np.min(
            [np.sum((matrix - c) ** 2, axis=1) for c in centers], axis=0
        )
        total = float(d2.sum())
        if total > 0:
            probs = d2 / total
            pick = int(rng.choice(n, p=probs))
        else:
            pick = int(rng.integers(n))
        centers.append(matrix[pick])
    return np.asarray(centers)


def _floored_covariance(scatter: np.ndarray) -> np.ndarray:
    """Covariance with every eigenvalue floored at ``COV_REGULARIZATION``.

    Flooring the spectrum (rather than adding a ridge) is the exact
    M-step maximizer under the eigenvalue constraint, which keeps the EM
    log-likelihood non-decreasing even when a component concentrates on
    duplicated rows.
    """
    eigenvalues, vectors = np.linalg.eigh(np.asarray(scatter, dtype=np.float64))
    return (vectors * np.maximum(eigenvalues, COV_REGULARIZATION)) @ vectors.T


def fit_gmm(
    data: Dataset,
    k: int = 5,
    *,
    seed: int,
    max_iter: int = 100,
    tol: float = 1e-6,
) -> GmmModel:
    """Expectation-maximization fit of a ``k``-component full-covariance
    Gaussian mixture.

    Categorical columns are ordinal-encoded (with a warning) before
    fitting; every M-step floors the covariance spectrum at
    ``COV_REGULARIZATION``, so the log-likelihood trace is non-decreasing
    up to floating-point error.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if data.n_rows < k:
        raise ValueError(f"need at least k={k} rows, got {data.n_rows}")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if data.schema.categorical_names():
        warnings.warn(
            f"ordinal-encoding categorical columns {list(data.schema.categorical_names())} "
            "for the mixture fit"
        )
    matrix = encode_mixture_features(data)
    n, d = matrix.shape
    if k > 1 and bool(np.all(matrix == matrix[0])):
        warnings.warn("all rows identical: mixture components will collapse")
    rng = np.random.default_rng(seed)
    centers = _kmeanspp_centers(matrix, k, rng)
    assignment = np.argmin(
        np.sum((matrix[:, None, :] - centers[None, :, :]) ** 2, axis=2), axis=1
    )
    global_cov = np.cov(matrix, rowvar=False, ddof=0).reshape(d, d)
    weights = np.empty(k)
    means = np.empty((k, d))
    covs = np.empty((k, d, d))
    for j in range(k):
        members = matrix[assignment == j]
        if len(members) == 0:
            weights[j] = 1.0 / n
            means[j] = centers[j]
            covs[j] = _floored_covariance(global_cov)
        else:
            weights[j] = len(members) / n
            means[j] = members.mean(axis=0)
            covs[j] = _floored_covariance(
                np.cov(members, rowvar=False, ddof=0).reshape(d, d)
            )
    weights = weights / weights.sum()

    trace: list[float] = []
    prev = -math.inf
    for _ in range(max_iter):
        # E-step in the log domain
        log_w = np.log(np.maximum(weights, 1e-300))
        log_parts = np.stack(
            [log_w[j] + _log_gaussian(matrix, means[j], covs[j]) for j in range(k)],
            axis=1,
        )
        row_max = log_parts.max(axis=1, keepdims=True)
        log_norm = row_max[:, 0] + np.log(np.exp(log_parts - row_max).sum(axis=1))
        loglik = float(log_norm.sum())
        trace.append(loglik)
        if loglik - prev < tol:
            break
        prev = loglik
        resp = np.exp(log_parts - log_norm[:, None])
        # M-step
        bulk = resp.sum(axis=0)
        safe = np.maximum(bulk, 1e-12)
        weights = bulk / n
        weights = weights / weights.sum()
        means = (resp.T @ matrix) / safe[:, None]
        for j in range(k):
            diff = matrix - means[j]
            scatter = (resp[:, j][:, None] * diff).T @ diff / safe[j]
            covs[j] = _floored_covariance(scatter)
    return GmmModel(
        k=k,
        weights=weights,
        means=means,
        covariances=covs,
        schema=data.schema,
        loglik_trace=tuple(trace),
    )


def _psd_factor(cov: np.ndarray) -> np.ndarray:
    """Matrix square root for sampling; repairs mild non-PSD input by
    clipping eigenvalues at zero, rejects anything clearly indefinite."""
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        eigvals, eigvecs = np.linalg.eigh(np.asarray(cov, dtype=np.float64))
        if eigvals.min() < -1e-8:
            raise ValueError("covariance matrix is not positive semi-definite")
        return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def sample_gmm(model: GmmModel, n: int, *, seed: int) -> Dataset:
    """Draw ``n`` records: component by weight, then a Cholesky-factored
    normal draw, decoded back onto the original schema."""
    if n < 0:
        raise ValueError("sample size must be non-negative")
    weights = np.asarray(model.weights, dtype=np.float64)
    if abs(float(weights.sum()) - 1.0) > 1e-9 or np.any(weights < 0):
        raise ValueError("model weights must form a probability vector")
    factors = np.stack([_psd_factor(c) for c in np.asarray(model.covariances)])
    rng = np.random.default_rng(seed)
    comps = rng.choice(model.k, size=n, p=weights)
    noise = rng.standard_normal((n, factors.shape[1]))
    samples = np.asarray(model.means)[comps] + np.einsum(
        "nij,nj->ni", factors[comps], noise
    )
    return _decode_mixture_samples(samples, model.schema)


# ----------------------------------------------------------------- copula


@dataclass(frozen=True, eq=False)
class CopulaModel:
    """Rank-correlation dependence model over empirical marginals."""

    schema: Schema
    correlation: np.ndarray
    numeric_quantiles: dict
    categorical_levels: dict
    categorical_cum: dict
    n_fit: int


def nearest_psd_correlation(matrix: np.ndarray) -> np.ndarray:
    """Closest well-formed correlation matrix: negative eigenvalues are
    clipped to zero and the diagonal renormalized to ones."""
    sym = 0.5 * (matrix + matrix.T)
    eigvals, eigvecs = np.linalg.eigh(sym)
    if eigvals.min() >= 0:
        repaired = sym
    else:
        repaired = (eigvecs * np.clip(eigvals, 0.0, None)) @ eigvecs.T
    scale = np.sqrt(np.clip(np.diag(repaired), 1e-12, None))
    repaired = repaired / np.outer(scale, scale)
    np.fill_diagonal(repaired, 1.0)
    return np.clip(repaired, -1.0, 1.0)


def fit_gaussian_copula(data: Dataset) -> CopulaModel:
    """Empirical marginals plus the Pearson correlation of the
    rank-uniformized, normal-scored columns.

    Ranks use ``rank/(n+1)`` so the normal scores stay finite; constant
    columns contribute an identity correlation row (warned).
    """
    n = data.n_rows
    if n < 3:
        raise ValueError(f"need at least 3 rows to fit a copula, got {n}")
    z_cols = []
    constant: list[str] = []
    numeric_quantiles: dict = {}
    categorical_levels: dict = {}
    categorical_cum: dict = {}
    for spec in data.schema:
        values = data.column(spec.name)
        if spec.kind == NUMERIC:
            numeric_quantiles[spec.name] = np.sort(values)
            ranks = scipy.stats.rankdata(values, method="average")
        else:
            levels = [str(v) for v in np.unique(values)]
            counts = np.array([(values == lvl).sum() for lvl in levels], dtype=float)
            categorical_levels[spec.name] = tuple(levels)
            categorical_cum[spec.name] = np.cumsum(counts) / n
            codes = np.searchsorted(np.asarray(levels, dtype=object), values)
            ranks = scipy.stats.rankdata(codes, method="average")
        if np.all(values == values[0]):
            constant.append(spec.name)
        z_cols.append(scipy.stats.norm.ppf(ranks / (n + 1)))
    if constant:
        warnings.warn(
            f"constant columns {constant} carry no rank signal; their "
            "correlation rows are set to identity"
        )
    z = np.column_stack(z_cols)
    d = z.shape[1]
    correlation = np.eye(d)
    keep = [j for j, spec in enumerate(data.schema) if spec.name not in constant]
    if len(keep) > 1:
        sub = np.corrcoef(z[:, keep], rowvar=False)
        correlation[np.ix_(keep, keep)] = sub
    correlation = nearest_psd_correlation(correlation)
    return CopulaModel(
        schema=data.schema,
        correlation=correlation,
        numeric_quantiles=numeric_quantiles,
        categorical_levels=categorical_levels,
        categorical_cum=categorical_cum,
        n_fit=n,
    )


def sample_gaussian_copula(model: CopulaModel, n: int, *, seed: int) -> Dataset:
    """Correlated normal draws pushed through the probability integral
    transform and inverted against the empirical marginals."""
    if n < 0:
        raise ValueError("sample size must be non-negative")
    factor = _psd_factor(np.asarray(model.correlation, dtype=np.float64))
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, factor.shape[0])) @ factor.T
    uniforms = scipy.stats.norm.cdf(z)
    columns: dict[str, np.ndarray] = {}
    specs = []
    for j, spec in enumerate(model.schema):
        u = uniforms[:, j]
        if spec.kind == NUMERIC:
            sorted_values = model.numeric_quantiles[spec.name]
            m = len(sorted_values)
            positions = np.arange(1, m + 1) / (m + 1)
            values = np.interp(u, positions, sorted_values)
            columns[spec.name] = values
            if values.size:
                rng_lo, rng_hi = float(values.min()), float(values.max())
            else:
                rng_lo, rng_hi = float(sorted_values[0]), float(sorted_values[-1])
            specs.append(ColumnSpec(spec.name, NUMERIC, min=rng_lo, max=rng_hi))
        else:
            levels = np.asarray(model.categorical_levels[spec.name], dtype=object)
            cum = model.categorical_cum[spec.name]
            idx = np.clip(np.searchsorted(cum, u, side="left"), 0, len(levels) - 1)
            columns[spec.name] = levels[idx]
            specs.append(ColumnSpec(spec.name, CATEGORICAL, categories=tuple(levels)))
    return Dataset(Schema(tuple(specs)), columns, validate=False)


# ----------------------------------------------------------------- random


def random_model(
    data: Dataset, n: int, *, with_replacement: bool = False, seed: int
) -> Dataset:
    """Verbatim row resampling, named so reports can label it "Random"."""
    return sample_rows(data, n, with_replacement=with_replacement, seed=seed)
