"""Run configuration, the evaluation pipeline, and report emission.

One :class:`EvalConfig` describes a full run: the original table, one or
more synthetic tables keyed by model name, and the settings for every
metric.  :func:`run_evaluation` executes privacy, then similarity, then
utility per synthetic table, degrading individual metric failures to
skipped entries instead of aborting.  Reports serialize to stable JSON
(two runs with the same config are byte-identical), to Markdown tables,
and to plot-ready CSV files.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import json
import platform
import time
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .attack_privacy import (
    SINGLING_OUT_MODES,
    AuxSplit,
    inference_risk,
    linkability_risk,
    singling_out_risk,
)
from .distance_privacy import dcr, disco, nndr, nnaa, rep_u
from .ml_utility import Learner, tstr_compare
from .similarity import (
    SINKHORN_SUBSAMPLE_CAP,
    WASSERSTEIN_MODES,
    column_stats,
    correlation_matrix,
    nmi_matrix,
    similarity_report,
)
from .tabular import DEFAULT_BINS, Dataset, load_csv, normalize, sample_rows

# Row caps applied before the quadratic-cost metrics; every application
# is recorded in the report's "caps" section.
DISTANCE_ROW_CAP = 20_000
NNAA_ROW_CAP = 2_000
ATTACK_ROW_CAP = 10_000

DEFAULT_LEARNERS = (Learner(kind="logistic_regression"), Learner(kind="k_nearest_neighbors"))


# ------------------------------------------------------------------ config


@dataclass(frozen=True)
class SinkhornSettings:
    """Solver knobs forwarded to the entropic transport estimate."""

    epsilon: float = 0.05
    max_iter: int = 500
    tol: float = 1e-6
    cap: int = SINKHORN_SUBSAMPLE_CAP

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("sinkhorn epsilon must be positive")
        if self.max_iter < 1:
            raise ValueError("sinkhorn max_iter must be at least 1")
        if self.tol <= 0:
            raise ValueError("sinkhorn tol must be positive")
        if self.cap < 2:
            raise ValueError("sinkhorn cap must be at least 2")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class EvalConfig:
    """Everything one evaluation run depends on.

    ``seed`` is mandatory: every stochastic step derives its own stream
    from it, so a config fully determines the report.  ``keys``/``target``
    drive the group-based privacy metrics and the utility pillar;
    ``aux_split``/``secret`` drive the linkability and inference attacks.
    Metrics whose inputs are not configured are reported as skipped.
    """

    original_path: str
    synthetic_paths: dict
    seed: int
    keys: tuple = ()
    target: str | None = None
    aux_split: AuxSplit | None = None
    secret: str | None = None
    n_attacks: int = 500
    n_neighbors: int = 1
    singling_out_mode: str = "multivariate"
    bins: int = DEFAULT_BINS
    wasserstein_mode: str = "auto"
    sinkhorn: SinkhornSettings = field(default_factory=SinkhornSettings)
    learners: tuple = DEFAULT_LEARNERS
    output_dir: str = "results"

    def __post_init__(self) -> None:
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ValueError("seed is mandatory and must be an integer")
        if not self.synthetic_paths:
            raise ValueError("at least one synthetic dataset is required")
        if self.n_attacks < 1:
            raise ValueError("n_attacks must be at least 1")
        if self.n_neighbors < 1:
            raise ValueError("n_neighbors must be at least 1")
        if self.singling_out_mode not in SINGLING_OUT_MODES:
            raise ValueError(f"unknown singling-out mode {self.singling_out_mode!r}")
        if self.bins < 2:
            raise ValueError("bins must be at least 2")
        if self.wasserstein_mode not in WASSERSTEIN_MODES:
            raise ValueError(f"unknown wasserstein mode {self.wasserstein_mode!r}")
        object.__setattr__(self, "keys", tuple(self.keys))
        object.__setattr__(self, "learners", tuple(self.learners))

    def to_dict(self) -> dict:
        return {
            "original_path": self.original_path,
            "synthetic_paths": dict(self.synthetic_paths),
            "seed": self.seed,
            "keys": list(self.keys),
            "target": self.target,
            "aux_split": (
                {"side_a": list(self.aux_split.side_a), "side_b": list(self.aux_split.side_b)}
                if self.aux_split is not None
                else None
            ),
            "secret": self.secret,
            "n_attacks": self.n_attacks,
            "n_neighbors": self.n_neighbors,
            "singling_out_mode": self.singling_out_mode,
            "bins": self.bins,
            "wasserstein_mode": self.wasserstein_mode,
            "sinkhorn": self.sinkhorn.to_dict(),
            "learners": [dataclasses.asdict(lr) for lr in self.learners],
            "output_dir": self.output_dir,
        }


_CONFIG_KEYS = {
    "original_path",
    "synthetic_paths",
    "seed",
    "keys",
    "target",
    "aux_split",
    "secret",
    "n_attacks",
    "n_neighbors",
    "singling_out_mode",
    "bins",
    "wasserstein_mode",
    "sinkhorn",
    "learners",
    "output_dir",
}


def config_from_dict(raw: dict) -> EvalConfig:
    """Build a validated config from parsed JSON."""
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for required in ("original_path", "synthetic_paths", "seed"):
        if required not in raw:
            raise ValueError(f"config is missing required key {required!r}")
    if not isinstance(raw["synthetic_paths"], dict):
        raise ValueError("synthetic_paths must map model names to file paths")
    kwargs: dict = {
        "original_path": str(raw["original_path"]),
        "synthetic_paths": {str(k): str(v) for k, v in raw["synthetic_paths"].items()},
        "seed": raw["seed"],
    }
    for simple in (
        "target",
        "secret",
        "n_attacks",
        "n_neighbors",
        "singling_out_mode",
        "bins",
        "wasserstein_mode",
        "output_dir",
    ):
        if simple in raw:
            kwargs[simple] = raw[simple]
    if "keys" in raw:
        kwargs["keys"] = tuple(str(k) for k in raw["keys"])
    if raw.get("aux_split") is not None:
        aux = raw["aux_split"]
        if not isinstance(aux, dict) or set(aux) != {"side_a", "side_b"}:
            raise ValueError("aux_split must be an object with side_a and side_b lists")
        kwargs["aux_split"] = AuxSplit(tuple(aux["side_a"]), tuple(aux["side_b"]))
    if raw.get("sinkhorn") is not None:
        sk = raw["sinkhorn"]
        if not isinstance(sk, dict) or set(sk) - {"epsilon", "max_iter", "tol", "cap"}:
            raise ValueError("sinkhorn settings accept only epsilon, max_iter, tol, cap")
        kwargs["sinkhorn"] = SinkhornSettings(**sk)
    if raw.get("learners") is not None:
        learners = []
        for entry in raw["learners"]:
            if not isinstance(entry, dict):
                raise ValueError("each learner must be an object of settings")
            learners.append(Learner(**entry))
        kwargs["learners"] = tuple(learners)
    return EvalConfig(**kwargs)


def load_config(path: str | Path) -> EvalConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def validate_columns(config: EvalConfig, dataset: Dataset) -> None:
    """Fail before any computation if the config names unknown columns."""
    names = set(dataset.schema.names)

    def check(cols, label):
        missing = [c for c in cols if c not in names]
        if missing:
            raise ValueError(f"{label} column(s) not in the original table: {missing}")

    check(config.keys, "keys")
    if config.target is not None:
        check([config.target], "target")
    if config.secret is not None:
        check([config.secret], "secret")
    if config.aux_split is not None:
        check(config.aux_split.side_a, "aux_split.side_a")
        check(config.aux_split.side_b, "aux_split.side_b")


# ----------------------------------------------------------------- running


def _metric_seed(base: int, model: str, label: str) -> int:
    """Stable per-(model, metric) seed, independent of execution order."""
    mix = np.random.SeedSequence(
        [base, zlib.crc32(model.encode()), zlib.crc32(label.encode())]
    )
    return int(mix.generate_state(1)[0])


def _ok(data) -> dict:
    return {"status": "ok", "data": data}


def _skipped(reason: str, detail: str | None = None) -> dict:
    out = {"status": "skipped", "reason": reason}
    if detail:
        out["detail"] = detail
    return out


def _attempt(fn) -> dict:
    """Run one metric; any failure degrades to a skipped entry."""
    try:
        return _ok(fn())
    except Exception as exc:  # noqa: BLE001 - degrade, never abort the run
        return _skipped(f"metric_error:{type(exc).__name__}", str(exc))


def _capped(dataset: Dataset, cap: int, *, seed: int, notes: list, metric: str, table: str) -> Dataset:
    if dataset.n_rows <= cap:
        return dataset
    notes.append(
        {
            "metric": metric,
            "table": table,
            "rows_before": dataset.n_rows,
            "rows_after": cap,
        }
    )
    return sample_rows(dataset, cap, seed=seed)


def _load_synthetic(path: str, original: Dataset) -> Dataset:
    """Load one synthetic table and align it to the original's layout."""
    synthetic = load_csv(path)
    if set(synthetic.schema.names) != set(original.schema.names):
        raise ValueError(
            f"{path}: columns do not match the original table "
            f"({sorted(synthetic.schema.names)} vs {sorted(original.schema.names)})"
        )
    if synthetic.schema.names != original.schema.names:
        synthetic = synthetic.select(list(original.schema.names))
    for mine, ref in zip(synthetic.schema, original.schema):
        if mine.kind != ref.kind:
            raise ValueError(
                f"{path}: column {mine.name!r} is {mine.kind}, "
                f"original is {ref.kind}"
            )
    return synthetic


def _distance_pillar(name, original, synthetic, config, notes) -> dict:
    norm_o = normalize(original, original.schema)
    norm_s = normalize(synthetic, original.schema)
    seed_pair = _metric_seed(config.seed, name, "distance_cap")
    pair_o = _capped(norm_o, DISTANCE_ROW_CAP, seed=seed_pair, notes=notes, metric="nndr/dcr", table="original")
    pair_s = _capped(norm_s, DISTANCE_ROW_CAP, seed=seed_pair, notes=notes, metric="nndr/dcr", table="synthetic")
    seed_nnaa_cap = _metric_seed(config.seed, name, "nnaa_cap")
    nnaa_o = _capped(norm_o, NNAA_ROW_CAP, seed=seed_nnaa_cap, notes=notes, metric="nnaa", table="original")
    nnaa_s = _capped(norm_s, NNAA_ROW_CAP, seed=seed_nnaa_cap, notes=notes, metric="nnaa", table="synthetic")

    section: dict = {}
    if config.keys and config.target is not None:
        section["disco"] = _attempt(
            lambda: disco(original, synthetic, config.keys, config.target, bins=config.bins)
        )
    elif not config.keys:
        section["disco"] = _skipped("missing_config:keys")
    else:
        section["disco"] = _skipped("missing_config:target")
    if config.keys:
        section["rep_u"] = _attempt(
            lambda: rep_u(original, synthetic, config.keys, bins=config.bins)
        )
    else:
        section["rep_u"] = _skipped("missing_config:keys")
    section["nndr"] = _attempt(lambda: nndr(pair_s, pair_o))
    section["dcr"] = _attempt(lambda: dcr(pair_s, pair_o))
    seed_nnaa = _metric_seed(config.seed, name, "nnaa")
    section["nnaa"] = _attempt(lambda: nnaa(nnaa_o, nnaa_s, seed=seed_nnaa))
    section["settings"] = {
        "keys": list(config.keys),
        "target": config.target,
        "bins": config.bins,
        "n_original": original.n_rows,
        "n_synthetic": synthetic.n_rows,
    }
    return section


def _attack_pillar(name, original, synthetic, config, notes) -> dict:
    seed_cap = _metric_seed(config.seed, name, "attack_cap")
    att_o = _capped(original, ATTACK_ROW_CAP, seed=seed_cap, notes=notes, metric="attacks", table="original")
    att_s = _capped(synthetic, ATTACK_ROW_CAP, seed=seed_cap, notes=notes, metric="attacks", table="synthetic")

    section: dict = {
        "singling_out": _attempt(
            lambda: singling_out_risk(
                att_o,
                att_s,
                n_attacks=config.n_attacks,
                mode=config.singling_out_mode,
                seed=_metric_seed(config.seed, name, "singling_out"),
                bins=config.bins,
            ).to_dict()
        )
    }
    if config.aux_split is not None:
        section["linkability"] = _attempt(
            lambda: linkability_risk(
                att_o,
                att_s,
                config.aux_split,
                n_attacks=config.n_attacks,
                n_neighbors=config.n_neighbors,
                seed=_metric_seed(config.seed, name, "linkability"),
            ).to_dict()
        )
    else:
        section["linkability"] = _skipped("missing_config:aux_split")
    if config.secret is not None:
        aux_columns = [c for c in original.schema.names if c != config.secret]
        section["inference"] = _attempt(
            lambda: inference_risk(
                att_o,
                att_s,
                aux_columns,
                config.secret,
                n_attacks=config.n_attacks,
                seed=_metric_seed(config.seed, name, "inference"),
            ).to_dict()
        )
    else:
        section["inference"] = _skipped("missing_config:secret")
    return section


def _similarity_pillar(name, original, synthetic, config) -> dict:
    return _attempt(
        lambda: similarity_report(
            original,
            synthetic,
            seed=_metric_seed(config.seed, name, "similarity"),
            bins=config.bins,
            wasserstein_mode=config.wasserstein_mode,
            sinkhorn_epsilon=config.sinkhorn.epsilon,
            sinkhorn_max_iter=config.sinkhorn.max_iter,
            sinkhorn_tol=config.sinkhorn.tol,
            sinkhorn_cap=config.sinkhorn.cap,
        ).to_dict()
    )


def _utility_pillar(name, original, synthetic, config) -> dict:
    if config.target is None:
        return {"all": _skipped("missing_config:target")}
    section: dict = {}
    for learner in config.learners:
        key = learner.kind
        if key in section:
            suffix = 2
            while f"{key}#{suffix}" in section:
                suffix += 1
            key = f"{key}#{suffix}"
        section[key] = _attempt(
            lambda lr=learner: tstr_compare(
                original,
                synthetic,
                config.target,
                lr,
                seed=_metric_seed(config.seed, name, f"utility:{lr.kind}"),
            ).to_dict()
        )
    return section


def _plot_payload(dataset: Dataset, reference: Dataset, bins: int) -> dict:
    """Matrices and per-column summaries backing the plot CSV files."""
    payload: dict = {}
    try:
        names, matrix = correlation_matrix(dataset)
        payload["correlation"] = {"names": names, "matrix": matrix.tolist()}
    except ValueError:
        payload["correlation"] = None
    names, matrix = nmi_matrix(dataset, reference=reference.schema, bins=bins)
    payload["nmi"] = {"names": names, "matrix": matrix.tolist()}
    payload["stats"] = column_stats(dataset)
    return payload


def _evaluate_one(name: str, original: Dataset, config: EvalConfig) -> dict:
    synthetic = _load_synthetic(config.synthetic_paths[name], original)
    notes: list = []
    timings: dict = {}
    sections: dict = {}

    started = time.perf_counter()
    sections["distance_privacy"] = _distance_pillar(name, original, synthetic, config, notes)
    sections["attacks"] = _attack_pillar(name, original, synthetic, config, notes)
    timings["privacy"] = time.perf_counter() - started

    started = time.perf_counter()
    sections["similarity"] = _similarity_pillar(name, original, synthetic, config)
    timings["similarity"] = time.perf_counter() - started

    started = time.perf_counter()
    sections["utility"] = _utility_pillar(name, original, synthetic, config)
    timings["utility"] = time.perf_counter() - started

    sections["n_rows"] = synthetic.n_rows
    plots = _plot_payload(synthetic, original, config.bins)
    if sections["similarity"]["status"] == "ok":
        data = sections["similarity"]["data"]
        plots["ks_columns"] = data["ks_columns"]
        plots["ks_overall"] = data["ks"]
        plots["wasserstein_by_mode"] = data["wasserstein_by_mode"]
    return {"sections": sections, "notes": notes, "timings": timings, "plots": plots}


@dataclass(frozen=True)
class MetricReport:
    """Full outcome of one run: serializable sections plus side payloads.

    ``timings`` and ``plots`` are deliberately not part of
    :meth:`to_dict` — the JSON report must be byte-identical across
    runs, and plot payloads are emitted as CSV files instead.
    """

    config: dict
    versions: dict
    caps: dict
    models: dict
    timings: dict = field(compare=False, repr=False, default_factory=dict)
    plots: dict = field(compare=False, repr=False, default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "versions": self.versions,
            "caps": self.caps,
            "models": self.models,
        }


def _versions() -> dict:
    return {
        "syntab": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def run_evaluation(config: EvalConfig) -> MetricReport:
    """Evaluate every configured synthetic table against the original.

    Per synthetic table the pillars run in a fixed order (privacy,
    similarity, utility); tables are processed concurrently.  Input and
    configuration problems raise; individual metric failures are
    reported as skipped entries with a machine-readable reason.
    """
    original = load_csv(config.original_path)
    validate_columns(config, original)

    names = list(config.synthetic_paths)
    total_start = time.perf_counter()
    if len(names) == 1:
        results = [_evaluate_one(names[0], original, config)]
    else:
        with concurrent.futures.ThreadPoolExecutor(
            max_workers=min(4, len(names))
        ) as pool:
            results = list(
                pool.map(lambda n: _evaluate_one(n, original, config), names)
            )

    models = {}
    caps = {}
    timings: dict = {"models": {}}
    plots: dict = {
        "original": _plot_payload(original, original, config.bins),
        "models": {},
    }
    for name, outcome in zip(names, results):
        models[name] = outcome["sections"]
        caps[name] = outcome["notes"]
        timings["models"][name] = outcome["timings"]
        plots["models"][name] = outcome["plots"]
    timings["total"] = time.perf_counter() - total_start

    return MetricReport(
        config=config.to_dict(),
        versions=_versions(),
        caps=caps,
        models=models,
        timings=timings,
        plots=plots,
    )


# ---------------------------------------------------------------- emission


def _trim_decimal(value: float) -> str:
    text = f"{value:.4f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


def format_risk_cell(estimate: dict) -> str:
    """Risk with its confidence interval, e.g. ``0.9961,CI=(0.9923, 1.0)``."""
    return (
        f"{estimate['risk']:.4f},"
        f"CI=({_trim_decimal(estimate['ci_low'])}, {_trim_decimal(estimate['ci_high'])})"
    )


def _cell(entry: dict, render) -> str:
    if entry["status"] != "ok":
        return f"skipped ({entry['reason']})"
    return render(entry["data"])


def _md_table(headers: list, rows: list) -> list:
    lines = ["| " + " | ".join(headers) + " |"]
    lines.append("|" + "|".join(" --- " for _ in headers) + "|")
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return lines


def render_markdown(report: MetricReport) -> str:
    doc = report.to_dict()
    cfg = doc["config"]
    lines = ["# Synthetic data evaluation", ""]
    lines.append(f"Original table: `{cfg['original_path']}`; seed {cfg['seed']}.")
    lines.append("")

    lines.append("## Distance-based privacy")
    lines.append("")
    rows = []
    for name, model in doc["models"].items():
        section = model["distance_privacy"]
        rows.append(
            [
                name,
                _cell(section["disco"], lambda v: f"{v:.2f}"),
                _cell(section["rep_u"], lambda v: f"{v:.2f}"),
                _cell(section["nndr"], lambda v: f"{v:.2f}"),
                _cell(section["dcr"], lambda v: f"{v:.2f}"),
                _cell(section["nnaa"], lambda v: f"{v:.2f}"),
            ]
        )
    lines.extend(_md_table(["model", "DiSCO", "repU", "NNDR", "DCR", "NNAA"], rows))
    lines.append("")

    lines.append("## Attack-based privacy")
    lines.append("")
    rows = []
    for name, model in doc["models"].items():
        attacks = model["attacks"]
        rows.append(
            [
                name,
                _cell(attacks["singling_out"], format_risk_cell),
                _cell(attacks["linkability"], format_risk_cell),
                _cell(attacks["inference"], format_risk_cell),
            ]
        )
    lines.extend(_md_table(["model", "singling out", "linkability", "inference"], rows))
    lines.append("")

    lines.append("## Statistical similarity")
    lines.append("")

    def fmt_opt(value):
        return "n/a" if value is None else f"{value:.4f}"

    rows = []
    for name, model in doc["models"].items():
        entry = model["similarity"]
        if entry["status"] != "ok":
            rows.append([name] + [f"skipped ({entry['reason']})"] + ["—"] * 7)
            continue
        data = entry["data"]
        stats = data["stats"] or {}
        rows.append(
            [
                name,
                f"{fmt_opt(data['wasserstein'])} ({data['wasserstein_mode']})",
                fmt_opt(data["ks"]),
                fmt_opt(data["correlation_pearson"]),
                fmt_opt(data["nmi"]),
                fmt_opt(data["js"]),
                fmt_opt(stats.get("mean_diff")),
                fmt_opt(stats.get("median_diff")),
                fmt_opt(stats.get("var_diff")),
            ]
        )
    lines.extend(
        _md_table(
            ["model", "Wasserstein", "KS", "Corr", "NMI", "JS", "mean diff", "median diff", "var diff"],
            rows,
        )
    )
    lines.append("")

    lines.append("## ML utility (TRTR vs TSTR)")
    lines.append("")
    rows = []
    for name, model in doc["models"].items():
        for learner_name, entry in model["utility"].items():
            if entry["status"] != "ok":
                rows.append([name, learner_name] + [f"skipped ({entry['reason']})"] + ["—"] * 5)
                continue
            data = entry["data"]
            rows.append(
                [
                    name,
                    learner_name,
                    fmt_opt(data["trtr"]["accuracy"]),
                    fmt_opt(data["tstr"]["accuracy"]),
                    fmt_opt(data["trtr"]["f1"]),
                    fmt_opt(data["tstr"]["f1"]),
                    fmt_opt(data["trtr"]["auc"]),
                    fmt_opt(data["tstr"]["auc"]),
                ]
            )
    lines.extend(
        _md_table(
            ["model", "learner", "acc TRTR", "acc TSTR", "f1 TRTR", "f1 TSTR", "auc TRTR", "auc TSTR"],
            rows,
        )
    )
    lines.append("")

    skipped = []
    for name, model in doc["models"].items():
        for pillar in ("distance_privacy", "attacks", "utility"):
            for metric, entry in model[pillar].items():
                if isinstance(entry, dict) and entry.get("status") == "skipped":
                    skipped.append(f"- {name}/{pillar}/{metric}: `{entry['reason']}`")
        if model["similarity"].get("status") == "skipped":
            skipped.append(f"- {name}/similarity: `{model['similarity']['reason']}`")
    if skipped:
        lines.append("## Skipped metrics")
        lines.append("")
        lines.extend(skipped)
        lines.append("")
    return "\n".join(lines)


def emit_report(report: MetricReport, output_dir: str | Path, *, format: str = "json") -> list:
    """Write ``report.json`` and/or ``report.md``; returns written paths."""
    if format not in ("json", "markdown", "both"):
        raise ValueError(f"unknown report format {format!r}")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if format in ("json", "both"):
        path = out / "report.json"
        path.write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        written.append(path)
    if format in ("markdown", "both"):
        path = out / "report.md"
        path.write_text(render_markdown(report), encoding="utf-8")
        written.append(path)
    return written


def _write_csv(path: Path, header: list, rows: list) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_matrix(path: Path, payload: dict) -> None:
    names = payload["names"]
    rows = [
        [name] + [repr(float(v)) for v in row]
        for name, row in zip(names, payload["matrix"])
    ]
    _write_csv(path, ["column"] + list(names), rows)


def emit_plot_data(report: MetricReport, output_dir: str | Path) -> list:
    """Write plot-ready CSVs: per-column KS scores, correlation and NMI
    matrices, per-column summary-statistic series, and the
    transport-estimate comparison across modes."""
    out = Path(output_dir) / "plots"
    out.mkdir(parents=True, exist_ok=True)
    written = []

    model_plots = report.plots.get("models", {})
    original_plots = report.plots.get("original", {})

    ks_models = {
        name: payload
        for name, payload in model_plots.items()
        if "ks_columns" in payload
    }
    if ks_models:
        columns = sorted(
            {col for payload in ks_models.values() for col in payload["ks_columns"]}
        )
        rows = []
        for name, payload in ks_models.items():
            per_col = payload["ks_columns"]
            rows.append(
                [name]
                + [repr(float(per_col[c])) if c in per_col else "" for c in columns]
                + [repr(float(payload["ks_overall"]))]
            )
        path = out / "ks_scores.csv"
        _write_csv(path, ["model"] + columns + ["overall"], rows)
        written.append(path)

    for label, payload in [("original", original_plots)] + [
        (name, p) for name, p in model_plots.items()
    ]:
        if payload.get("correlation"):
            path = out / f"correlation_{label}.csv"
            _write_matrix(path, payload["correlation"])
            written.append(path)
        if payload.get("nmi"):
            path = out / f"nmi_{label}.csv"
            _write_matrix(path, payload["nmi"])
            written.append(path)

    stats_rows = []
    for label, payload in [("original", original_plots)] + [
        (name, p) for name, p in model_plots.items()
    ]:
        for column, stats in payload.get("stats", {}).items():
            stats_rows.append(
                [
                    label,
                    column,
                    repr(float(stats["mean"])),
                    repr(float(stats["median"])),
                    repr(float(stats["var"])),
                ]
            )
    if stats_rows:
        path = out / "column_stats.csv"
        _write_csv(path, ["table", "column", "mean", "median", "variance"], stats_rows)
        written.append(path)

    ws_rows = []
    for name, payload in model_plots.items():
        for mode, value in payload.get("wasserstein_by_mode", {}).items():
            ws_rows.append([name, mode, repr(float(value))])
    if ws_rows:
        path = out / "wasserstein_modes.csv"
        _write_csv(path, ["model", "mode", "value"], ws_rows)
        written.append(path)
    return written
