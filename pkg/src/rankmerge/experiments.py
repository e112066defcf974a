"""Experiment protocols: subset ablation, one-at-a-time sweeps, provenance listings."""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Mapping, Sequence, TypeVar

from .dataset import Dataset
from .ensemble import EnsembleConfig, MergedRanking, blend_all, ensemble_all, two_step_rank
from .errors import ValidationError
from .metrics import DEFAULT_RECALL_KS, MetricsReport, evaluate
from .rankings import ModelRun, get_run

log = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# (H, T, N) on/off pattern, in the order the ablation table lists its rows.
ABLATION_ROWS: tuple[tuple[bool, bool, bool], ...] = (
    (True, False, False),
    (False, True, False),
    (False, False, True),
    (False, True, True),
    (True, False, True),
    (True, True, False),
    (True, True, True),
)

HYPERPARAMETERS = ("rho_h", "rho_t", "rho_nn", "rho_nm", "p")
SWEEP_PARAMETERS = HYPERPARAMETERS + ("alpha",)

# Default grid per parameter; one CSV per hyperparameter panel.
DEFAULT_GRIDS: dict[str, tuple[float, ...]] = {
    "rho_h": tuple(range(0, 11)),
    "rho_t": tuple(range(0, 11)),
    "rho_nn": tuple(range(0, 21)),
    "rho_nm": tuple(range(0, 21)),
    "p": tuple(x / 2 for x in range(1, 13)),
    "alpha": tuple(round(i * 0.05, 2) for i in range(21)),
}


def _parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: int) -> list[R]:
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def evaluate_two_step(
    ds: Dataset,
    runs: Mapping[str, ModelRun],
    config: EnsembleConfig,
    *,
    recall_ks: Sequence[int] = DEFAULT_RECALL_KS,
    ndcg_skip_empty: bool = False,
    threads: int = 1,
) -> tuple[MetricsReport, list[MergedRanking]]:
    merged = ensemble_all(runs, config, ds.question_ids, threads=threads)
    report = evaluate(
        {m.question_id: m.rank_vector for m in merged},
        ds,
        recall_ks=recall_ks,
        ndcg_skip_empty=ndcg_skip_empty,
        mrr_set_sizes={m.question_id: m.mrr_set_size for m in merged},
    )
    return report, merged


def evaluate_run(
    ds: Dataset,
    run: ModelRun,
    *,
    recall_ks: Sequence[int] = DEFAULT_RECALL_KS,
    ndcg_skip_empty: bool = False,
) -> MetricsReport:
    """Metrics of a single model's own ranking."""
    return evaluate(
        {q.question_id: run.rank_vector(q.question_id) for q in ds},
        ds,
        recall_ks=recall_ks,
        ndcg_skip_empty=ndcg_skip_empty,
    )


# -- ablation -----------------------------------------------------------------


@dataclass(frozen=True)
class AblationRow:
    enable_H: bool
    enable_T: bool
    enable_N: bool
    report: MetricsReport


def run_ablation(
    ds: Dataset,
    runs: Mapping[str, ModelRun],
    base: EnsembleConfig,
    *,
    recall_ks: Sequence[int] = DEFAULT_RECALL_KS,
    ndcg_skip_empty: bool = False,
    threads: int = 1,
) -> list[AblationRow]:
    """Evaluate all seven non-empty subset combinations, everything else held at ``base``."""

    def row(flags: tuple[bool, bool, bool]) -> AblationRow:
        h, t, n = flags
        cfg = replace(base, enable_H=h, enable_T=t, enable_N=n)
        report, _ = evaluate_two_step(ds, runs, cfg, recall_ks=recall_ks, ndcg_skip_empty=ndcg_skip_empty)
        return AblationRow(h, t, n, report)

    return _parallel_map(row, ABLATION_ROWS, threads)


def ablation_csv(rows: Sequence[AblationRow]) -> str:
    if not rows:
        raise ValidationError("no ablation rows")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    metric_keys = _metric_columns(rows[0].report)
    writer.writerow(["H", "T", "N", *metric_keys])
    for r in rows:
        writer.writerow([int(r.enable_H), int(r.enable_T), int(r.enable_N), *_metric_cells(r.report, metric_keys)])
    return buf.getvalue()


# -- sweeps -------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    """One-at-a-time sweep: vary ``parameter`` over ``values``, hold the rest at ``base_config``.

    ``objective`` weights (MRR, NDCG) when picking the best value.
    """

    parameter: str
    values: tuple[float, ...]
    base_config: EnsembleConfig
    objective: tuple[float, float] = (0.5, 0.5)

    def __post_init__(self) -> None:
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValidationError(f"unknown sweep parameter {self.parameter!r}; expected one of {SWEEP_PARAMETERS}")
        values = tuple(self.values)
        if not values:
            raise ValidationError("sweep values must be non-empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValidationError("sweep values must be strictly increasing")
        if self.parameter == "alpha" and not all(0.0 <= v <= 1.0 for v in values):
            raise ValidationError("alpha values must lie in [0, 1]")
        object.__setattr__(self, "values", values)
        w_mrr, w_ndcg = self.objective
        if not w_mrr + w_ndcg > 0:
            raise ValidationError("objective weights must sum to a positive value")
        # Fail on invalid hyperparameter values before any evaluation runs.
        if self.parameter != "alpha":
            for v in values:
                self.config_for(v)

    def config_for(self, value: float) -> EnsembleConfig:
        if self.parameter == "alpha":
            return self.base_config
        return replace(self.base_config, **{self.parameter: value})


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    rows: tuple[tuple[float, MetricsReport], ...]
    objective: tuple[float, float]

    def score(self, report: MetricsReport) -> float:
        w_mrr, w_ndcg = self.objective
        return w_mrr * report.mrr + w_ndcg * (report.ndcg if report.ndcg is not None else 0.0)

    @property
    def best_index(self) -> int:
        """Index of the first row maximizing the weighted objective."""
        scores = [self.score(r) for _, r in self.rows]
        return scores.index(max(scores))

    @property
    def best_value(self) -> float:
        return self.rows[self.best_index][0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        metric_keys = _metric_columns(self.rows[0][1])
        writer.writerow(["value", *metric_keys])
        for value, report in self.rows:
            writer.writerow([_fmt(value), *_metric_cells(report, metric_keys)])
        return buf.getvalue()


def run_sweep(
    ds: Dataset,
    runs: Mapping[str, ModelRun],
    spec: SweepSpec,
    *,
    recall_ks: Sequence[int] = DEFAULT_RECALL_KS,
    ndcg_skip_empty: bool = False,
    threads: int = 1,
) -> SweepResult:
    """Evaluate each sweep value.  ``alpha`` sweeps the naive score blend of the
    primary MRR model and the NDCG model; every other parameter sweeps the
    two-step ensemble."""
    base = spec.base_config

    def point(value: float) -> tuple[float, MetricsReport]:
        if spec.parameter == "alpha":
            mrr_run = get_run(runs, base.primary_mrr_model)  # type: ignore[arg-type]
            ndcg_run = get_run(runs, base.ndcg_model_id)
            ranked = blend_all(mrr_run, ndcg_run, float(value), ds.question_ids)
            return value, evaluate(ranked, ds, recall_ks=recall_ks, ndcg_skip_empty=ndcg_skip_empty)
        report, _ = evaluate_two_step(
            ds, runs, spec.config_for(value), recall_ks=recall_ks, ndcg_skip_empty=ndcg_skip_empty
        )
        return value, report

    rows = _parallel_map(point, spec.values, threads)
    result = SweepResult(spec.parameter, tuple(rows), spec.objective)
    log.info("sweep %s: best value %s", spec.parameter, _fmt(result.best_value))
    return result


def run_panels(
    ds: Dataset,
    runs: Mapping[str, ModelRun],
    base: EnsembleConfig,
    *,
    grids: Mapping[str, Sequence[float]] | None = None,
    objective: tuple[float, float] = (0.5, 0.5),
    recall_ks: Sequence[int] = DEFAULT_RECALL_KS,
    ndcg_skip_empty: bool = False,
    threads: int = 1,
) -> dict[str, SweepResult]:
    """One sweep per ensemble hyperparameter (five panels)."""
    grids = dict(DEFAULT_GRIDS, **(grids or {}))
    out = {}
    for param in HYPERPARAMETERS:
        spec = SweepSpec(param, tuple(grids[param]), base, objective)
        out[param] = run_sweep(ds, runs, spec, recall_ks=recall_ks, ndcg_skip_empty=ndcg_skip_empty, threads=threads)
    return out


# -- provenance listing -------------------------------------------------------


def provenance_report(
    ds: Dataset,
    runs: Mapping[str, ModelRun],
    config: EnsembleConfig,
    question_ids: Sequence[str],
    remainder_depth: int = 10,
) -> str:
    """Plain-text listing per question: the ranked MRR candidate set with
    ``[H]``/``[T]``/``[N]`` tags, then the next ``remainder_depth`` candidates
    of the NDCG step."""
    if remainder_depth < 0:
        raise ValidationError("remainder_depth must be nonnegative")
    blocks = []
    for qid in question_ids:
        q = ds[qid]
        merged = two_step_rank(runs, config, qid)
        lines = [f"Question: {qid}"]
        if merged.mrr_set_size:
            lines.append("MRR candidate set")
            for i, cand in enumerate(merged.mrr_set, start=1):
                lines.append(f"  {i:>2}. [{merged.provenance[cand].value}] {q.label(cand)}")
        remainder = merged.order[merged.mrr_set_size : merged.mrr_set_size + remainder_depth]
        lines.append(f"Top {remainder_depth} from the remaining NDCG candidates")
        for i, cand in enumerate(remainder, start=1):
            lines.append(f"  {i:>2}. {q.label(cand)}")
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


# -- formatting helpers ---------------------------------------------------------


def _fmt(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _metric_columns(report: MetricsReport) -> list[str]:
    return ["mrr", *(f"r@{k}" for k in report.recall_at), "mean_rank", "ndcg", "avg_set_size"]


def _metric_cells(report: MetricsReport, columns: Sequence[str]) -> list[str]:
    values = report.to_dict()
    return [_fmt(values[c]) for c in columns]
