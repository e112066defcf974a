"""Command-line entry point: ``rankmerge <subcommand> ...``.

Settings resolve as: command-line flag, then ``--config`` JSON file, then
built-in defaults (rho_h=3, rho_t=1, rho_nn=5, rho_nm=10, p=3).

Exit codes: 0 success, 1 usage error, 2 data validation error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .dataset import Dataset, dumps_dataset, load_dataset, validate_run_against_dataset
from .ensemble import EnsembleConfig, blend_all, ensemble_all
from .errors import RankMergeError, ValidationError
from .experiments import (
    DEFAULT_GRIDS,
    HYPERPARAMETERS,
    SWEEP_PARAMETERS,
    SweepSpec,
    ablation_csv,
    provenance_report,
    run_ablation,
    run_sweep,
)
from .jsonl import dumps_record, read_records, source_name, write_text_atomic
from .metrics import DEFAULT_RECALL_KS, evaluate
from .rankings import ModelRun, RankVector, dumps_run, load_run, runs_by_id
from .synthetic import SynthSpec, generate_synthetic

log = logging.getLogger("rankmerge")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
THREADS_ENV = "RANKMERGE_THREADS"

DEFAULTS: dict[str, Any] = {
    "rho_h": 3,
    "rho_t": 1,
    "rho_nn": 5,
    "rho_nm": 10,
    "p": 3.0,
    "alpha": 0.8,
    "mode": "two-step",
    "disable_h": False,
    "disable_t": False,
    "disable_n": False,
    "primary_mrr": None,
    "recall_ks": DEFAULT_RECALL_KS,
    "ndcg_skip_empty": False,
    "objective": (0.5, 0.5),
    "remainder_depth": 10,
}


class UsageError(RankMergeError):
    pass


# -- argument types -------------------------------------------------------------


def nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"nonnegative integer required, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"nonnegative integer required, got {text!r}")
    return value


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"positive integer required, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"positive integer required, got {text!r}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"positive number required, got {text!r}") from None
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"positive number required, got {text!r}")
    return value


def unit_float(text: str) -> float:
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"number in [0, 1] required, got {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"number in [0, 1] required, got {text!r}")
    return value


def int_list(text: str) -> tuple[int, ...]:
    return tuple(positive_int(part.strip()) for part in text.split(",") if part.strip())


def float_pair(text: str) -> tuple[float, float]:
    parts = [p.strip() for p in text.split(",")]
    try:
        a, b = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}") from None
    return a, b


def value_list(text: str) -> tuple[str, ...]:
    # Typed per parameter once --parameter is known.
    parts = tuple(p.strip() for p in text.split(",") if p.strip())
    if not parts:
        raise argparse.ArgumentTypeError("at least one value required")
    return parts


_CONFIG_TYPES = {
    "rho_h": nonneg_int,
    "rho_t": nonneg_int,
    "rho_nn": nonneg_int,
    "rho_nm": nonneg_int,
    "p": positive_float,
    "alpha": unit_float,
    "remainder_depth": nonneg_int,
    "threads": positive_int,
}


# -- parser -------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON file with default settings (flags override it)")
    p.add_argument("-o", "--output", metavar="PATH", help="write output here (atomically) instead of stdout")
    p.add_argument("--threads", type=positive_int, help=f"worker threads (env {THREADS_ENV}; default: CPU count)")
    p.add_argument("-v", "--verbose", action="count", default=0)


def _add_data(p: argparse.ArgumentParser, *, runs: bool = True) -> None:
    p.add_argument("--annotations", metavar="PATH", help="annotation JSONL file")
    if runs:
        p.add_argument("--mrr-run", metavar="PATH", action="append", default=[], help="MRR-model prediction file (repeatable)")
        p.add_argument("--ndcg-run", metavar="PATH", help="NDCG-model prediction file")


def _add_metric_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--recall-ks", type=int_list, metavar="K,K,..", help="recall cut-offs (default 1,5,10)")
    p.add_argument(
        "--ndcg-skip-empty",
        action="store_true",
        default=None,
        help="leave questions with no relevant candidate out of the NDCG mean instead of counting 0",
    )


def _add_ensemble_opts(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("ensemble hyperparameters")
    g.add_argument("--rho-h", type=nonneg_int, help="high-certainty prefix (default 3)")
    g.add_argument("--rho-t", type=nonneg_int, help="top-answers prefix (default 1)")
    g.add_argument("--rho-nn", type=nonneg_int, help="NDCG-model prefix of the agreement set (default 5)")
    g.add_argument("--rho-nm", type=nonneg_int, help="MRR-model prefix of the agreement set (default 10)")
    g.add_argument("--p", type=positive_float, help="calibration exponent of the NDCG step (default 3)")
    g.add_argument("--disable-h", action="store_true", default=None, help="drop the high-certainty subset")
    g.add_argument("--disable-t", action="store_true", default=None, help="drop the top-answers subset")
    g.add_argument("--disable-n", action="store_true", default=None, help="drop the NDCG-agreement subset")
    g.add_argument("--primary-mrr", metavar="MODEL_ID", help="most accurate MRR model (default: first --mrr-run)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="rankmerge",
        description=__doc__.split("\n\n")[0],
        epilog="Precedence: command-line flag > --config file > built-in defaults.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("evaluate", help="score a prediction file or merged ranking")
    _add_common(p)
    _add_data(p, runs=False)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--run", metavar="PATH", help="prediction file (scores or ranks)")
    src.add_argument("--merged", metavar="PATH", help="merged-ranking JSONL from 'ensemble'")
    p.add_argument("--json", action="store_true", help="emit one JSON record instead of a text table")
    _add_metric_opts(p)

    p = sub.add_parser("ensemble", help="merge MRR and NDCG model rankings")
    _add_common(p)
    _add_data(p)
    _add_ensemble_opts(p)
    p.add_argument("--mode", choices=("two-step", "blend"), help="two-step ensemble (default) or naive score blend")
    p.add_argument("--alpha", type=unit_float, help="blend weight of the MRR model (blend mode; default 0.8)")

    p = sub.add_parser("blend", help="naive score blend alpha*S_mrr + (1-alpha)*S_ndcg")
    _add_common(p)
    _add_data(p)
    p.add_argument("--primary-mrr", metavar="MODEL_ID", help="MRR model to blend (default: first --mrr-run)")
    p.add_argument("--alpha", type=unit_float, help="weight of the MRR model scores (default 0.8)")

    p = sub.add_parser("sweep", help="one-at-a-time hyperparameter sweep, CSV output")
    _add_common(p)
    _add_data(p)
    _add_ensemble_opts(p)
    _add_metric_opts(p)
    target = p.add_mutually_exclusive_group()
    target.add_argument("--parameter", choices=SWEEP_PARAMETERS)
    target.add_argument(
        "--all-panels", action="store_true", help="sweep each of the five hyperparameters into --output-dir"
    )
    p.add_argument("--values", type=value_list, metavar="V,V,..", help="strictly increasing grid (default per parameter)")
    p.add_argument("--objective", type=float_pair, metavar="W_MRR,W_NDCG", help="objective weights (default 0.5,0.5)")
    p.add_argument("--output-dir", metavar="DIR", help="directory for --all-panels CSVs")

    p = sub.add_parser("ablate", help="evaluate the seven subset on/off combinations, CSV output")
    _add_common(p)
    _add_data(p)
    _add_ensemble_opts(p)
    _add_metric_opts(p)

    p = sub.add_parser("report", help="provenance listing of merged rankings")
    _add_common(p)
    _add_data(p)
    _add_ensemble_opts(p)
    p.add_argument("--question", metavar="QID", action="append", default=[], help="question to list (repeatable)")
    p.add_argument("--limit", type=nonneg_int, help="list the first N questions when no --question is given (default 10)")
    p.add_argument("--remainder-depth", type=nonneg_int, help="remainder candidates shown per question (default 10)")

    p = sub.add_parser("synth", help="write a seeded synthetic corpus and model runs")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("--out-dir", metavar="DIR", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--d", type=positive_int, default=2000, help="question count (default 2000)")
    p.add_argument("--n", type=positive_int, default=100, help="candidates per question (default 100)")
    p.add_argument("--n-m", type=positive_int, default=2, help="MRR model count (default 2)")
    p.add_argument("--mrr-fidelity", type=unit_float, default=0.7)
    p.add_argument("--ndcg-fidelity", type=unit_float, default=0.9)
    return parser


# -- invocation config ----------------------------------------------------------------


@dataclass
class InvocationConfig:
    subcommand: str
    annotations: str | None = None
    mrr_runs: list[str] = field(default_factory=list)
    ndcg_run: str | None = None
    run_path: str | None = None
    merged_path: str | None = None
    output: str | None = None
    output_dir: str | None = None
    verbosity: int = 0
    threads: int = 1
    settings: dict[str, Any] = field(default_factory=dict)


def _resolve_threads(flag: int | None, config: dict[str, Any]) -> int:
    if flag is not None:
        return flag
    if "threads" in config:
        return config["threads"]
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return positive_int(env)
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"{THREADS_ENV}: {exc}") from None
    return os.cpu_count() or 1


def _load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file {path}: {exc.msg} (line {exc.lineno})") from None
    if not isinstance(raw, dict):
        raise ValidationError(f"config file {path}: expected a JSON object")
    out: dict[str, Any] = {}
    for key, value in raw.items():
        key = key.replace("-", "_")
        conv = _CONFIG_TYPES.get(key)
        try:
            if conv is not None:
                value = conv(str(value))
            elif key == "recall_ks":
                value = tuple(positive_int(str(k)) for k in value)
            elif key == "objective":
                value = tuple(float(x) for x in value)
                if len(value) != 2:
                    raise argparse.ArgumentTypeError("objective needs two weights")
            elif key in ("disable_h", "disable_t", "disable_n", "ndcg_skip_empty"):
                if not isinstance(value, bool):
                    raise argparse.ArgumentTypeError("boolean required")
            elif key == "mode":
                if value not in ("two-step", "blend"):
                    raise argparse.ArgumentTypeError("mode must be 'two-step' or 'blend'")
            elif key == "primary_mrr":
                if not isinstance(value, str):
                    raise argparse.ArgumentTypeError("model id string required")
            else:
                raise argparse.ArgumentTypeError("unknown setting")
        except (argparse.ArgumentTypeError, TypeError, ValueError) as exc:
            raise UsageError(f"config file {path}: {key}: {exc}") from None
        out[key] = value
    return out


_REQUIRES_ANNOTATIONS = ("evaluate", "ensemble", "blend", "sweep", "ablate", "report")
_REQUIRES_RUNS = ("ensemble", "blend", "sweep", "ablate", "report")


def parse_args(argv: Sequence[str] | None = None) -> InvocationConfig:
    """Parse ``argv`` and apply precedence (flag > config file > defaults)."""
    ns = build_parser().parse_args(argv)
    if ns.subcommand == "synth":
        return InvocationConfig(
            subcommand="synth",
            output_dir=ns.out_dir,
            verbosity=ns.verbose,
            settings={
                "spec": SynthSpec(ns.d, ns.n, ns.n_m, ns.mrr_fidelity, ns.ndcg_fidelity, ns.seed),
            },
        )

    file_cfg = _load_config_file(ns.config) if ns.config else {}
    settings: dict[str, Any] = {}
    for key, default in DEFAULTS.items():
        flag = getattr(ns, key, None)
        settings[key] = flag if flag is not None else file_cfg.get(key, default)

    inv = InvocationConfig(
        subcommand=ns.subcommand,
        annotations=ns.annotations,
        mrr_runs=list(getattr(ns, "mrr_run", [])),
        ndcg_run=getattr(ns, "ndcg_run", None),
        run_path=getattr(ns, "run", None),
        merged_path=getattr(ns, "merged", None),
        output=ns.output,
        output_dir=getattr(ns, "output_dir", None),
        verbosity=ns.verbose,
        threads=_resolve_threads(ns.threads, file_cfg),
        settings=settings,
    )

    if inv.subcommand in _REQUIRES_ANNOTATIONS and not inv.annotations:
        raise UsageError(f"{inv.subcommand}: --annotations is required")
    if inv.subcommand in _REQUIRES_RUNS:
        if not inv.mrr_runs:
            raise UsageError(f"{inv.subcommand}: at least one --mrr-run is required")
        if not inv.ndcg_run:
            raise UsageError(f"{inv.subcommand}: --ndcg-run is required")
    if inv.subcommand == "evaluate" and not (inv.run_path or inv.merged_path):
        raise UsageError("evaluate: one of --run or --merged is required")
    if inv.subcommand == "evaluate":
        settings["json"] = ns.json
    if inv.subcommand == "report":
        settings["questions"] = list(ns.question)
        settings["limit"] = ns.limit if ns.limit is not None else 10
    if inv.subcommand == "sweep":
        _resolve_sweep(ns, inv)
    return inv


def _typed_values(parameter: str, raw: Sequence[str]) -> tuple[float, ...]:
    conv = {"alpha": unit_float, "p": positive_float}.get(parameter, nonneg_int)
    try:
        return tuple(conv(v) for v in raw)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"sweep --values for {parameter}: {exc}") from None


def _resolve_sweep(ns: argparse.Namespace, inv: InvocationConfig) -> None:
    s = inv.settings
    if ns.all_panels:
        if ns.values:
            raise UsageError("sweep: --values cannot be combined with --all-panels")
        if not inv.output_dir:
            raise UsageError("sweep: --all-panels requires --output-dir")
        s["parameters"] = list(HYPERPARAMETERS)
        s["values"] = {p: DEFAULT_GRIDS[p] for p in HYPERPARAMETERS}
    else:
        if not ns.parameter:
            raise UsageError("sweep: one of --parameter or --all-panels is required")
        s["parameters"] = [ns.parameter]
        values = _typed_values(ns.parameter, ns.values) if ns.values else DEFAULT_GRIDS[ns.parameter]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise UsageError("sweep: --values must be strictly increasing")
        s["values"] = {ns.parameter: values}
    w = s["objective"]
    if not w[0] + w[1] > 0:
        raise UsageError("sweep: objective weights must sum to a positive value")


# -- execution --------------------------------------------------------------------------


def _emit(inv: InvocationConfig, text: str) -> None:
    if inv.output:
        write_text_atomic(inv.output, text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _load_inputs(inv: InvocationConfig) -> tuple[Dataset, list[ModelRun], ModelRun]:
    ds = load_dataset(inv.annotations)  # type: ignore[arg-type]
    mrr_runs = [load_run(p) for p in inv.mrr_runs]
    ndcg_run = load_run(inv.ndcg_run)  # type: ignore[arg-type]
    for run in [*mrr_runs, ndcg_run]:
        validate_run_against_dataset(run, ds)
        ties = run.tie_fraction()
        if ties:
            log.info("run %s: %.4f of questions contain tied scores", run.model_id, ties)
    return ds, mrr_runs, ndcg_run


def _ensemble_config(inv: InvocationConfig, mrr_runs: list[ModelRun], ndcg_run: ModelRun) -> EnsembleConfig:
    s = inv.settings
    ids = [r.model_id for r in mrr_runs]
    if ndcg_run.model_id in ids:
        raise ValidationError(f"NDCG run model_id {ndcg_run.model_id!r} clashes with an MRR run")
    cfg = EnsembleConfig(
        mrr_model_ids=tuple(ids),
        ndcg_model_id=ndcg_run.model_id,
        primary_mrr_model=s.get("primary_mrr"),
        rho_h=s["rho_h"],
        rho_t=s["rho_t"],
        rho_nn=s["rho_nn"],
        rho_nm=s["rho_nm"],
        p=s["p"],
        enable_H=not s["disable_h"],
        enable_T=not s["disable_t"],
        enable_N=not s["disable_n"],
    )
    if not cfg.any_subset_enabled:
        log.warning("all subsets disabled: output is the NDCG-step ordering of every candidate")
    return cfg


def _load_merged(path: str, ds: Dataset) -> tuple[dict[str, RankVector], dict[str, int] | None]:
    name = source_name(path)
    rankings: dict[str, RankVector] = {}
    sizes: dict[str, int] = {}
    have_prov = True
    for lineno, rec in read_records(path):
        qid = rec.get("question_id")
        order = rec.get("order")
        if not isinstance(qid, str) or not isinstance(order, list):
            raise ValidationError("merged record needs question_id and order", line=lineno, source=name)
        if qid in rankings:
            raise ValidationError(f"duplicate question_id {qid!r}", line=lineno, source=name)
        try:
            rankings[qid] = RankVector.from_order([int(c) for c in order])
        except (ValidationError, TypeError, ValueError) as exc:
            raise ValidationError(f"question {qid!r}: {exc}", line=lineno, source=name) from None
        prov = rec.get("provenance")
        if isinstance(prov, list):
            sizes[qid] = sum(1 for tag in prov if tag != "R")
        else:
            have_prov = False
    extra = [q for q in rankings if q not in ds]
    if extra:
        raise ValidationError(f"merged ranking has extra question {extra[0]!r} not in dataset", source=name)
    return rankings, (sizes if have_prov and sizes else None)


def _cmd_evaluate(inv: InvocationConfig) -> None:
    s = inv.settings
    ds = load_dataset(inv.annotations)  # type: ignore[arg-type]
    sizes = None
    if inv.run_path:
        run = load_run(inv.run_path)
        validate_run_against_dataset(run, ds)
        rankings = {q.question_id: run.rank_vector(q.question_id) for q in ds}
    else:
        rankings, sizes = _load_merged(inv.merged_path, ds)  # type: ignore[arg-type]
    report = evaluate(
        rankings, ds, recall_ks=s["recall_ks"], ndcg_skip_empty=s["ndcg_skip_empty"], mrr_set_sizes=sizes
    )
    if s["json"]:
        rec = {k: v for k, v in report.to_dict().items() if v is not None}
        _emit(inv, dumps_record(rec) + "\n")
    else:
        _emit(inv, report.as_table())


def _blend_records(inv: InvocationConfig, ds: Dataset, mrr_runs: list[ModelRun], ndcg_run: ModelRun) -> str:
    s = inv.settings
    by_id = runs_by_id(mrr_runs)
    primary = s.get("primary_mrr") or mrr_runs[0].model_id
    if primary not in by_id:
        raise ValidationError(f"primary MRR model {primary!r} is not among the MRR runs")
    ranked = blend_all(by_id[primary], ndcg_run, s["alpha"], ds.question_ids, threads=inv.threads)
    return "".join(
        dumps_record({"question_id": qid, "order": list(rv.order)}) + "\n" for qid, rv in ranked.items()
    )


def _cmd_ensemble(inv: InvocationConfig) -> None:
    ds, mrr_runs, ndcg_run = _load_inputs(inv)
    if inv.settings["mode"] == "blend" or inv.subcommand == "blend":
        _emit(inv, _blend_records(inv, ds, mrr_runs, ndcg_run))
        return
    cfg = _ensemble_config(inv, mrr_runs, ndcg_run)
    runs = runs_by_id([*mrr_runs, ndcg_run])
    merged = ensemble_all(runs, cfg, ds.question_ids, threads=inv.threads)
    _emit(inv, "".join(dumps_record(m.to_record()) + "\n" for m in merged))


def _cmd_sweep(inv: InvocationConfig) -> None:
    s = inv.settings
    ds, mrr_runs, ndcg_run = _load_inputs(inv)
    cfg = _ensemble_config(inv, mrr_runs, ndcg_run)
    runs = runs_by_id([*mrr_runs, ndcg_run])
    for param in s["parameters"]:
        spec = SweepSpec(param, s["values"][param], cfg, s["objective"])
        result = run_sweep(
            ds, runs, spec, recall_ks=s["recall_ks"], ndcg_skip_empty=s["ndcg_skip_empty"], threads=inv.threads
        )
        best = result.rows[result.best_index]
        print(
            f"best {param}={best[0]} (objective {result.score(best[1]):.6f})",
            file=sys.stderr,
        )
        if inv.output_dir and (len(s["parameters"]) > 1 or not inv.output):
            write_text_atomic(Path(inv.output_dir) / f"{param}.csv", result.to_csv())
        else:
            _emit(inv, result.to_csv())


def _cmd_ablate(inv: InvocationConfig) -> None:
    s = inv.settings
    ds, mrr_runs, ndcg_run = _load_inputs(inv)
    cfg = _ensemble_config(inv, mrr_runs, ndcg_run)
    runs = runs_by_id([*mrr_runs, ndcg_run])
    rows = run_ablation(
        ds, runs, cfg, recall_ks=s["recall_ks"], ndcg_skip_empty=s["ndcg_skip_empty"], threads=inv.threads
    )
    _emit(inv, ablation_csv(rows))


def _cmd_report(inv: InvocationConfig) -> None:
    s = inv.settings
    ds, mrr_runs, ndcg_run = _load_inputs(inv)
    cfg = _ensemble_config(inv, mrr_runs, ndcg_run)
    runs = runs_by_id([*mrr_runs, ndcg_run])
    qids = s["questions"] or ds.question_ids[: s["limit"]]
    for qid in qids:
        ds[qid]  # raises for unknown ids before any output
    _emit(inv, provenance_report(ds, runs, cfg, qids, remainder_depth=s["remainder_depth"]))


def _cmd_synth(inv: InvocationConfig) -> None:
    spec: SynthSpec = inv.settings["spec"]
    ds, runs = generate_synthetic(spec)
    out = Path(inv.output_dir)  # type: ignore[arg-type]
    write_text_atomic(out / "annotations.jsonl", dumps_dataset(ds))
    for run in runs:
        write_text_atomic(out / f"{run.model_id}.jsonl", dumps_run(run))
    log.info("wrote %d questions and %d runs to %s", ds.d, len(runs), out)


_COMMANDS = {
    "evaluate": _cmd_evaluate,
    "ensemble": _cmd_ensemble,
    "blend": _cmd_ensemble,
    "sweep": _cmd_sweep,
    "ablate": _cmd_ablate,
    "report": _cmd_report,
    "synth": _cmd_synth,
}


def run(inv: InvocationConfig) -> int:
    """Execute a parsed invocation; return the process exit status."""
    try:
        _COMMANDS[inv.subcommand](inv)
    except UsageError as exc:
        print(f"rankmerge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RankMergeError as exc:
        print(f"rankmerge: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"rankmerge: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"rankmerge: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        inv = parse_args(argv)
    except UsageError as exc:
        print(f"rankmerge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RankMergeError as exc:
        print(f"rankmerge: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    level = logging.WARNING - 10 * min(inv.verbosity, 2)
    logging.basicConfig(level=level, format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)
    return run(inv)


if __name__ == "__main__":
    sys.exit(main())
