"""
Command-line interface for gazeforge.

Every subcommand loads the run configuration, delegates to its package
and reports a summary. With ``--json`` the summary is a single JSON object
on stdout; logs always go to stderr. Failures map to distinct exit codes
(see ``utils.exceptions``).
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

# Add project root to Python path for imports
sys.path.insert(0, str(Path(__file__).parent))

from annotate import run_annotate
from augment import load_assets, run_augment
from calibrate import mpii_protocol, realgaze_protocol
from config.run_config import RunConfig, dump_run_config, load_run_config
from config.settings import get_settings
from data.feature_dump import read_feature_dump
from data.manifest import ManifestLoader, ManifestLoadResult, write_jsonl
from data.predictions import load_pairs, load_predictions, write_pairs
from evalbench import PredictionRecord, group_report, pose_filter, zerogaze_stats
from losses.composite import SUPCON_TERMS, supcon_terms
from sampler import ingest, plan_epoch, subject_histogram
from utils.exceptions import (
    EXIT_FAILURE,
    EXIT_OK,
    GazeForgeError,
    InsufficientDataError,
    UsageError,
)
from utils.logging import setup_logger
from utils.performance import OperationTimer, get_performance_monitor

JSON_SCHEMA_VERSION = 1


@dataclass
class CommandResult:
    result: Dict[str, Any]
    text: Optional[str] = None


def _manifest(args: argparse.Namespace, config: RunConfig) -> ManifestLoadResult:
    path = args.manifest or config.paths.manifest
    if not path:
        raise UsageError(f"{args.command} needs --manifest (or paths.manifest in the config)")
    manifest = ManifestLoader().load(path)
    if not manifest.records:
        raise InsufficientDataError(f"Manifest {path} has no valid samples", required=1)
    return manifest


def _out_dir(args: argparse.Namespace, config: RunConfig, required: bool = True) -> Optional[Path]:
    out = args.out or config.paths.out
    if not out:
        if required:
            raise UsageError(f"{args.command} needs --out (or paths.out in the config)")
        return None
    return Path(out)


def _seed(args: argparse.Namespace, config: RunConfig) -> int:
    return config.seed if args.seed is None else args.seed


def _workers(args: argparse.Namespace) -> int:
    return args.workers if args.workers is not None else get_settings().workers


def run_augment_command(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    manifest = _manifest(args, config)
    out = _out_dir(args, config)
    with OperationTimer("load_assets"):
        assets = load_assets(config.augment.assets)
    with OperationTimer("augment", items=len(manifest.records)):
        result = run_augment(
            manifest,
            out,
            settings=config.augment,
            seed=_seed(args, config),
            epoch=args.epoch,
            workers=_workers(args),
            assets=assets,
            landmark_config=config.landmarks,
        )
    payload = {**result.to_json(), "malformed_lines": len(manifest.malformed)}
    return CommandResult(payload, f"Wrote {result.views} views of {result.samples} samples to {out}")


def run_annotate_command(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    manifest = _manifest(args, config)
    out = _out_dir(args, config)
    with OperationTimer("annotate", items=len(manifest.records)):
        result = run_annotate(manifest, out, config.annotate, config.landmarks, _workers(args))
    payload = {**result.to_json(), "malformed_lines": len(manifest.malformed)}
    counts = ", ".join(f"{k} {v}" for k, v in result.valid_counts.items())
    return CommandResult(payload, f"Annotated {result.samples} samples; valid masks: {counts}")


def run_plan_epoch(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    manifest = _manifest(args, config)
    grid = config.grid_spec()
    seed = _seed(args, config)
    with OperationTimer("plan_epoch", items=len(manifest.records)):
        registry = ingest(manifest.records, config.interval, config.head_pose_interval)
        plan = plan_epoch(
            registry,
            grid,
            config.sampler.quota,
            seed,
            epoch=args.epoch,
            policy=config.sampler.empty_cell_policy,
            datasets=config.sampler.datasets,
            subject_balanced=config.sampler.subject_balanced,
        )
    payload: Dict[str, Any] = {
        **plan.summary(),
        "bins": grid.n_bins,
        "plan_size_per_dataset": {d: config.sampler.quota * grid.n_bins for d in config.sampler.datasets},
        "registry_size": len(registry),
        "dropped": dict(registry.drop_counts),
    }
    out = _out_dir(args, config, required=False)
    if out is not None:
        path, _ = write_jsonl(out / f"plan_epoch{args.epoch}.jsonl", (e.to_json() for e in plan.entries))
        payload["plan"] = str(path)
        if args.histogram:
            hist_path = out / f"subjects_epoch{args.epoch}.json"
            hist_path.write_text(json.dumps(subject_histogram(plan, registry), sort_keys=True) + "\n")
            payload["histogram"] = str(hist_path)
    per_dataset = ", ".join(f"{d} {n}" for d, n in plan.per_dataset().items())
    return CommandResult(payload, f"Epoch {args.epoch}: {len(plan)} draws ({per_dataset})")


def run_loss_eval(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    terms = args.terms or list(SUPCON_TERMS)
    unknown = [t for t in terms if t not in SUPCON_TERMS]
    if unknown:
        raise UsageError(f"Unknown contrastive term(s): {', '.join(unknown)}")
    with OperationTimer("loss_eval"):
        features, meta = read_feature_dump(args.features, args.sidecar)
        if features.shape[0] < 2:
            raise InsufficientDataError(
                "Contrastive terms need at least 2 feature rows",
                required=2,
                available=int(features.shape[0]),
            )
        weights = config.losses
        raw = supcon_terms({t: features for t in terms}, meta, config.grid_spec(), weights)
    weighted = {t: getattr(weights, SUPCON_TERMS[t]) * v for t, v in raw.items()}
    payload = {
        "rows": int(features.shape[0]),
        "dim": int(features.shape[1]),
        "terms": raw,
        "weighted": weighted,
        "weighted_total": float(sum(weighted.values())),
    }
    text = "\n".join(f"{t}: {raw[t]:.6f} (weighted {weighted[t]:.6f})" for t in raw)
    return CommandResult(payload, text)


def run_calibrate(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    pairs = load_pairs(args.pairs)
    out = _out_dir(args, config, required=False)
    with OperationTimer("calibrate"):
        if args.protocol == "mpii":
            by_subject: Dict[str, List] = {}
            for p in pairs:
                by_subject.setdefault(p.subject, []).append(p)
            result = mpii_protocol(
                by_subject, args.points, config.calibration.repetitions, _seed(args, config)
            )
            payload = result.to_json()
            text = (
                f"{args.points}-point calibration, median of {result.repetitions}: "
                f"l2 {result.baseline['l2']:.2f} -> {result.calibrated['l2']:.2f} mm"
            )
        else:
            if args.points not in (1, 5):
                raise UsageError("The realgaze protocol uses --points 1 or 5")
            rg = realgaze_protocol(
                pairs,
                n_points=args.points,
                k=config.calibration.center_k,
                screen=config.screen,
                group_by=args.group_by or config.calibration.group_by,
            )
            if not rg.corrected:
                raise InsufficientDataError("No calibration group had samples left to score")
            payload = rg.to_json()
            text = (
                f"{args.points}-point calibration over {len(rg.models)} group(s): "
                f"l2 {rg.errors('baseline').l2:.2f} -> {rg.errors('calibrated').l2:.2f} mm"
            )
            if out is not None:
                payload["corrected"] = str(write_pairs(out / "calibrated_predictions.csv", rg.corrected))

    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "calibration.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return CommandResult(payload, text)


def _evaluate_zerogaze(records: List[PredictionRecord], args: argparse.Namespace, config: RunConfig) -> CommandResult:
    payload: Dict[str, Any] = {}
    if args.pose_filter:
        filtered = pose_filter(
            records, config.evaluation.pitch_tolerance, config.evaluation.other_tolerance
        )
        payload["pose_filter"] = filtered.to_json()
        records = filtered.retained
    if not records:
        raise InsufficientDataError("No ZeroGaze records left to evaluate")
    stats = zerogaze_stats(records, config.eval_interval)
    payload["views"] = {view: s.to_json() for view, s in stats.items()}
    text = "\n".join(
        f"{view}: n={s.count} mean=({s.mean[0]:+.2f}, {s.mean[1]:+.2f}) "
        f"std=({s.std[0]:.2f}, {s.std[1]:.2f}) p95={s.p95_radius:.2f}"
        for view, s in stats.items()
    )
    return CommandResult(payload, text)


def run_evaluate(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    out = _out_dir(args, config, required=False)
    with OperationTimer("evaluate") as timer:
        records = load_predictions(args.pred, args.mode)
        timer.items = len(records)
        if args.mode == "zerogaze":
            outcome = _evaluate_zerogaze(records, args, config)
            if out is not None:
                out.mkdir(parents=True, exist_ok=True)
                (out / "zerogaze.json").write_text(
                    json.dumps(outcome.result, indent=2, sort_keys=True) + "\n", encoding="utf-8"
                )
            return outcome

        report = group_report(
            records,
            metric=args.mode,
            interval=config.eval_interval,
            exclude_reduced=args.exclude_reduced or config.evaluation.exclude_reduced,
        )
        if report.empty:
            raise InsufficientDataError("No records to report")
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            report.to_csv(out / f"report_{args.mode}.csv")
            (out / f"report_{args.mode}.txt").write_text(report.to_text(), encoding="utf-8")
    return CommandResult(report.to_json(), report.to_text().rstrip("\n"))


def run_config_check(args: argparse.Namespace, config: RunConfig) -> CommandResult:
    grid = config.grid_spec()
    per_dataset = {d: config.sampler.quota * grid.n_bins for d in config.sampler.datasets}
    payload = {
        "schema_version": config.schema_version,
        "bins": grid.n_bins,
        "pitch_bins": grid.n_pitch,
        "yaw_bins": grid.n_yaw,
        "quota": config.sampler.quota,
        "plan_size_per_dataset": per_dataset,
        "augment_probabilities": config.augment.protocol.probabilities(),
        "views_per_sample": config.augment.protocol.views_per_sample,
    }
    if args.dump:
        Path(args.dump).write_text(dump_run_config(config), encoding="utf-8")
        payload["dumped"] = str(args.dump)
    text = (
        f"Configuration OK: {grid.n_pitch} x {grid.n_yaw} = {grid.n_bins} bins, "
        f"quota {config.sampler.quota} -> {config.sampler.quota * grid.n_bins} draws per dataset"
    )
    return CommandResult(payload, text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Run configuration JSON (default: GAZEFORGE_CONFIG or shipped defaults)")
    common.add_argument("--manifest", help="Sample manifest (JSONL)")
    common.add_argument("--out", help="Output directory")
    common.add_argument("--seed", type=int, help="Global seed (default: from config)")
    common.add_argument("--workers", type=int, help="Worker processes (default: GAZEFORGE_WORKERS or 1)")
    common.add_argument("--json", action="store_true", help="Print a JSON summary on stdout")

    parser = argparse.ArgumentParser(
        prog="gazeforge",
        description="gazeforge - data, loss and evaluation toolkit for gaze estimation",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s config-check                                   # Validate config, show grid and quota
  %(prog)s augment --manifest m.jsonl --out views/ --workers 8
  %(prog)s annotate --manifest m.jsonl --out labels/
  %(prog)s plan-epoch --manifest m.jsonl --out plans/ --epoch 0
  %(prog)s loss-eval --features batch.bin
  %(prog)s calibrate --pairs pred.csv --points 3 --seed 0
  %(prog)s evaluate --pred pred.csv --mode screen
        """,
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    augment_parser = subparsers.add_parser("augment", parents=[common], help="Write augmented views")
    augment_parser.add_argument("--epoch", type=int, default=0)
    augment_parser.set_defaults(func=run_augment_command)

    annotate_parser = subparsers.add_parser("annotate", parents=[common], help="Write segmentation labels")
    annotate_parser.set_defaults(func=run_annotate_command)

    plan_parser = subparsers.add_parser("plan-epoch", parents=[common], help="Plan one stratified epoch")
    plan_parser.add_argument("--epoch", type=int, default=0)
    plan_parser.add_argument("--histogram", action="store_true", help="Also write per-subject counts")
    plan_parser.set_defaults(func=run_plan_epoch)

    loss_parser = subparsers.add_parser("loss-eval", parents=[common], help="Evaluate contrastive terms on a feature dump")
    loss_parser.add_argument("--features", required=True, help="Feature dump file")
    loss_parser.add_argument("--sidecar", help="Metadata sidecar (default: <features>.meta.jsonl)")
    loss_parser.add_argument("--terms", nargs="+", help=f"Subset of: {', '.join(SUPCON_TERMS)}")
    loss_parser.set_defaults(func=run_loss_eval)

    calib_parser = subparsers.add_parser("calibrate", parents=[common], help="Evaluate personalized calibration")
    calib_parser.add_argument("--pairs", required=True, help="Prediction CSV with screen points")
    calib_parser.add_argument("--points", type=int, required=True, help="Calibration points")
    calib_parser.add_argument("--protocol", choices=["mpii", "realgaze"], default="mpii")
    calib_parser.add_argument("--group-by", choices=["session", "subject"], help="realgaze grouping")
    calib_parser.set_defaults(func=run_calibrate)

    eval_parser = subparsers.add_parser("evaluate", parents=[common], help="Score a prediction file")
    eval_parser.add_argument("--pred", required=True, help="Prediction CSV")
    eval_parser.add_argument("--mode", choices=["screen", "angular", "zerogaze"], required=True)
    eval_parser.add_argument("--exclude-reduced", action="store_true", help="Restrict reduced-session subjects to Overall")
    eval_parser.add_argument("--pose-filter", action="store_true", help="Drop ZeroGaze triplets outside the pose tolerances")
    eval_parser.set_defaults(func=run_evaluate)

    check_parser = subparsers.add_parser("config-check", parents=[common], help="Validate the run configuration")
    check_parser.add_argument("--dump", help="Write the resolved configuration to this file")
    check_parser.set_defaults(func=run_config_check)

    return parser


def _emit(args: argparse.Namespace, status: str, body: Dict[str, Any]) -> None:
    if args.json:
        summary = {
            "schema_version": JSON_SCHEMA_VERSION,
            "command": args.command,
            "status": status,
            **body,
        }
        print(json.dumps(summary, sort_keys=True, default=str))


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return EXIT_OK

    handler: Callable[[argparse.Namespace, RunConfig], CommandResult] = args.func
    try:
        settings = get_settings()
        logger = setup_logger("gazeforge", settings.log_file, settings.log_level)
        get_performance_monitor().clear_metrics()
        config = load_run_config(args.config)
        outcome = handler(args, config)
    except GazeForgeError as e:
        _emit(args, "error", {"error": {"code": e.error_code, "message": e.message, "details": e.details}})
        if not args.json:
            print(f"Error: {e.message}", file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        print("\nOperation interrupted by user", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as e:
        _emit(args, "error", {"error": {"code": "UNEXPECTED", "message": str(e), "details": None}})
        print(f"Unexpected error: {e}", file=sys.stderr)
        return EXIT_FAILURE

    logger.info(f"{args.command} finished; timing {get_performance_monitor().get_summary()}")
    _emit(args, "ok", {"result": outcome.result})
    if not args.json and outcome.text:
        print(outcome.text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
