"""Command-line entry point.

Subcommands mirror the pipeline stages: validate, partition, features,
train, predict, fuse, evaluate, preprocess, simulate. Every parameter can
come from a JSON config file (--config) with command-line flags winning
on conflict, and every run writes a metadata JSON (seed, config hash,
versions) next to its outputs so artifacts are self-describing.

Exit codes: 0 success, 1 usage error, 2 data/validation error,
3 numerical failure (e.g. the final SVM fit did not converge).

Environment: LIPIDENT_OUT_DIR optionally re-roots relative output paths;
LIPIDENT_BACKEND selects the numba or numpy compute kernels (results are
identical, only speed differs).
"""

import argparse
import csv
import hashlib
import json
import os
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, dataset, evalx, fusion, geometry, preprocess, svm
from ._backend import BACKEND
from .errors import DataError, LipidentError, NumericalError


class UsageError(LipidentError):
    """Bad or contradictory command-line parameters."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_config(path):
    if path is None:
        return {}
    try:
        payload = json.loads(Path(path).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise DataError(f"{path}: config must be a JSON object")
    return payload


def _merged(args, keys):
    """Effective parameters: flag value if given, else config, else default."""
    config = _load_config(getattr(args, "config", None))
    merged = {}
    for key, default in keys.items():
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
        elif key in config:
            merged[key] = config[key]
        else:
            merged[key] = default
    return merged


def _require(params, *names):
    for name in names:
        if params.get(name) is None:
            raise UsageError(f"missing required parameter --{name.replace('_', '-')}")


def _out_path(value):
    """Resolve an output path, honoring LIPIDENT_OUT_DIR for relative ones."""
    p = Path(value)
    base = os.environ.get("LIPIDENT_OUT_DIR")
    if base and not p.is_absolute():
        p = Path(base) / p
    if p.parent:
        p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _versions():
    out = {
        "lipident": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
    }
    try:
        import numba

        out["numba"] = numba.__version__
    except ImportError:  # pragma: no cover
        out["numba"] = None
    return out


_OUTPUT_KEYS = frozenset({"out", "out_dir", "emit_labels"})


def _write_meta(target, subcommand, params):
    """Run metadata next to the outputs: <dir>/run_meta.json or <file>.meta.json.

    Output destinations are excluded so the config hash describes the
    computation, not where its artifacts landed.
    """
    clean = {k: v for k, v in params.items() if k not in _OUTPUT_KEYS}
    digest = hashlib.sha256(
        json.dumps(clean, sort_keys=True, default=str).encode("utf-8")
    ).hexdigest()
    meta = {
        "subcommand": subcommand,
        "parameters": clean,
        "config_hash": digest,
        "seed": clean.get("seed"),
        "backend": BACKEND,
        "versions": _versions(),
    }
    target = Path(target)
    path = target / "run_meta.json" if target.is_dir() else Path(str(target) + ".meta.json")
    path.write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n", "utf-8")


def _jobs(value):
    if value is None or int(value) <= 0:
        return os.cpu_count() or 1
    return int(value)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_validate(args):
    params = _merged(args, {"manifest": None, "strict": False})
    _require(params, "manifest")
    manifest = dataset.load_manifest(params["manifest"], strict=bool(params["strict"]))
    languages = sorted({r.language.label for r in manifest.records})
    print(
        f"manifest OK: {len(manifest.records)} records, "
        f"{len(manifest.subjects())} subjects, languages: {', '.join(languages) or '-'}"
    )
    return 0


def cmd_partition(args):
    params = _merged(args, {"manifest": None, "protocol": None, "seed": 0, "out": None})
    _require(params, "manifest", "protocol", "out")
    manifest = dataset.load_manifest(params["manifest"], strict=True)
    seed = int(params["seed"])
    if params["protocol"] == dataset.PROTOCOL_SUBJECT_DEPENDENT:
        split = dataset.partition_subject_dependent(manifest, seed)
    elif params["protocol"] == dataset.PROTOCOL_SUBJECT_INDEPENDENT:
        split = dataset.partition_subject_independent(manifest, seed)
    else:
        raise UsageError(f"unknown protocol {params['protocol']!r}")
    out = _out_path(params["out"])
    dataset.save_split(split, out)
    _write_meta(out, "partition", params)
    print(
        f"split written to {out}: train={len(split.train)} "
        f"validation={len(split.validation)} test={len(split.test)}"
    )
    return 0


def _metric_list(value):
    if isinstance(value, str):
        value = [m for m in value.split(",") if m]
    return geometry.metric_order(value)


def cmd_features(args):
    params = _merged(
        args,
        {
            "manifest": None,
            "landmarks_dir": None,
            "pivot": geometry.DEFAULT_PIVOT,
            "metrics": "euclidean,manhattan,cosine",
            "frames": geometry.DEFAULT_FRAMES,
            "out": None,
            "jobs": None,
        },
    )
    _require(params, "manifest", "landmarks_dir", "out")
    manifest = dataset.load_manifest(params["manifest"])
    root = Path(params["landmarks_dir"])
    metrics = _metric_list(params["metrics"])
    pivot = int(params["pivot"])
    frames = int(params["frames"])

    def one(record):
        seq = geometry.load_landmarks(root / record.landmark_path)
        if seq.clip_id != record.clip_id:
            raise DataError(
                f"{record.landmark_path}: clip_id {seq.clip_id!r} does not match "
                f"manifest record {record.clip_id!r}"
            )
        return geometry.extract_features(seq, pivot=pivot, metrics=metrics, num_frames=frames)

    with ThreadPoolExecutor(max_workers=_jobs(params["jobs"])) as pool:
        vectors = list(pool.map(one, manifest.records))
    if not vectors:
        raise DataError("manifest has no records to extract features from")
    matrix = np.stack([v.values for v in vectors])
    out = _out_path(params["out"])
    geometry.save_feature_matrix(out, matrix, manifest.clip_ids, pivot, metrics, frames)
    _write_meta(out, "features", params)
    print(f"features written to {out}: {matrix.shape[0]} clips x {matrix.shape[1]} values")
    return 0


def _labels_for(manifest, clip_ids, target):
    labels = []
    for cid in clip_ids:
        rec = manifest.record(cid)
        labels.append(rec.subject_id if target == "identity" else rec.language.label)
    return labels


def _load_grid(path):
    try:
        payload = json.loads(Path(path).read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot parse grid {path}: {exc}") from exc
    if not isinstance(payload, list) or not payload:
        raise DataError(f"{path}: grid must be a non-empty JSON list")
    return [svm.GridConfig.from_json(entry) for entry in payload]


def cmd_train(args):
    params = _merged(
        args,
        {
            "manifest": None,
            "split": None,
            "features": None,
            "landmarks_dir": None,
            "target": "identity",
            "grid": None,
            "seed": 0,
            "tolerance": svm.DEFAULT_TOLERANCE,
            "max_passes": svm.DEFAULT_MAX_PASSES,
            "jobs": None,
            "out_dir": None,
        },
    )
    _require(params, "manifest", "split", "out_dir")
    if params["target"] not in ("identity", "language"):
        raise UsageError("--target must be identity or language")
    if params["features"] is None and params["landmarks_dir"] is None:
        raise UsageError("provide --features or --landmarks-dir")
    manifest = dataset.load_manifest(params["manifest"])
    split = dataset.load_split(params["split"])
    # validation clips join the training pool for the classical model
    train_ids = list(split.train) + list(split.validation)
    if not train_ids:
        raise DataError("split has no training clips")
    labels = _labels_for(manifest, train_ids, params["target"])
    seed = int(params["seed"])
    tolerance = float(params["tolerance"])
    max_passes = int(params["max_passes"])
    grid = _load_grid(params["grid"]) if params["grid"] else None

    if params["features"] is not None:
        matrix, sidecar = geometry.load_feature_matrix(params["features"])
        row_of = {cid: i for i, cid in enumerate(sidecar["clip_ids"])}
        missing = [cid for cid in train_ids if cid not in row_of]
        if missing:
            raise DataError(f"feature file lacks rows for clips {missing[:5]}")
        X = matrix[[row_of[cid] for cid in train_ids]]
        result = svm.grid_search(
            X,
            labels,
            grid=grid,
            seed=seed,
            tolerance=tolerance,
            max_passes=max_passes,
            jobs=_jobs(params["jobs"]),
        )
        final_X = X
    else:
        root = Path(params["landmarks_dir"])
        sequences = []
        for cid in train_ids:
            rec = manifest.record(cid)
            sequences.append(geometry.load_landmarks(root / rec.landmark_path))
        cache = {}

        def provider(cfg):
            key = cfg.feature_key()
            if key not in cache:
                cache[key] = np.stack(
                    [
                        geometry.extract_features(
                            seq,
                            pivot=cfg.pivot if cfg.pivot is not None else geometry.DEFAULT_PIVOT,
                            metrics=cfg.metrics or geometry.METRIC_ORDER,
                            num_frames=cfg.num_frames or geometry.DEFAULT_FRAMES,
                        ).values
                        for seq in sequences
                    ]
                )
            return cache[key]

        result = svm.grid_search(
            provider,
            labels,
            grid=grid,
            seed=seed,
            tolerance=tolerance,
            max_passes=max_passes,
            jobs=_jobs(params["jobs"]),
        )
        final_X = provider(result.best_config)

    out_dir = _out_path(params["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    svm.save_grid_report(result, out_dir / "gridsearch.json", out_dir / "gridsearch.csv")
    model = svm.train_multiclass(
        final_X,
        labels,
        kernel=result.best_config.kernel,
        C=result.best_config.C,
        tolerance=tolerance,
        max_passes=max_passes,
        seed=svm.derive_seed(seed, 9999),
    )
    model_dir = out_dir / "model"
    svm.save_model(model, model_dir)
    _write_meta(out_dir, "train", params)
    print(
        f"best config: {result.best_config.describe()} k={result.best_k} "
        f"cv_accuracy={result.best_cv_accuracy:.4f}; model written to {model_dir}"
    )
    if not model.converged:
        print("warning: final fit did not converge", file=sys.stderr)
        raise NumericalError("final SVM fit did not converge within the pass budget")
    return 0


def cmd_predict(args):
    params = _merged(
        args,
        {"model": None, "features": None, "out": None, "emit_labels": None},
    )
    _require(params, "model", "features", "out")
    model = svm.load_model(params["model"])
    matrix, sidecar = geometry.load_feature_matrix(params["features"])
    scores = svm.predict_scores(model, matrix, probe_ids=sidecar["clip_ids"])
    out = _out_path(params["out"])
    fusion.write_scores_csv(scores, out)
    _write_meta(out, "predict", params)
    if params["emit_labels"]:
        picks = {
            pid: scores.class_labels[int(np.argmax(scores.scores[i]))]
            for i, pid in enumerate(scores.probe_ids)
        }
        fusion.write_language_predictions(picks, _out_path(params["emit_labels"]))
    print(f"scores written to {out}: {len(scores.probe_ids)} probes x {len(scores.class_labels)} classes")
    return 0


def _read_gallery_csv(path):
    out = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:2] != ["identity", "language"]:
            raise DataError(f"{path}: expected header identity,language")
        for line in reader:
            if not line:
                continue
            if len(line) != 2:
                raise DataError(f"{path}: malformed row {line!r}")
            out[line[0]] = line[1]
    return out


def _subject_language(params):
    if params.get("gallery"):
        return _read_gallery_csv(params["gallery"])
    if params.get("manifest"):
        manifest = dataset.load_manifest(params["manifest"])
        return {sid: lang.label for sid, lang in manifest.subject_language().items()}
    raise UsageError("provide --manifest or --gallery for the subject-language map")


def cmd_fuse(args):
    params = _merged(
        args,
        {
            "scores": None,
            "language_pred": None,
            "manifest": None,
            "gallery": None,
            "k": fusion.DEFAULT_TOP_K,
            "out": None,
        },
    )
    _require(params, "scores", "language_pred", "out")
    scores = fusion.read_scores(params["scores"])
    language_pred = fusion.read_language_predictions(params["language_pred"])
    subject_language = _subject_language(params)
    decisions = fusion.fuse(scores, language_pred, subject_language, k=int(params["k"]))
    out = _out_path(params["out"])
    fusion.write_decisions(decisions, out)
    _write_meta(out, "fuse", params)
    fallbacks = sum(1 for d in decisions if d.fallback)
    print(f"decisions written to {out}: {len(decisions)} probes, {fallbacks} fallbacks")
    return 0


def _read_truth_csv(path):
    ids = {}
    langs = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:3] != ["probe_id", "identity", "language"]:
            raise DataError(f"{path}: expected header probe_id,identity,language")
        for line in reader:
            if not line:
                continue
            if len(line) != 3:
                raise DataError(f"{path}: malformed row {line!r}")
            ids[line[0]] = line[1]
            langs[line[0]] = line[2]
    return ids, langs


def _language_axis(labels):
    """Order confusion labels by language code when they all parse."""
    try:
        return [l.label for l in sorted(dataset.Language.from_label(l) for l in labels)]
    except DataError:
        return sorted(labels)


def cmd_evaluate(args):
    params = _merged(
        args,
        {
            "scores": None,
            "decisions": None,
            "language_pred": None,
            "truth": None,
            "manifest": None,
            "gallery": None,
            "k": fusion.DEFAULT_TOP_K,
            "model_name": "svm",
            "out_dir": None,
        },
    )
    _require(params, "scores", "decisions", "language_pred", "out_dir")
    scores = fusion.read_scores(params["scores"])
    decisions = fusion.read_decisions(params["decisions"])
    language_pred = fusion.read_language_predictions(params["language_pred"])
    subject_language = _subject_language(params)
    if params["truth"]:
        truth_ids, truth_langs = _read_truth_csv(params["truth"])
    elif params["manifest"]:
        manifest = dataset.load_manifest(params["manifest"])
        truth_ids = {}
        truth_langs = {}
        for pid in scores.probe_ids:
            rec = manifest.record(pid)
            truth_ids[pid] = rec.subject_id
            truth_langs[pid] = rec.language.label
    else:
        raise UsageError("provide --truth or --manifest for ground truth")

    k = int(params["k"])
    by_probe = {d.probe_id: d for d in decisions}
    missing = [pid for pid in scores.probe_ids if pid not in by_probe]
    if missing:
        raise DataError(f"decisions lack probes {missing[:5]}")
    ordered = [by_probe[pid] for pid in scores.probe_ids]
    rank_lists = {pid: fusion.rank(scores, pid) for pid in scores.probe_ids}

    truth_id_list = [truth_ids[pid] for pid in scores.probe_ids]
    truth_lang_list = [truth_langs[pid] for pid in scores.probe_ids]
    baseline_pred = [rank_lists[pid].ranked[0][0] for pid in scores.probe_ids]
    fused_pred = [d.predicted_identity for d in ordered]
    lang_pred_list = [language_pred[pid] for pid in scores.probe_ids]

    baseline_acc = evalx.accuracy(baseline_pred, truth_id_list)
    fused_acc = evalx.accuracy(fused_pred, truth_id_list)
    lang_acc = evalx.accuracy(lang_pred_list, truth_lang_list)
    lang_labels = _language_axis(set(truth_lang_list) | set(lang_pred_list))
    lang_confusion = evalx.confusion(lang_pred_list, truth_lang_list, lang_labels)
    attribution = evalx.attribute_errors(
        ordered, rank_lists, truth_ids, truth_langs, subject_language, k
    )

    report = evalx.EvalReport(
        accuracies={
            "identification_rank1": baseline_acc,
            "identification_fused": fused_acc,
            "language": lang_acc,
        },
        confusions={"language": lang_confusion},
        attributions={"fusion": attribution},
        fusion_summary=[
            {
                "model": str(params["model_name"]),
                "vli_accuracy": lang_acc,
                "identification_accuracy": baseline_acc,
                "fused_accuracy": fused_acc,
            }
        ],
    )
    out_dir = _out_path(params["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    evalx.emit_report(report, out_dir)
    _write_meta(out_dir, "evaluate", params)
    print(
        f"report written to {out_dir}: rank1={evalx.format_percent(baseline_acc)} "
        f"fused={evalx.format_percent(fused_acc)} language={evalx.format_percent(lang_acc)}"
    )
    return 0


def cmd_preprocess(args):
    params = _merged(
        args,
        {
            "frames_dir": None,
            "op": None,
            "out": None,
            "low": preprocess.CANNY_LOW,
            "high": preprocess.CANNY_HIGH,
            "jobs": None,
        },
    )
    _require(params, "frames_dir", "op", "out")
    op = params["op"]
    if op not in ("grayscale", "sobel", "laplacian", "canny"):
        raise UsageError(f"unknown preprocessing op {op!r}")
    files = preprocess.list_frame_files(params["frames_dir"])

    def one(path):
        frame = preprocess.read_pnm(path)
        if frame.ndim == 3:
            frame = preprocess.to_grayscale(frame)
        if op == "grayscale":
            return frame
        if op == "sobel":
            return preprocess.sobel(frame)
        if op == "laplacian":
            return preprocess.laplacian(frame)
        return preprocess.canny(frame, low=float(params["low"]), high=float(params["high"]))

    with ThreadPoolExecutor(max_workers=_jobs(params["jobs"])) as pool:
        frames = list(pool.map(one, files))
    shapes = {f.shape for f in frames}
    if len(shapes) != 1:
        raise DataError(f"frames disagree on shape: {sorted(shapes)}")
    tensor = np.stack(frames)
    out = _out_path(params["out"])
    preprocess.write_tensor(tensor, out)
    _write_meta(out, "preprocess", params)
    print(f"{op} tensor written to {out}: shape {tensor.shape}")
    return 0


def cmd_simulate(args):
    params = _merged(
        args,
        {
            "subjects": 256,
            "languages": 8,
            "probes": 10000,
            "top1": 0.496,
            "topk": 0.8,
            "k": fusion.DEFAULT_TOP_K,
            "lang_acc": 0.86,
            "seed": 0,
            "out_dir": None,
        },
    )
    _require(params, "out_dir")
    config = fusion.SimulationConfig(
        n_subjects=int(params["subjects"]),
        n_languages=int(params["languages"]),
        n_probes=int(params["probes"]),
        top1_acc=float(params["top1"]),
        topk_hit=float(params["topk"]),
        k=int(params["k"]),
        lang_acc=float(params["lang_acc"]),
        seed=int(params["seed"]),
    )
    result = fusion.simulate_scores(config)
    out_dir = _out_path(params["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    fusion.write_scores_csv(result.scores, out_dir / "scores.csv")
    fusion.write_language_predictions(result.language_pred, out_dir / "language_pred.csv")
    with open(out_dir / "truth.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["probe_id", "identity", "language"])
        for pid in result.scores.probe_ids:
            writer.writerow([pid, result.true_identity[pid], result.true_language[pid]])
    with open(out_dir / "gallery.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["identity", "language"])
        for sid in result.scores.class_labels:
            writer.writerow([sid, result.subject_language[sid]])
    _write_meta(out_dir, "simulate", params)
    print(f"simulation written to {out_dir}: {config.n_probes} probes, {config.n_subjects} subjects")
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> _Parser:
    parser = _Parser(prog="lipident", description=__doc__)
    parser.add_argument("--version", action="version", version=f"lipident {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file; flags override its keys")
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check a manifest file")
    p.add_argument("--manifest")
    p.add_argument("--strict", action="store_const", const=True)

    p = add("partition", cmd_partition, "write a train/validation/test split")
    p.add_argument("--manifest")
    p.add_argument(
        "--protocol",
        choices=[dataset.PROTOCOL_SUBJECT_DEPENDENT, dataset.PROTOCOL_SUBJECT_INDEPENDENT],
    )
    p.add_argument("--seed", type=int)
    p.add_argument("--out")

    p = add("features", cmd_features, "landmark JSON files -> feature tensor")
    p.add_argument("--manifest")
    p.add_argument("--landmarks-dir", dest="landmarks_dir")
    p.add_argument("--pivot", type=int)
    p.add_argument("--metrics", help="comma-separated subset of euclidean,manhattan,cosine")
    p.add_argument("--frames", type=int, help="resample target frame count")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int)

    p = add("train", cmd_train, "grid search plus final SVM fit")
    p.add_argument("--manifest")
    p.add_argument("--split")
    p.add_argument("--features")
    p.add_argument("--landmarks-dir", dest="landmarks_dir")
    p.add_argument("--target", choices=["identity", "language"])
    p.add_argument("--grid", help="JSON list of grid configurations")
    p.add_argument("--seed", type=int)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--max-passes", dest="max_passes", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out-dir", dest="out_dir")

    p = add("predict", cmd_predict, "score features against a trained model")
    p.add_argument("--model")
    p.add_argument("--features")
    p.add_argument("--out")
    p.add_argument("--emit-labels", dest="emit_labels", help="also write argmax labels CSV")

    p = add("fuse", cmd_fuse, "gate identity scores by predicted language")
    p.add_argument("--scores")
    p.add_argument("--language-pred", dest="language_pred")
    p.add_argument("--manifest")
    p.add_argument("--gallery", help="identity,language CSV when no manifest applies")
    p.add_argument("--k", type=int)
    p.add_argument("--out")

    p = add("evaluate", cmd_evaluate, "accuracies, confusion, attribution reports")
    p.add_argument("--scores")
    p.add_argument("--decisions")
    p.add_argument("--language-pred", dest="language_pred")
    p.add_argument("--truth", help="probe_id,identity,language CSV")
    p.add_argument("--manifest")
    p.add_argument("--gallery")
    p.add_argument("--k", type=int)
    p.add_argument("--model-name", dest="model_name")
    p.add_argument("--out-dir", dest="out_dir")

    p = add("preprocess", cmd_preprocess, "frame files -> grayscale/edge tensor")
    p.add_argument("--frames-dir", dest="frames_dir")
    p.add_argument("--op", choices=["grayscale", "sobel", "laplacian", "canny"])
    p.add_argument("--low", type=float)
    p.add_argument("--high", type=float)
    p.add_argument("--out")
    p.add_argument("--jobs", type=int)

    p = add("simulate", cmd_simulate, "run the fusion simulator")
    p.add_argument("--subjects", type=int)
    p.add_argument("--languages", type=int)
    p.add_argument("--probes", type=int)
    p.add_argument("--top1", type=float)
    p.add_argument("--topk", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--lang-acc", dest="lang_acc", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", dest="out_dir")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
