"""Binary SVMs trained by sequential minimal optimization, one-vs-rest
multiclass, and exhaustive grid search under stratified k-fold CV.

The solver is the simplified two-index SMO: sweep the training set for
Karush-Kuhn-Tucker violators and pair each with a second index scanned
from a seeded pseudorandom offset, updating the two multipliers in closed
form. Non-convergence is a first-class outcome: the model comes back with
``converged=False`` and the last iterate instead of an exception.

Features are standardized (train-set mean/variance) before multiclass
training; the statistics travel with the model. Scores are raw decision
values, no probability calibration.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._backend import kernels as _kernels
from .dataset import kfold
from .errors import DataError, NumericalError
from .fusion import ScoreMatrix
from .geometry import DEFAULT_FRAMES, METRIC_ORDER
from .preprocess import read_tensor, write_tensor

DEFAULT_TOLERANCE = 1e-3
DEFAULT_MAX_PASSES = 2000
K_RANGE = (2, 10)
MODEL_FORMAT_VERSION = 1
_STD_FLOOR = 1e-12

_MASK64 = (1 << 64) - 1


def derive_seed(*parts) -> int:
    """Stable non-negative sub-seed from integer parts (boost-style mix)."""
    h = 0x9E3779B97F4A7C15
    for p in parts:
        h ^= (int(p) & _MASK64) + 0x9E3779B97F4A7C15 + ((h << 6) & _MASK64) + (h >> 2)
        h &= _MASK64
    return h & 0x7FFFFFFFFFFFFFFF


@dataclass(frozen=True)
class Kernel:
    """Kernel function description: linear, rbf or polynomial."""

    kind: str
    gamma: float | None = None
    degree: int | None = None
    coef0: float | None = None

    def __post_init__(self):
        if self.kind == "linear":
            if any(v is not None for v in (self.gamma, self.degree, self.coef0)):
                raise DataError("linear kernel takes no parameters")
        elif self.kind == "rbf":
            if self.gamma is None or self.gamma <= 0:
                raise DataError(f"rbf kernel needs gamma > 0, got {self.gamma}")
            if self.degree is not None or self.coef0 is not None:
                raise DataError("rbf kernel takes only gamma")
        elif self.kind == "polynomial":
            if self.gamma is None or self.gamma <= 0:
                raise DataError(f"polynomial kernel needs gamma > 0, got {self.gamma}")
            if self.degree is None or self.degree < 1:
                raise DataError(f"polynomial kernel needs degree >= 1, got {self.degree}")
            if self.coef0 is None:
                raise DataError("polynomial kernel needs coef0")
        else:
            raise DataError(f"unknown kernel kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "linear":
            return "linear"
        if self.kind == "rbf":
            return f"rbf(gamma={self.gamma})"
        return f"polynomial(gamma={self.gamma},degree={self.degree},coef0={self.coef0})"

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        for name in ("gamma", "degree", "coef0"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        return out

    @classmethod
    def from_json(cls, payload: dict) -> "Kernel":
        return cls(
            kind=str(payload["kind"]),
            gamma=payload.get("gamma"),
            degree=payload.get("degree"),
            coef0=payload.get("coef0"),
        )


def gram(kernel: Kernel, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kernel matrix K[i, j] = K(A[i], B[j])."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if kernel.kind == "linear":
        return A @ B.T
    if kernel.kind == "rbf":
        d2 = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * (A @ B.T)
        np.maximum(d2, 0.0, out=d2)
        return np.exp(-kernel.gamma * d2)
    return (kernel.gamma * (A @ B.T) + kernel.coef0) ** kernel.degree


@dataclass(frozen=True)
class SvmBinaryModel:
    """One SMO-trained binary SVM (support vectors only)."""

    support_vectors: np.ndarray  # (m, d)
    coefficients: np.ndarray  # (m,) alpha_i * y_i
    bias: float
    kernel: Kernel
    C: float
    tolerance: float
    converged: bool = True
    passes: int = 0
    kkt_excess: float = 0.0

    def __post_init__(self):
        sv = np.asarray(self.support_vectors, dtype=np.float64)
        coef = np.asarray(self.coefficients, dtype=np.float64)
        if sv.ndim != 2 or coef.shape != (sv.shape[0],):
            raise DataError(
                f"support vectors {sv.shape} and coefficients {coef.shape} do not line up"
            )
        if coef.size:
            mags = np.abs(coef)
            if (mags <= 0).any() or (mags > self.C * (1 + 1e-9)).any():
                raise DataError("coefficient magnitudes must lie in (0, C]")
            if abs(coef.sum()) > 1e-8:
                raise DataError(f"sum of alpha_i*y_i is {coef.sum():.3e}, expected ~0")
        object.__setattr__(self, "support_vectors", sv)
        object.__setattr__(self, "coefficients", coef)

    @property
    def feature_len(self) -> int:
        return self.support_vectors.shape[1]


def smo_train(
    X,
    y,
    C: float,
    kernel: Kernel,
    tolerance: float = DEFAULT_TOLERANCE,
    max_passes: int = DEFAULT_MAX_PASSES,
    seed: int = 0,
    return_alphas: bool = False,
):
    """Train a binary SVM; labels must be -1/+1 with both present.

    Returns the model, or (model, full alpha vector) with
    ``return_alphas=True``. A run that hits the pass budget comes back
    with ``converged=False`` carrying the last iterate.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y_arr = np.asarray(y, dtype=np.float64).ravel()
    if X.ndim != 2 or X.shape[0] != y_arr.shape[0]:
        raise DataError(f"X {X.shape} and y {y_arr.shape} do not line up")
    if not np.isfinite(X).all():
        raise DataError("features must be finite")
    if not np.all(np.isin(y_arr, (-1.0, 1.0))):
        raise DataError("labels must be -1 or +1")
    if (y_arr == 1.0).sum() == 0 or (y_arr == -1.0).sum() == 0:
        raise DataError("need at least one example of each label")
    if C <= 0 or tolerance <= 0:
        raise DataError("C and tolerance must be positive")

    K = gram(kernel, X, X)
    alpha, bias, converged, passes = _kernels.smo_solve(
        np.ascontiguousarray(K),
        y_arr,
        float(C),
        float(tolerance),
        int(max_passes),
        int(derive_seed(seed)),
    )
    sv_mask = alpha > 0.0
    decision = (alpha * y_arr) @ K + bias
    excess = kkt_excess(alpha, y_arr, decision, C, tolerance)
    if converged and excess > 1e-9:
        raise NumericalError(
            f"SMO reported convergence but the KKT audit finds excess {excess:.3e}"
        )
    model = SvmBinaryModel(
        support_vectors=X[sv_mask],
        coefficients=(alpha * y_arr)[sv_mask],
        bias=float(bias),
        kernel=kernel,
        C=float(C),
        tolerance=float(tolerance),
        converged=bool(converged),
        passes=int(passes),
        kkt_excess=float(excess),
    )
    if return_alphas:
        return model, alpha
    return model


def kkt_excess(alpha, y, decision, C, tolerance) -> float:
    """Largest violation beyond tolerance of the KKT conditions (0 = pass).

    alpha == 0 requires y*f >= 1 - tol; alpha == C requires y*f <= 1 + tol;
    interior alphas require |y*f - 1| <= tol.
    """
    alpha = np.asarray(alpha, dtype=np.float64)
    margin = np.asarray(y, dtype=np.float64) * np.asarray(decision, dtype=np.float64) - 1.0
    excess = 0.0
    for a, m in zip(alpha, margin):
        if a == 0.0:
            v = -m - tolerance
        elif a == C:
            v = m - tolerance
        else:
            v = abs(m) - tolerance
        if v > excess:
            excess = v
    return float(excess)


def decision_values(model: SvmBinaryModel, X) -> np.ndarray:
    """Batch decision function sum_i coef_i K(sv_i, x) + bias."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.feature_len:
        raise DataError(f"expected rows of length {model.feature_len}, got {X.shape}")
    if X.shape[0] == 0:
        return np.zeros(0)
    if model.support_vectors.shape[0] == 0:
        return np.full(X.shape[0], model.bias)
    return gram(model.kernel, X, model.support_vectors) @ model.coefficients + model.bias


def decision_value(model: SvmBinaryModel, x) -> float:
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.shape[0] != model.feature_len:
        raise DataError(f"expected a row of length {model.feature_len}, got {x.shape[0]}")
    return float(decision_values(model, x[None, :])[0])


@dataclass(frozen=True)
class SvmMulticlassModel:
    """One-vs-rest ensemble sharing a kernel, C and feature scaling."""

    class_labels: tuple[str, ...]
    binaries: tuple[SvmBinaryModel, ...]
    feature_len: int
    scale_mean: np.ndarray
    scale_std: np.ndarray

    def __post_init__(self):
        if len(self.binaries) != len(self.class_labels):
            raise DataError("one binary model per class label is required")
        for b in self.binaries:
            if b.feature_len != self.feature_len:
                raise DataError("all binaries must share feature_len")
        mean = np.asarray(self.scale_mean, dtype=np.float64)
        std = np.asarray(self.scale_std, dtype=np.float64)
        if mean.shape != (self.feature_len,) or std.shape != (self.feature_len,):
            raise DataError("scaling statistics must match feature_len")
        object.__setattr__(self, "class_labels", tuple(self.class_labels))
        object.__setattr__(self, "binaries", tuple(self.binaries))
        object.__setattr__(self, "scale_mean", mean)
        object.__setattr__(self, "scale_std", std)

    @property
    def converged(self) -> bool:
        return all(b.converged for b in self.binaries)


def fit_scaler(X) -> tuple[np.ndarray, np.ndarray]:
    """Per-dimension mean and std (floored) from training rows."""
    X = np.asarray(X, dtype=np.float64)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std < _STD_FLOOR, 1.0, std)
    return mean, std


def train_multiclass(
    X,
    labels,
    kernel: Kernel,
    C: float,
    tolerance: float = DEFAULT_TOLERANCE,
    max_passes: int = DEFAULT_MAX_PASSES,
    seed: int = 0,
    standardize: bool = True,
) -> SvmMulticlassModel:
    """Train one-vs-rest binaries over standardized features."""
    X = np.asarray(X, dtype=np.float64)
    labels = [str(l) for l in labels]
    if X.ndim != 2 or X.shape[0] != len(labels):
        raise DataError(f"X {X.shape} and {len(labels)} labels do not line up")
    class_labels = sorted(set(labels))
    if len(class_labels) < 2:
        raise DataError("multiclass training needs at least two distinct labels")
    if standardize:
        mean, std = fit_scaler(X)
    else:
        mean = np.zeros(X.shape[1])
        std = np.ones(X.shape[1])
    Xs = (X - mean) / std
    y = np.asarray(labels)
    binaries = []
    for ci, cls in enumerate(class_labels):
        yy = np.where(y == cls, 1.0, -1.0)
        binaries.append(
            smo_train(
                Xs,
                yy,
                C=C,
                kernel=kernel,
                tolerance=tolerance,
                max_passes=max_passes,
                seed=derive_seed(seed, ci),
            )
        )
    return SvmMulticlassModel(
        class_labels=tuple(class_labels),
        binaries=tuple(binaries),
        feature_len=X.shape[1],
        scale_mean=mean,
        scale_std=std,
    )


def predict_scores(model: SvmMulticlassModel, X, probe_ids=None) -> ScoreMatrix:
    """Score every row against every class; columns follow class_labels."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or (X.size and X.shape[1] != model.feature_len):
        raise DataError(f"expected rows of length {model.feature_len}, got shape {X.shape}")
    if X.shape[0] == 0:
        return ScoreMatrix(
            probe_ids=(),
            class_labels=model.class_labels,
            scores=np.zeros((0, len(model.class_labels))),
        )
    if probe_ids is None:
        probe_ids = tuple(f"row{i:06d}" for i in range(X.shape[0]))
    Xs = (X - model.scale_mean) / model.scale_std
    cols = [decision_values(b, Xs) for b in model.binaries]
    return ScoreMatrix(
        probe_ids=tuple(probe_ids),
        class_labels=model.class_labels,
        scores=np.stack(cols, axis=1),
    )


def predict_labels(model: SvmMulticlassModel, X) -> list[str]:
    scores = predict_scores(model, X)
    if scores.scores.shape[0] == 0:
        return []
    picks = np.argmax(scores.scores, axis=1)
    return [model.class_labels[int(i)] for i in picks]


# ---------------------------------------------------------------------------
# Grid search


@dataclass(frozen=True)
class GridConfig:
    """One point of the hyperparameter lattice.

    pivot/metrics/num_frames are set only when the search re-extracts
    features per configuration (landmark-backed training); they stay None
    for a fixed feature matrix.
    """

    kernel: Kernel
    C: float
    pivot: int | None = None
    metrics: tuple[str, ...] | None = None
    num_frames: int | None = None

    def feature_key(self):
        return (self.pivot, self.metrics, self.num_frames)

    def describe(self) -> str:
        parts = [self.kernel.describe(), f"C={self.C}"]
        if self.pivot is not None:
            parts.append(f"pivot={self.pivot}")
        if self.metrics is not None:
            parts.append("metrics=" + "+".join(self.metrics))
        if self.num_frames is not None:
            parts.append(f"T={self.num_frames}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {
            "kernel": self.kernel.to_json(),
            "C": self.C,
            "pivot": self.pivot,
            "metrics": None if self.metrics is None else list(self.metrics),
            "num_frames": self.num_frames,
        }

    @classmethod
    def from_json(cls, payload: dict) -> "GridConfig":
        metrics = payload.get("metrics")
        return cls(
            kernel=Kernel.from_json(payload["kernel"]),
            C=float(payload["C"]),
            pivot=payload.get("pivot"),
            metrics=None if metrics is None else tuple(metrics),
            num_frames=payload.get("num_frames"),
        )


@dataclass(frozen=True)
class GridCell:
    config_index: int
    config: GridConfig
    k: int
    mean_accuracy: float
    fold_accuracies: tuple[float, ...]
    n_nonconverged: int = 0


@dataclass(frozen=True)
class InvalidCell:
    config_index: int
    config: GridConfig
    k: int
    reason: str


@dataclass(frozen=True)
class GridSearchResult:
    best_config: GridConfig
    best_k: int
    best_cv_accuracy: float
    table: tuple[GridCell, ...]
    invalid: tuple[InvalidCell, ...]
    seed: int

    def __post_init__(self):
        if self.table and self.best_cv_accuracy != max(c.mean_accuracy for c in self.table):
            raise DataError("best_cv_accuracy must attain the table maximum")


def default_grid(feature_axes: bool = False) -> list[GridConfig]:
    """The stock lattice: {linear, rbf gamma 0.01/0.1/1} x C {0.1, 1, 10, 100};
    with feature_axes also pivot 0..7 x {each single metric, all three}."""
    kernel_list = [
        Kernel("linear"),
        Kernel("rbf", gamma=0.01),
        Kernel("rbf", gamma=0.1),
        Kernel("rbf", gamma=1.0),
    ]
    c_list = [0.1, 1.0, 10.0, 100.0]
    configs = []
    if feature_axes:
        metric_sets = [("euclidean",), ("manhattan",), ("cosine",), METRIC_ORDER]
        for kern in kernel_list:
            for C in c_list:
                for pivot in range(8):
                    for metrics in metric_sets:
                        configs.append(
                            GridConfig(
                                kernel=kern,
                                C=C,
                                pivot=pivot,
                                metrics=tuple(metrics),
                                num_frames=DEFAULT_FRAMES,
                            )
                        )
    else:
        for kern in kernel_list:
            for C in c_list:
                configs.append(GridConfig(kernel=kern, C=C))
    return configs


def _evaluate_cell(X, labels, cfg, k, cell_seed, tolerance, max_passes):
    folds = kfold(labels, k, seed=derive_seed(cell_seed, 1), stratified=True)
    y = np.asarray([str(l) for l in labels])
    accuracies = []
    nonconverged = 0
    all_idx = np.arange(len(labels))
    for fi, fold in enumerate(folds):
        test_idx = np.asarray(sorted(fold), dtype=np.int64)
        mask = np.ones(len(labels), dtype=bool)
        mask[test_idx] = False
        train_idx = all_idx[mask]
        model = train_multiclass(
            X[train_idx],
            y[train_idx].tolist(),
            kernel=cfg.kernel,
            C=cfg.C,
            tolerance=tolerance,
            max_passes=max_passes,
            seed=derive_seed(cell_seed, 2, fi),
        )
        nonconverged += sum(1 for b in model.binaries if not b.converged)
        predicted = predict_labels(model, X[test_idx])
        truth = y[test_idx]
        accuracies.append(float(np.mean([p == t for p, t in zip(predicted, truth)])))
    return accuracies, nonconverged


def grid_search(
    features,
    labels,
    grid: list[GridConfig] | None = None,
    seed: int = 0,
    k_range: tuple[int, int] = K_RANGE,
    tolerance: float = DEFAULT_TOLERANCE,
    max_passes: int = DEFAULT_MAX_PASSES,
    jobs: int = 1,
) -> GridSearchResult:
    """Exhaustively score every (config, k) cell by stratified k-fold CV.

    `features` is either a fixed (n, d) matrix or a callable mapping a
    GridConfig to one (for landmark-backed searches). Cells whose class
    support cannot sustain stratified k are recorded as invalid with a
    reason rather than failing the search. Ties break toward the earlier
    cell in enumeration order (grid-major, k ascending).
    """
    labels = [str(l) for l in labels]
    if not labels:
        raise DataError("grid search needs a non-empty dataset")
    provider = features if callable(features) else None
    if grid is None:
        grid = default_grid(feature_axes=provider is not None)
    if not grid:
        raise DataError("grid must be non-empty")
    k_lo, k_hi = k_range
    if not (2 <= k_lo <= k_hi <= 10):
        raise DataError(f"k_range must lie within [2, 10], got {k_range}")

    counts: dict[str, int] = {}
    for l in labels:
        counts[l] = counts.get(l, 0) + 1
    support = min(counts.values())

    matrices: dict = {}
    if provider is None:
        X = np.asarray(features, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] != len(labels):
            raise DataError(f"feature matrix {X.shape} does not match {len(labels)} labels")
        for cfg in grid:
            if cfg.pivot is not None or cfg.metrics is not None or cfg.num_frames is not None:
                raise DataError(
                    "grid varies feature parameters but a fixed feature matrix was given"
                )
        matrices[(None, None, None)] = X
    else:
        for cfg in grid:
            key = cfg.feature_key()
            if key not in matrices:
                M = np.asarray(provider(cfg), dtype=np.float64)
                if M.ndim != 2 or M.shape[0] != len(labels):
                    raise DataError(
                        f"feature provider returned {M.shape} for {len(labels)} labels"
                    )
                matrices[key] = M

    cells = [(ci, k) for ci in range(len(grid)) for k in range(k_lo, k_hi + 1)]

    def run_cell(cell):
        ci, k = cell
        cfg = grid[ci]
        if k > support:
            return InvalidCell(
                config_index=ci,
                config=cfg,
                k=k,
                reason=f"stratified k={k} exceeds the smallest class support ({support})",
            )
        X = matrices[cfg.feature_key()]
        accuracies, nonconverged = _evaluate_cell(
            X, labels, cfg, k, derive_seed(seed, ci, k), tolerance, max_passes
        )
        return GridCell(
            config_index=ci,
            config=cfg,
            k=k,
            mean_accuracy=float(np.mean(accuracies)),
            fold_accuracies=tuple(accuracies),
            n_nonconverged=nonconverged,
        )

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_cell, cells))
    else:
        results = [run_cell(c) for c in cells]

    table = tuple(r for r in results if isinstance(r, GridCell))
    invalid = tuple(r for r in results if isinstance(r, InvalidCell))
    if not table:
        raise DataError("every grid cell was invalid; nothing to select")
    best = table[0]
    for cell in table[1:]:
        if cell.mean_accuracy > best.mean_accuracy:
            best = cell
    return GridSearchResult(
        best_config=best.config,
        best_k=best.k,
        best_cv_accuracy=best.mean_accuracy,
        table=table,
        invalid=invalid,
        seed=int(seed),
    )


def save_grid_report(result: GridSearchResult, json_path, csv_path) -> None:
    """Emit the full table as JSON plus a flat CSV."""
    payload = {
        "seed": result.seed,
        "best": {
            "config": result.best_config.to_json(),
            "k": result.best_k,
            "cv_accuracy": result.best_cv_accuracy,
        },
        "table": [
            {
                "config_index": c.config_index,
                "config": c.config.to_json(),
                "k": c.k,
                "mean_accuracy": c.mean_accuracy,
                "fold_accuracies": list(c.fold_accuracies),
                "n_nonconverged": c.n_nonconverged,
            }
            for c in result.table
        ],
        "invalid": [
            {
                "config_index": c.config_index,
                "config": c.config.to_json(),
                "k": c.k,
                "reason": c.reason,
            }
            for c in result.invalid
        ],
    }
    Path(json_path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", "utf-8")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["config_index", "kernel", "gamma", "degree", "coef0", "C", "pivot", "metrics", "num_frames", "k", "mean_accuracy"]
        )
        for c in result.table:
            cfg = c.config
            writer.writerow(
                [
                    c.config_index,
                    cfg.kernel.kind,
                    "" if cfg.kernel.gamma is None else repr(cfg.kernel.gamma),
                    "" if cfg.kernel.degree is None else cfg.kernel.degree,
                    "" if cfg.kernel.coef0 is None else repr(cfg.kernel.coef0),
                    repr(cfg.C),
                    "" if cfg.pivot is None else cfg.pivot,
                    "" if cfg.metrics is None else "+".join(cfg.metrics),
                    "" if cfg.num_frames is None else cfg.num_frames,
                    c.k,
                    repr(c.mean_accuracy),
                ]
            )


# ---------------------------------------------------------------------------
# Model files: JSON header + LBTF tensors


def save_model(model: SvmMulticlassModel, model_dir) -> None:
    model_dir = Path(model_dir)
    model_dir.mkdir(parents=True, exist_ok=True)
    sv_stack = (
        np.concatenate([b.support_vectors for b in model.binaries], axis=0)
        if model.binaries
        else np.zeros((0, model.feature_len))
    )
    coef_stack = (
        np.concatenate([b.coefficients for b in model.binaries])
        if model.binaries
        else np.zeros(0)
    )
    header = {
        "format_version": MODEL_FORMAT_VERSION,
        "kernel": model.binaries[0].kernel.to_json(),
        "C": model.binaries[0].C,
        "tolerance": model.binaries[0].tolerance,
        "class_labels": list(model.class_labels),
        "feature_len": model.feature_len,
        "scale_mean": [float(v) for v in model.scale_mean],
        "scale_std": [float(v) for v in model.scale_std],
        "binaries": [],
    }
    start = 0
    for label, b in zip(model.class_labels, model.binaries):
        count = b.support_vectors.shape[0]
        header["binaries"].append(
            {
                "label": label,
                "bias": b.bias,
                "sv_start": start,
                "sv_count": count,
                "converged": b.converged,
                "passes": b.passes,
                "kkt_excess": b.kkt_excess,
            }
        )
        start += count
    (model_dir / "model.json").write_text(
        json.dumps(header, indent=2, sort_keys=True) + "\n", "utf-8"
    )
    write_tensor(np.asarray(sv_stack, dtype=np.float64), model_dir / "support_vectors.lbtf")
    write_tensor(np.asarray(coef_stack, dtype=np.float64), model_dir / "coefficients.lbtf")


def load_model(model_dir) -> SvmMulticlassModel:
    model_dir = Path(model_dir)
    try:
        header = json.loads((model_dir / "model.json").read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read model header in {model_dir}: {exc}") from exc
    if header.get("format_version") != MODEL_FORMAT_VERSION:
        raise DataError(f"{model_dir}: unsupported model format {header.get('format_version')}")
    sv_stack = read_tensor(model_dir / "support_vectors.lbtf")
    coef_stack = read_tensor(model_dir / "coefficients.lbtf")
    kernel = Kernel.from_json(header["kernel"])
    feature_len = int(header["feature_len"])
    if sv_stack.ndim != 2 or sv_stack.shape[1] != feature_len:
        raise DataError(f"{model_dir}: support vector tensor shape {sv_stack.shape} is invalid")
    binaries = []
    for entry in header["binaries"]:
        lo = int(entry["sv_start"])
        hi = lo + int(entry["sv_count"])
        if hi > sv_stack.shape[0] or hi > coef_stack.shape[0]:
            raise DataError(f"{model_dir}: binary {entry['label']!r} slice out of bounds")
        binaries.append(
            SvmBinaryModel(
                support_vectors=sv_stack[lo:hi],
                coefficients=coef_stack[lo:hi],
                bias=float(entry["bias"]),
                kernel=kernel,
                C=float(header["C"]),
                tolerance=float(header["tolerance"]),
                converged=bool(entry["converged"]),
                passes=int(entry["passes"]),
                kkt_excess=float(entry.get("kkt_excess", 0.0)),
            )
        )
    return SvmMulticlassModel(
        class_labels=tuple(header["class_labels"]),
        binaries=tuple(binaries),
        feature_len=feature_len,
        scale_mean=np.asarray(header["scale_mean"], dtype=np.float64),
        scale_std=np.asarray(header["scale_std"], dtype=np.float64),
    )
