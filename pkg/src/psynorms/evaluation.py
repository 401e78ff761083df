"""Repeated k-fold cross-validation and the scoring metrics it reports.

Metrics are computed per fold and then averaged over all k*reps folds.
Correlations on a constant vector are undefined; they are reported as None
and excluded from averages together with a count of exclusions.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .features import ALL_VIEWS, FeatureResources, ViewKind
from .norms import NormDataset, PropertyKind
from .regression import predict_multiview, train_multiview


@dataclass(frozen=True)
class FoldPlan:
    """Seeded test-fold assignments: per repetition, a partition of 0..n-1."""

    n: int
    k: int
    reps: int
    seed: int
    assignments: tuple[tuple[tuple[int, ...], ...], ...]


def make_folds(n: int, k: int, reps: int, seed: int) -> FoldPlan:
    """Shuffle 0..n-1 once per repetition and cut the shuffle into k blocks.

    Block sizes differ by at most one (the first n % k blocks are longer).
    Identical arguments always reproduce identical assignments.
    """
    if k < 2:
        raise DataError(f"k must be at least 2, got {k}")
    if n < k:
        raise DataError(f"cannot split {n} items into {k} folds")
    if reps < 1:
        raise DataError(f"reps must be at least 1, got {reps}")
    rng = np.random.default_rng(seed)
    assignments = []
    for _ in range(reps):
        perm = rng.permutation(n)
        folds = tuple(tuple(int(i) for i in block) for block in np.array_split(perm, k))
        assignments.append(folds)
    return FoldPlan(n=n, k=k, reps=reps, seed=seed, assignments=tuple(assignments))


def mse(pred, gold) -> float:
    pred = np.asarray(pred, dtype=np.float64)
    gold = np.asarray(gold, dtype=np.float64)
    if pred.shape != gold.shape or pred.size == 0:
        raise DataError(f"length mismatch: {pred.shape} vs {gold.shape}")
    return float(np.mean((pred - gold) ** 2))


def pearson(a, b) -> float | None:
    """Sample Pearson correlation; None when either vector is constant."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.size < 2:
        raise DataError("pearson needs two equal-length vectors of size >= 2")
    if np.all(a == a[0]) or np.all(b == b[0]):
        return None
    ac = a - a.mean()
    bc = b - b.mean()
    denom = float(np.sqrt(np.sum(ac * ac) * np.sum(bc * bc)))
    if denom == 0.0 or not np.isfinite(denom):
        return None
    return float(np.sum(ac * bc) / denom)


def rankdata(values) -> np.ndarray:
    """1-based fractional ranks; ties receive the average of their positions."""
    a = np.asarray(values, dtype=np.float64)
    order = np.argsort(a, kind="mergesort")
    ranks = np.empty(a.size, dtype=np.float64)
    i = 0
    while i < a.size:
        j = i
        while j + 1 < a.size and a[order[j + 1]] == a[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(a, b) -> float | None:
    """Pearson correlation of average-tie ranks."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.size < 2:
        raise DataError("spearman needs two equal-length vectors of size >= 2")
    return pearson(rankdata(a), rankdata(b))


def cronbach_alpha(ratings) -> float | None:
    """Internal consistency over a raters x items matrix (population variances).

    None when the total scores have zero variance.
    """
    matrix = np.asarray(ratings, dtype=np.float64)
    if matrix.ndim != 2:
        raise DataError("ratings must be a 2-d raters x items matrix")
    k, n = matrix.shape
    if k < 2 or n < 2:
        raise DataError(f"need at least 2 raters and 2 items, got {k}x{n}")
    rater_vars = matrix.var(axis=1)
    total_var = matrix.sum(axis=0).var()
    if total_var == 0.0:
        return None
    return float(k / (k - 1) * (1.0 - rater_vars.sum() / total_var))


@dataclass
class ComboResult:
    views: tuple[ViewKind, ...]
    mse: float | None = None
    pearson: float | None = None
    spearman: float | None = None
    fold_mse: list = field(default_factory=list)
    fold_pearson: list = field(default_factory=list)
    fold_spearman: list = field(default_factory=list)
    undefined_pearson: int = 0
    undefined_spearman: int = 0
    skipped_test_words: int = 0
    failed: bool = False
    error: str | None = None


@dataclass
class EvalReport:
    property: PropertyKind
    n: int
    k: int
    reps: int
    seed: int
    lam: float
    combos: list[ComboResult]


def all_view_combos(views: tuple[ViewKind, ...]) -> list[tuple[ViewKind, ...]]:
    """Every non-empty subset, singletons first, in canonical view order."""
    pool = sorted(set(views), key=ALL_VIEWS.index)
    combos = []
    for size in range(1, len(pool) + 1):
        combos.extend(itertools.combinations(pool, size))
    return combos


def _mean_defined(values: list) -> tuple[float | None, int]:
    defined = [v for v in values if v is not None]
    if not defined:
        return None, len(values)
    return float(np.mean(defined)), len(values) - len(defined)


def cross_validate(
    property: PropertyKind,
    dataset: NormDataset,
    resources: FeatureResources,
    combos: list[tuple[ViewKind, ...]],
    plan: FoldPlan,
    lam: float,
) -> EvalReport:
    """Score every view combination under the shared fold plan.

    Training failures inside a fold mark the whole combination as failed
    rather than aborting the run. Test words out of vocabulary for every view
    of a combination are skipped and counted.
    """
    if plan.n != len(dataset):
        raise DataError(f"fold plan covers {plan.n} items but dataset has {len(dataset)}")
    records = dataset.records
    report = EvalReport(
        property=property,
        n=len(dataset),
        k=plan.k,
        reps=plan.reps,
        seed=plan.seed,
        lam=lam,
        combos=[],
    )
    for combo in combos:
        result = ComboResult(views=combo)
        try:
            for rep_folds in plan.assignments:
                for test_fold in rep_folds:
                    test = set(test_fold)
                    train_records = tuple(
                        r for i, r in enumerate(records) if i not in test
                    )
                    train_ds = NormDataset(
                        property=dataset.property,
                        scale=dataset.scale,
                        records=train_records,
                    )
                    model = train_multiview(property, train_ds, combo, resources, lam)
                    preds, golds = [], []
                    for i in test_fold:
                        try:
                            preds.append(
                                predict_multiview(model, records[i].word, resources)
                            )
                        except DataError:
                            result.skipped_test_words += 1
                            continue
                        golds.append(records[i].rating)
                    if len(golds) < 2:
                        raise DataError(
                            "fewer than 2 scorable test words in a fold; "
                            "too many out-of-vocabulary test words"
                        )
                    result.fold_mse.append(mse(preds, golds))
                    result.fold_pearson.append(pearson(preds, golds))
                    result.fold_spearman.append(spearman(preds, golds))
        except Exception as exc:  # fold failures are recorded, not fatal
            result.failed = True
            result.error = f"{type(exc).__name__}: {exc}"
            result.fold_mse, result.fold_pearson, result.fold_spearman = [], [], []
        if not result.failed:
            result.mse = float(np.mean(result.fold_mse))
            result.pearson, result.undefined_pearson = _mean_defined(result.fold_pearson)
            result.spearman, result.undefined_spearman = _mean_defined(result.fold_spearman)
        report.combos.append(result)
    return report


PROPERTY_ORDER = (
    PropertyKind.CONCRETENESS,
    PropertyKind.AGE_OF_ACQUISITION,
    PropertyKind.IMAGEABILITY,
    PropertyKind.SUBJECTIVE_FREQUENCY,
)

# Reporting order for property pairs, highest-interest comparisons first.
PROPERTY_PAIRS = (
    (PropertyKind.AGE_OF_ACQUISITION, PropertyKind.CONCRETENESS),
    (PropertyKind.AGE_OF_ACQUISITION, PropertyKind.IMAGEABILITY),
    (PropertyKind.AGE_OF_ACQUISITION, PropertyKind.SUBJECTIVE_FREQUENCY),
    (PropertyKind.IMAGEABILITY, PropertyKind.SUBJECTIVE_FREQUENCY),
    (PropertyKind.CONCRETENESS, PropertyKind.SUBJECTIVE_FREQUENCY),
    (PropertyKind.IMAGEABILITY, PropertyKind.CONCRETENESS),
)


def property_correlations(lexicon) -> list[list[float | None]]:
    """4x4 Pearson matrix over the four inferred ratings of a lexicon.

    Rows and columns follow PROPERTY_ORDER; the diagonal is 1 by definition
    and undefined cells (constant rating columns) are None.
    """
    if not lexicon:
        raise DataError("empty lexicon")
    columns = {}
    for kind in PROPERTY_ORDER:
        try:
            columns[kind] = np.array([e.ratings[kind] for e in lexicon], dtype=np.float64)
        except KeyError:
            raise DataError(f"lexicon entry missing a rating for {kind.value}") from None
    matrix: list[list[float | None]] = []
    for row_kind in PROPERTY_ORDER:
        row: list[float | None] = []
        for col_kind in PROPERTY_ORDER:
            if row_kind is col_kind:
                row.append(1.0)
            else:
                row.append(pearson(columns[row_kind], columns[col_kind]))
        matrix.append(row)
    return matrix


def correlation_pairs(matrix: list[list[float | None]]) -> list[dict]:
    index = {kind: i for i, kind in enumerate(PROPERTY_ORDER)}
    return [
        {
            "pair": f"{a.value} vs {b.value}",
            "pearson": matrix[index[a]][index[b]],
        }
        for a, b in PROPERTY_PAIRS
    ]


def report_to_dict(report: EvalReport) -> dict:
    """A JSON-ready view of the report; deterministic for fixed inputs."""
    return {
        "config": {
            "property": report.property.value,
            "dataset_size": report.n,
            "k": report.k,
            "reps": report.reps,
            "seed": report.seed,
            "lambda": report.lam,
        },
        "combinations": [
            {
                "views": [v.value for v in combo.views],
                "mse": combo.mse,
                "pearson": combo.pearson,
                "spearman": combo.spearman,
                "per_fold": {
                    "mse": combo.fold_mse,
                    "pearson": combo.fold_pearson,
                    "spearman": combo.fold_spearman,
                },
                "undefined_pearson": combo.undefined_pearson,
                "undefined_spearman": combo.undefined_spearman,
                "skipped_test_words": combo.skipped_test_words,
                "failed": combo.failed,
                "error": combo.error,
            }
            for combo in report.combos
        ],
    }


def write_report(report: EvalReport, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(report_to_dict(report), handle, indent=2, sort_keys=True)
        handle.write("\n")


def _fmt(value: float | None) -> str:
    return "  n/a" if value is None else f"{value:.3f}"


def render_report_table(report: EvalReport) -> str:
    """Plain-text table: one row per view combination, MSE and correlations."""
    label = {
        ViewKind.LEXICAL: "Lexical",
        ViewKind.EMBEDDING_A: "EmbeddingA",
        ViewKind.EMBEDDING_B: "EmbeddingB",
    }
    names = [" + ".join(label[v] for v in combo.views) for combo in report.combos]
    width = max(len(name) for name in names) if names else 10
    lines = [
        f"{report.property.value} (n={report.n}, {report.reps}x{report.k}-fold, "
        f"lambda={report.lam}, seed={report.seed})",
        f"{'views'.ljust(width)}  {'MSE':>7}  {'pearson':>7}  {'spearman':>8}",
    ]
    for name, combo in zip(names, report.combos):
        if combo.failed:
            lines.append(f"{name.ljust(width)}  failed: {combo.error}")
        else:
            lines.append(
                f"{name.ljust(width)}  {_fmt(combo.mse):>7}  "
                f"{_fmt(combo.pearson):>7}  {_fmt(combo.spearman):>8}"
            )
    return "\n".join(lines) + "\n"
