"""Acceptance suite: one test per release criterion, each printing a PASS or
FAIL line. Run with ``pytest tests/test_acceptance.py -v -s`` to see the
lines as they execute."""

import csv
import json
import time

import numpy as np

from conftest import dataset_from_pairs
from helpers import (
    brute_spearman,
    embedding_resources,
    make_embedding,
    ridge_oracle,
    synthetic_words,
)
from psynorms.cli import main
from psynorms.errors import DataError
from psynorms.evaluation import (
    cronbach_alpha,
    cross_validate,
    make_folds,
    pearson,
    spearman,
)
from psynorms.features import FeatureResources, FeatureVector, ViewKind
from psynorms.norms import NINE_POINT, SEVEN_POINT, PropertyKind, convert_scale
from psynorms.readability import (
    GradeLabel,
    classic_formulas,
    fit_grade_classifier,
    macro_f1,
    mattr,
    profile_text,
)
from psynorms.regression import (
    DesignMatrix,
    predict_multiview,
    predict_ridge,
    train_multiview,
    train_ridge,
)


def check(name, ok):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")
    assert ok, f"acceptance criterion failed: {name}"


def test_ridge_oracle_equivalence():
    rng = np.random.default_rng(101)
    lambdas = [0.01, 0.5, 10.0]
    start = time.perf_counter()
    worst = 0.0
    for i in range(200):
        n = int(rng.integers(5, 101))
        d = int(rng.integers(1, 31))
        lam = lambdas[i % 3]
        X = rng.normal(size=(n, d))
        y = rng.normal(size=n)
        model = train_ridge(
            DesignMatrix(entries=X, targets=y), lam, ViewKind.LEXICAL
        )
        expected, _ = ridge_oracle(X, y, lam)
        denominator = float(np.linalg.norm(expected))
        relative = float(np.linalg.norm(model.weights - expected)) / max(denominator, 1e-12)
        worst = max(worst, relative)
    elapsed = time.perf_counter() - start
    check("ridge-oracle-equivalence (200 instances, rel err <= 1e-8)", worst <= 1e-8)
    check("ridge-oracle-equivalence runtime < 10 s", elapsed < 10.0)


def test_synthetic_recovery():
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    words = synthetic_words(2000)
    model = make_embedding(words, 20, rng, ViewKind.EMBEDDING_A)
    weights = rng.normal(size=20)
    signals = np.array([model.vectors[w] @ weights for w in words])
    signals *= 0.9 / signals.std()
    targets = np.clip(4.0 + signals + rng.normal(size=2000) * 0.1, 1.0, 7.0)
    dataset = dataset_from_pairs(list(zip(words, targets)))
    plan = make_folds(2000, 5, 1, seed=1)
    report = cross_validate(
        PropertyKind.CONCRETENESS,
        dataset,
        embedding_resources(model),
        [(ViewKind.EMBEDDING_A,)],
        plan,
        lam=1.0,
    )
    elapsed = time.perf_counter() - start
    (combo,) = report.combos
    check("synthetic-recovery pearson >= 0.98", combo.pearson is not None
          and combo.pearson >= 0.98)
    check("synthetic-recovery mse <= 0.02", combo.mse <= 0.02)
    check("synthetic-recovery runtime < 30 s", elapsed < 30.0)


def test_fusion_exactness():
    rng = np.random.default_rng(303)
    count = 1000
    words = [f"{'x' * int(rng.integers(0, 9))}w{i:04d}" for i in range(count)]
    model_a = make_embedding(words, 8, rng, ViewKind.EMBEDDING_A)
    model_b = make_embedding(words, 6, rng, ViewKind.EMBEDDING_B)
    resources = FeatureResources(
        embeddings={ViewKind.EMBEDDING_A: model_a, ViewKind.EMBEDDING_B: model_b}
    )
    dataset = dataset_from_pairs(
        list(zip(words, rng.uniform(1, 7, size=count)))
    )
    model = train_multiview(
        PropertyKind.IMAGEABILITY,
        dataset,
        (ViewKind.LEXICAL, ViewKind.EMBEDDING_A, ViewKind.EMBEDDING_B),
        resources,
    )
    worst = 0.0
    for word in words:
        parts = [
            predict_ridge(
                sub, FeatureVector(view=sub.view, values=resources.vector(word, sub.view))
            )
            for sub in model.submodels
        ]
        fused = predict_multiview(model, word, resources)
        worst = max(worst, abs(fused - sum(parts) / len(parts)))
    check("fusion-exactness (1000 words, <= 1e-12)", worst <= 1e-12)


def test_fold_plan_soundness():
    ok = True
    for n in range(5, 201):
        for k in (2, 5, 10):
            for reps in (1, 20):
                if k > n:
                    try:
                        make_folds(n, k, reps, seed=0)
                        ok = False
                    except DataError:
                        pass
                    continue
                plan = make_folds(n, k, reps, seed=n * 31 + k)
                for rep in plan.assignments:
                    flat = sorted(i for fold in rep for i in fold)
                    if flat != list(range(n)):
                        ok = False
                    sizes = [len(fold) for fold in rep]
                    if max(sizes) - min(sizes) > 1:
                        ok = False
    check("fold-plan-soundness (n in [5,200], k in {2,5,10}, reps in {1,20})", ok)


def test_statistics_oracles():
    rng = np.random.default_rng(404)
    worst = 0.0
    checked = 0
    while checked < 1000:
        n = int(rng.integers(3, 60))
        a = rng.integers(0, 8, size=n).astype(float)
        b = rng.integers(0, 8, size=n).astype(float)
        ours = spearman(a, b)
        if ours is None:
            continue  # constant vector or constant ranks: undefined by contract
        worst = max(worst, abs(ours - brute_spearman(a, b)))
        checked += 1
    check("statistics-oracles spearman brute force (1000 tied vectors, <= 1e-10)",
          worst <= 1e-10)
    check(
        "statistics-oracles pearson hand case 0.8 (<= 1e-12)",
        abs(pearson([1, 2, 3, 4], [1, 3, 2, 4]) - 0.8) <= 1e-12,
    )
    base = rng.uniform(1, 7, size=50)
    alpha = cronbach_alpha(np.vstack([base, base + 1.5]))
    check("statistics-oracles cronbach shifted duplicate = 1 (<= 1e-12)",
          abs(alpha - 1.0) <= 1e-12)


def test_scale_conversion():
    endpoints = convert_scale(
        dataset_from_pairs([("a", 1.0), ("b", 9.0)], scale=NINE_POINT), SEVEN_POINT
    ).ratings()
    check("scale-conversion endpoints exact", endpoints == [1.0, 7.0])
    midpoint = convert_scale(
        dataset_from_pairs([("a", 5.0)], scale=NINE_POINT), SEVEN_POINT
    ).ratings()[0]
    check("scale-conversion midpoint 5 -> 4 (<= 1e-12)", abs(midpoint - 4.0) <= 1e-12)

    rng = np.random.default_rng(505)
    worst = 0.0
    produced = 0
    while produced < 1000:
        triple = np.sort(rng.uniform(1.0, 9.0, size=3))
        r1, r2, r3 = (float(v) for v in triple)
        if r2 - r1 < 0.05 or r3 - r2 < 0.05:
            continue
        converted = convert_scale(
            dataset_from_pairs([("a", r1), ("b", r2), ("c", r3)], scale=NINE_POINT),
            SEVEN_POINT,
        ).ratings()
        ratio_before = (r2 - r1) / (r3 - r1)
        ratio_after = (converted[1] - converted[0]) / (converted[2] - converted[0])
        worst = max(worst, abs(ratio_after - ratio_before))
        produced += 1
    check("scale-conversion affine ratio on 1000 random triples (<= 1e-12)",
          worst <= 1e-12)


def test_aoa_merge_pipeline_shape(tmp_path):
    words = synthetic_words(2368, prefix="aoa")
    first = words[:765]  # 765 words
    second = words[651:]  # 1717 words, sharing 114 with the first file
    assert len(second) == 1717 and len(set(first) & set(second)) == 114
    rng = np.random.default_rng(606)
    data = tmp_path / "data"
    data.mkdir()
    for name, subset, top in (("aoa_a.csv", first, 7.0), ("aoa_b.csv", second, 9.0)):
        with open(data / name, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["word", "rating"])
            for word in subset:
                writer.writerow([word, round(float(rng.uniform(1.0, top)), 3)])
    config = tmp_path / "run.ini"
    config.write_text(
        "[output]\ndir = out\n\n[norms]\nscale = 1,7\n\n"
        "[norms.aoa]\nsources =\n    data/aoa_a.csv\n    data/aoa_b.csv scale=1,9\n",
        encoding="utf-8",
    )
    code = main(["prepare", "-c", str(config)])
    rows = (tmp_path / "out/prepared/aoa.csv").read_text(encoding="utf-8").splitlines()
    merged = len(rows) - 1  # header
    check("aoa-merge-pipeline-shape (765 + 1717 sharing 114 -> 2368 rows)",
          code == 0 and merged == 2368)


def test_readability_formulas():
    profile = profile_text(" ".join(["pira"] * 10) + ".")
    flesch = classic_formulas(profile, frozenset())["flesch_bp"]
    check("readability flesch_bp desk check 69.485", abs(flesch - 69.485) <= 1e-9)

    tokens = ["sol", "lua", "sol", "mar", "rio", "rio", "sol", "paz"]
    ttr = len(set(tokens)) / len(tokens)
    ok = abs(mattr(tokens, window=len(tokens)) - ttr) <= 1e-12
    ok = ok and abs(mattr(tokens, window=50) - ttr) <= 1e-12
    check("readability mattr = TTR when window >= N (<= 1e-12)", ok)

    rng = np.random.default_rng(707)
    base = classic_formulas(profile_text(" ".join(tokens) + "."), frozenset())
    ok = True
    shuffled_tokens = list(tokens)
    for _ in range(20):
        rng.shuffle(shuffled_tokens)
        other = classic_formulas(
            profile_text(" ".join(shuffled_tokens) + "."), frozenset()
        )
        ok = ok and abs(other["honore"] - base["honore"]) <= 1e-12
        ok = ok and abs(other["brunet"] - base["brunet"]) <= 1e-12
    check("readability honore/brunet shuffle invariance (<= 1e-12)", ok)


def test_classifier_sanity():
    rng = np.random.default_rng(808)
    centers = {
        GradeLabel.G3: (0.0, 0.0),
        GradeLabel.G4: (3.0, 0.0),
        GradeLabel.G5: (0.0, 3.0),
        GradeLabel.G6: (3.0, 3.0),
    }
    X, labels = [], []
    for label, center in centers.items():
        for _ in range(40):
            X.append(rng.normal(loc=center, scale=0.5, size=2))
            labels.append(label)
    X = np.array(X)
    plan = make_folds(len(labels), 10, 1, seed=2)
    fold_scores = []
    for fold in plan.assignments[0]:
        test = set(fold)
        train_idx = [i for i in range(len(labels)) if i not in test]
        classifier = fit_grade_classifier(
            X[train_idx], [labels[i] for i in train_idx], lam=0.1
        )
        predictions = classifier.predict(X[list(fold)])
        fold_scores.append(macro_f1([labels[i] for i in fold], predictions))
    check("classifier-sanity blobs 10-fold macro-F1 >= 0.9",
          float(np.mean(fold_scores)) >= 0.9)

    constant = np.ones((60, 3))
    labels = [GradeLabel.G3] * 33 + [GradeLabel.G4] * 9 + [GradeLabel.G5] * 9 + [
        GradeLabel.G6
    ] * 9
    plan = make_folds(60, 10, 1, seed=3)
    ok = True
    for fold in plan.assignments[0]:
        test = list(fold)
        train_idx = [i for i in range(60) if i not in set(fold)]
        classifier = fit_grade_classifier(
            constant[train_idx], [labels[i] for i in train_idx], lam=1.0
        )
        predictions = classifier.predict(constant[test])
        gold = [labels[i] for i in test]
        ok = ok and macro_f1(gold, predictions) == macro_f1(
            gold, [GradeLabel.G3] * len(gold)
        )
    check("classifier-sanity constant feature = majority baseline", ok)


def test_eval_determinism(tmp_path):
    rng = np.random.default_rng(909)
    words = synthetic_words(80)
    data = tmp_path / "data"
    data.mkdir()
    with open(data / "conc.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["word", "rating"])
        for word in words:
            writer.writerow([word, round(float(rng.uniform(1, 7)), 3)])
    lines = [f"{len(words)} 4"] + [
        w + " " + " ".join(f"{v:.6f}" for v in rng.uniform(-1, 1, size=4))
        for w in words
    ]
    (data / "emb.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    config = tmp_path / "run.ini"
    config.write_text(
        "[output]\ndir = out\n\n[norms]\nscale = 1,7\n\n"
        "[norms.concreteness]\nsources =\n    data/conc.csv\n\n"
        "[features]\nembedding_a = data/emb.txt\n\n"
        "[evaluation]\nk = 5\nreps = 4\nseed = 11\n",
        encoding="utf-8",
    )
    assert main(["prepare", "-c", str(config)]) == 0
    report_path = tmp_path / "out/eval_concreteness.json"
    assert main(["eval", "-c", str(config), "--property", "concreteness",
                 "--views", "lexical,embedding_a"]) == 0
    first = report_path.read_bytes()
    assert main(["eval", "-c", str(config), "--property", "concreteness",
                 "--views", "lexical,embedding_a"]) == 0
    second = report_path.read_bytes()
    content = json.loads(first)
    check(
        "determinism eval twice with one seed -> byte-identical JSON",
        first == second and content["config"]["seed"] == 11
        and len(content["combinations"]) == 3,
    )
