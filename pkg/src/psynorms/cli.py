"""Command-line entry point: reproducible pipeline runs from one config file.

Subcommands: prepare, train, eval, build-lexicon, readability, corr, alpha.
Exit codes: 0 success, 2 usage or config error, 3 data error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import evaluation, features, lexicon, norms, readability, regression
from .config import FREQUENCY_SOURCES, RunConfig, load_run_config, parse_views
from .errors import ConfigError, DataError, NumericalError, PsynormsError
from .features import (
    EMPTY_FREQUENCIES,
    FeatureResources,
    FrequencyList,
    LexicalResources,
    ViewKind,
)
from .norms import PropertyKind

log = logging.getLogger("psynorms")

ENV_PREFIX = "PSYNORMS_"


def _write_json(document: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(document, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _write_text(text: str, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def _load_lexical_resources(cfg: RunConfig) -> LexicalResources:
    lists: dict[str, FrequencyList] = {}
    for name in FREQUENCY_SOURCES:
        path = cfg.frequency_paths.get(name)
        lists[name] = (
            features.load_frequency_list(path, name) if path is not None else EMPTY_FREQUENCIES
        )
    grades = (
        features.load_grade_lexicons(list(cfg.grade_lexicon_paths))
        if cfg.grade_lexicon_paths is not None
        else features.EMPTY_GRADES
    )
    return LexicalResources(
        subtlex=lists["subtlex"],
        subimdb=lists["subimdb"],
        written=lists["written"],
        spoken=lists["spoken"],
        mixed=lists["mixed"],
        grades=grades,
    )


def _load_feature_resources(cfg: RunConfig, views) -> FeatureResources:
    views = set(views)
    lexical = (
        _load_lexical_resources(cfg) if ViewKind.LEXICAL in views else LexicalResources()
    )
    embeddings = {}
    for view in (ViewKind.EMBEDDING_A, ViewKind.EMBEDDING_B):
        if view not in views:
            continue
        path = cfg.embedding_paths.get(view)
        if path is None:
            raise ConfigError(f"[features] {view.value} is required but not configured")
        model = features.load_embeddings(path, view)
        if model.duplicates:
            log.warning("%s: %d duplicate words ignored", path, model.duplicates)
        embeddings[view] = model
    return FeatureResources(lexical=lexical, embeddings=embeddings)


def _orthography(cfg: RunConfig) -> norms.OrthographyMap:
    if cfg.orthography_path is None:
        return norms.starter_orthography()
    return norms.load_orthography_map(cfg.orthography_path)


def cmd_prepare(cfg: RunConfig) -> int:
    """Normalize raw norm sources: orthography, scale conversion, merging."""
    if not cfg.sources:
        raise ConfigError("no [norms.<property>] sources configured")
    needs_map = any(spec.orthography for specs in cfg.sources.values() for spec in specs)
    ortho = _orthography(cfg) if needs_map else norms.EMPTY_ORTHOGRAPHY
    provenance: dict = {
        "target_scale": [cfg.target_scale.min, cfg.target_scale.max],
        "orthography": str(cfg.orthography_path) if cfg.orthography_path else "builtin",
        "properties": {},
    }
    for kind in sorted(cfg.sources, key=lambda k: k.value):
        merged = None
        steps = []
        for spec in cfg.sources[kind]:
            ds = norms.load_norms(spec.path, kind, spec.scale)
            loaded = len(ds)
            replaced = discarded = 0
            if spec.orthography:
                replaced = sum(1 for r in ds.records if r.word in ortho.replacements)
                discarded = sum(1 for r in ds.records if r.word in ortho.discards)
                ds = norms.apply_orthography(ds, ortho)
            converted = spec.scale != cfg.target_scale
            if converted:
                ds = norms.convert_scale(ds, cfg.target_scale)
            steps.append(
                {
                    "path": str(spec.path),
                    "scale": [spec.scale.min, spec.scale.max],
                    "orthography": spec.orthography,
                    "loaded": loaded,
                    "replaced": replaced,
                    "discarded": discarded,
                    "after_orthography": len(ds),
                    "scale_converted": converted,
                }
            )
            merged = ds if merged is None else norms.merge_datasets(merged, ds)
        out_path = cfg.prepared_file(kind)
        norms.write_norms(merged, out_path)
        provenance["properties"][kind.value] = {
            "sources": steps,
            "merged": len(merged),
            "output": str(out_path),
        }
        log.info("%s: %d records -> %s", kind.value, len(merged), out_path)
    _write_json(provenance, cfg.prepared / "prepare_log.json")
    return 0


def _load_prepared(cfg: RunConfig, kind: PropertyKind) -> norms.NormDataset:
    path = cfg.prepared_file(kind)
    if not path.exists():
        raise DataError(f"{path}: prepared norms not found (run 'psynorms prepare' first)")
    return norms.load_norms(path, kind, cfg.target_scale)


def cmd_train(cfg: RunConfig, kind: PropertyKind, views=None) -> int:
    """Train and persist the multi-view model for one property."""
    views = views if views is not None else cfg.views_for(kind)
    dataset = _load_prepared(cfg, kind)
    resources = _load_feature_resources(cfg, views)
    model = regression.train_multiview(kind, dataset, views, resources, cfg.lam)
    model_path = cfg.model_file(kind)
    regression.save_model(model, model_path)
    train_log = {
        "property": kind.value,
        "lambda": cfg.lam,
        "dataset_size": len(dataset),
        "views": {
            sub.view.value: {"rows": sub.rows, "oov_excluded": len(dataset) - sub.rows}
            for sub in model.submodels
        },
        "model": str(model_path),
    }
    _write_json(train_log, cfg.models / f"{kind.value}.train_log.json")
    for sub in model.submodels:
        log.info(
            "%s/%s: %d training rows (%d out of vocabulary)",
            kind.value, sub.view.value, sub.rows, len(dataset) - sub.rows,
        )
    log.info("model written to %s", model_path)
    return 0


def cmd_eval(cfg: RunConfig, kind: PropertyKind, views=None) -> int:
    """Repeated k-fold cross-validation over every view combination."""
    pool = views if views is not None else cfg.views_for(kind)
    dataset = _load_prepared(cfg, kind)
    resources = _load_feature_resources(cfg, pool)
    combos = evaluation.all_view_combos(pool)
    plan = evaluation.make_folds(len(dataset), cfg.cv_k, cfg.cv_reps, cfg.seed)
    report = evaluation.cross_validate(kind, dataset, resources, combos, plan, cfg.lam)
    evaluation.write_report(report, cfg.out_dir / f"eval_{kind.value}.json")
    table = evaluation.render_report_table(report)
    _write_text(table, cfg.out_dir / f"eval_{kind.value}.txt")
    sys.stdout.write(table)
    return 0


def cmd_build_lexicon(cfg: RunConfig) -> int:
    """Annotate the filtered dictionary with all four inferred properties."""
    if cfg.dictionary_path is None:
        raise ConfigError("[lexicon] dictionary is required")
    freq_path = cfg.frequency_paths.get(cfg.lexicon_frequency)
    if freq_path is None:
        raise ConfigError(
            f"[features] {cfg.lexicon_frequency} is required to supply lexicon corpus counts"
        )
    models = {}
    needed_views: set[ViewKind] = set()
    for kind in PropertyKind:
        path = cfg.model_file(kind)
        if not path.exists():
            raise DataError(f"{path}: model not found (run 'psynorms train' first)")
        models[kind] = regression.load_model(path)
        needed_views.update(sub.view for sub in models[kind].submodels)
    entries = lexicon.load_dictionary(cfg.dictionary_path)
    loanwords = (
        features.load_word_list(cfg.loanwords_path)
        if cfg.loanwords_path is not None
        else frozenset()
    )
    freq = features.load_frequency_list(freq_path, cfg.lexicon_frequency)
    resources = _load_feature_resources(cfg, needed_views)
    built = lexicon.build_lexicon(
        entries, loanwords, freq, cfg.min_count, models, resources
    )
    out_path = cfg.out_dir / "lexicon.csv"
    lexicon.write_lexicon(built, out_path)
    counts = lexicon.pos_counts(built)
    summary = {
        "size": len(built),
        "dictionary_entries": len(entries),
        "pos_counts": counts,
        "output": str(out_path),
        "config": cfg.echo(),
    }
    _write_json(summary, cfg.out_dir / "lexicon_summary.json")
    log.info(
        "lexicon: %d words (%s)",
        len(built),
        ", ".join(f"{n} {pos}s" for pos, n in counts.items()),
    )
    return 0


def _lexicon_index(cfg: RunConfig, override: str | None):
    if override is not None:
        path = Path(override)
        if not path.exists():
            raise DataError(f"{path}: lexicon file not found")
        return lexicon.rating_index(lexicon.read_lexicon(path)), path
    path = cfg.lexicon_path or cfg.out_dir / "lexicon.csv"
    if not path.exists():
        return {}, None
    return lexicon.rating_index(lexicon.read_lexicon(path)), path


def cmd_readability(cfg: RunConfig, text: str | None, corpus: str | None,
                    lexicon_override: str | None) -> int:
    """Score a single text, or evaluate feature subsets on a labeled corpus."""
    easy = (
        features.load_word_list(cfg.easy_words_path)
        if cfg.easy_words_path is not None
        else frozenset()
    )
    index, lex_path = _lexicon_index(cfg, lexicon_override)
    if lex_path is None:
        log.warning("no lexicon found; property features fall back to the scale midpoint")
    if text is not None:
        text_path = Path(text)
        if not text_path.exists():
            raise DataError(f"{text_path}: file not found")
        feats = readability.extract_features(
            text_path.read_text(encoding="utf-8"), easy, index, cfg.mattr_window
        )
        document = {
            "file": str(text_path),
            "values": {name: feats.values[name] for name in readability.FEATURE_ORDER},
            "lexicon_tokens": feats.lexicon_tokens,
            "no_lexicon_coverage": feats.no_lexicon_coverage,
            "config": cfg.echo(),
        }
        _write_json(document, cfg.out_dir / "readability_features.json")
        sys.stdout.write(json.dumps(document, indent=2, sort_keys=True) + "\n")
        return 0
    manifest = Path(corpus) if corpus else cfg.manifest_path
    if manifest is None:
        raise ConfigError("readability needs --text, --corpus, or [readability] manifest")
    labeled = readability.load_labeled_corpus(manifest, easy, index, cfg.mattr_window)
    scores = readability.evaluate_features(
        labeled,
        folds=cfg.readability_folds,
        gamma=cfg.gamma,
        lam=cfg.readability_lambda,
        seed=cfg.seed,
    )
    document = {
        "classifier": "one-vs-rest kernel regularized least squares, Gaussian kernel",
        "config": {
            "manifest": str(manifest),
            "texts": len(labeled),
            "folds": cfg.readability_folds,
            "gamma": cfg.gamma,
            "lambda": cfg.readability_lambda,
            "seed": cfg.seed,
            "mattr_window": cfg.mattr_window,
        },
        "subsets": [
            {"name": s.name, "features": list(s.features), "f1": s.f1, "fold_f1": s.fold_f1}
            for s in scores
        ],
    }
    _write_json(document, cfg.out_dir / "readability_f1.json")
    table = readability.render_f1_table(scores)
    _write_text(table, cfg.out_dir / "readability_f1.txt")
    sys.stdout.write(table)
    return 0


def cmd_corr(cfg: RunConfig, lexicon_override: str | None) -> int:
    """Pairwise Pearson correlations among the four inferred properties."""
    index, lex_path = _lexicon_index(cfg, lexicon_override)
    if lex_path is None:
        raise DataError("no lexicon file found; build one or pass --lexicon")
    entries = lexicon.read_lexicon(lex_path)
    matrix = evaluation.property_correlations(entries)
    pairs = evaluation.correlation_pairs(matrix)
    document = {
        "lexicon": str(lex_path),
        "entries": len(entries),
        "order": [k.value for k in evaluation.PROPERTY_ORDER],
        "matrix": matrix,
        "pairs": pairs,
        "config": cfg.echo(),
    }
    _write_json(document, cfg.out_dir / "property_correlations.json")
    width = max(len(p["pair"]) for p in pairs) + 2
    lines = [
        p["pair"].ljust(width)
        + ("n/a" if p["pearson"] is None else f"{p['pearson']:+.2f}")
        for p in pairs
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def cmd_alpha(cfg: RunConfig, kind: PropertyKind, reference: str,
              lexicon_override: str | None) -> int:
    """Internal consistency between inferred ratings and a reference list."""
    index, lex_path = _lexicon_index(cfg, lexicon_override)
    if lex_path is None:
        raise DataError("no lexicon file found; build one or pass --lexicon")
    reference_ds = norms.load_norms(reference, kind, cfg.target_scale)
    shared = sorted(r.word for r in reference_ds.records if r.word in index)
    if len(shared) < 2:
        raise DataError(
            f"only {len(shared)} reference words appear in the lexicon; need at least 2"
        )
    reference_ratings = {r.word: r.rating for r in reference_ds.records}
    matrix = [
        [reference_ratings[w] for w in shared],
        [index[w][kind] for w in shared],
    ]
    alpha = evaluation.cronbach_alpha(matrix)
    document = {
        "property": kind.value,
        "reference": str(reference),
        "lexicon": str(lex_path),
        "common_words": len(shared),
        "alpha": alpha,
        "config": cfg.echo(),
    }
    _write_json(document, cfg.out_dir / f"alpha_{kind.value}.json")
    sys.stdout.write(json.dumps(document, indent=2, sort_keys=True) + "\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psynorms",
        description="Infer psycholinguistic word properties and readability features.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("-c", "--config", required=config_required, help="run configuration file")
        p.add_argument("--out", help="output directory (overrides [output] dir)")
        p.add_argument("--seed", type=int, help="seed for all shuffles")
        p.add_argument("--lambda", dest="lam", type=float, help="ridge regularization strength")

    p = sub.add_parser("prepare", help="normalize, adapt and merge raw norm files")
    common(p)

    p = sub.add_parser("train", help="train the multi-view model for one property")
    common(p)
    p.add_argument("--property", required=True, help="property slug (e.g. aoa)")
    p.add_argument("--views", help="comma-separated views to train on")

    p = sub.add_parser("eval", help="cross-validate all view combinations")
    common(p)
    p.add_argument("--property", required=True)
    p.add_argument("--views", help="comma-separated view pool to combine")
    p.add_argument("--k", type=int, help="folds per repetition")
    p.add_argument("--reps", type=int, help="repetitions")

    p = sub.add_parser("build-lexicon", help="build the annotated lexicon CSV")
    common(p)
    p.add_argument("--min-count", dest="min_count", type=int, help="minimum corpus count")

    p = sub.add_parser("readability", help="text features or corpus F1 evaluation")
    common(p, config_required=False)
    p.add_argument("--text", help="score a single UTF-8 text file")
    p.add_argument("--corpus", help="file,grade manifest of a labeled corpus")
    p.add_argument("--lexicon", help="lexicon CSV for the property features")

    p = sub.add_parser("corr", help="correlations among inferred properties")
    common(p, config_required=False)
    p.add_argument("--lexicon", help="lexicon CSV to analyze")

    p = sub.add_parser("alpha", help="consistency against a reference norms file")
    common(p, config_required=False)
    p.add_argument("--property", required=True)
    p.add_argument("--reference", required=True, help="reference word,rating CSV")
    p.add_argument("--lexicon", help="lexicon CSV with inferred ratings")

    return parser


def _env_override(name: str) -> str | None:
    return os.environ.get(ENV_PREFIX + name)


def _property(slug: str) -> PropertyKind:
    try:
        return PropertyKind.from_slug(slug)
    except DataError as exc:
        # unknown property names are usage errors, not data errors
        raise ConfigError(str(exc)) from None


def _resolve_config(args) -> RunConfig:
    cfg = load_run_config(args.config) if args.config else RunConfig()
    try:
        env_seed = _env_override("SEED")
        if env_seed is not None:
            cfg.seed = int(env_seed)
        env_lam = _env_override("LAMBDA")
        if env_lam is not None:
            cfg.lam = float(env_lam)
        env_min = _env_override("MIN_COUNT")
        if env_min is not None:
            cfg.min_count = int(env_min)
    except ValueError as exc:
        raise ConfigError(f"malformed {ENV_PREFIX}* environment override: {exc}") from None
    env_out = _env_override("OUT")
    if env_out is not None:
        cfg.out_dir = Path(env_out)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.lam is not None:
        cfg.lam = args.lam
    if getattr(args, "min_count", None) is not None:
        cfg.min_count = args.min_count
    if getattr(args, "k", None) is not None:
        cfg.cv_k = args.k
    if getattr(args, "reps", None) is not None:
        cfg.cv_reps = args.reps
    if args.out is not None:
        cfg.out_dir = Path(args.out)
    return cfg


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        if args.command == "prepare":
            return cmd_prepare(cfg)
        if args.command == "train":
            views = parse_views(args.views, "--views") if args.views else None
            return cmd_train(cfg, _property(args.property), views)
        if args.command == "eval":
            views = parse_views(args.views, "--views") if args.views else None
            return cmd_eval(cfg, _property(args.property), views)
        if args.command == "build-lexicon":
            return cmd_build_lexicon(cfg)
        if args.command == "readability":
            return cmd_readability(cfg, args.text, args.corpus, args.lexicon)
        if args.command == "corr":
            return cmd_corr(cfg, args.lexicon)
        if args.command == "alpha":
            return cmd_alpha(
                cfg, _property(args.property), args.reference, args.lexicon
            )
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        log.error("%s", exc)
        return 2
    except NumericalError as exc:
        log.error("%s", exc)
        return 4
    except (DataError, PsynormsError) as exc:
        log.error("%s", exc)
        return 3
    except OSError as exc:
        log.error("%s", exc)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
