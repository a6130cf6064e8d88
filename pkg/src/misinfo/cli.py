"""Command-line entry point for the full workflow.

Verb tree: corpus {filter, sample, ngrams}; dataset {split, stats, kappa,
export}; annotate {serve, export}; train; eval {single, two-stage, kfold};
compare; report. Exit codes: 0 success, 1 validation error, 2 I/O error.

Every command with randomness takes --seed and logs it in a header line;
given identical flags and inputs, primary outputs are byte-identical.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from misinfo import corpus as corpus_mod
from misinfo import experiments, models
from misinfo.annotation import (
    cohen_kappa,
    contingency_table,
    label_distribution,
    load_gold_csv,
    write_gold_csv,
)
from misinfo.errors import ConflictError, DataFormatError, ValidationError
from misinfo.metrics import (
    BINARY_CLASSES,
    collapse_binary,
    format_confusion,
    report_as_dict,
)
from misinfo.service import AnnotationStore, AnnotationService, create_app


@click.group()
def cli():
    """Tweet misinformation detection workflow."""


# ---------------------------------------------------------------- corpus

@cli.group("corpus")
def corpus_group():
    """Corpus filtering, sampling, and n-gram statistics."""


def _parse_phrases(phrases: str | None, malay_exclusion: bool) -> tuple[str, ...]:
    if malay_exclusion:
        return corpus_mod.MALAY_EXCLUSION_PHRASES
    if not phrases:
        raise ValidationError("provide --phrases or --malay-exclusion")
    parts = tuple(p.strip() for p in phrases.split(",") if p.strip())
    if not parts:
        raise ValidationError("no usable phrases in --phrases")
    return parts


@corpus_group.command("filter")
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--phrases", help="comma-separated keyword phrases")
@click.option("--malay-exclusion", is_flag=True, help="use the built-in Malay-context phrases")
@click.option("--mode", type=click.Choice(["include", "exclude"]), default="include")
@click.option("--out", "out_path", required=True, type=click.Path())
def corpus_filter(corpus_path, phrases, malay_exclusion, mode, out_path):
    """Keep tweets matching (or not matching) keyword phrases."""
    query = corpus_mod.KeywordQuery(_parse_phrases(phrases, malay_exclusion), mode)
    tweets = corpus_mod.load_corpus(corpus_path)
    kept = corpus_mod.filter_keywords(tweets, query)
    corpus_mod.save_corpus(kept, out_path)
    click.echo(f"kept {len(kept)} of {len(tweets)} tweets -> {out_path}")


@corpus_group.command("sample")
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--count", required=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
def corpus_sample(corpus_path, count, seed, out_path):
    """Uniform random sample without replacement."""
    click.echo(f"# seed: {seed}")
    tweets = corpus_mod.load_corpus(corpus_path)
    sampled = corpus_mod.sample(tweets, count, seed)
    corpus_mod.save_corpus(sampled, out_path)
    click.echo(f"sampled {len(sampled)} of {len(tweets)} tweets -> {out_path}")


@corpus_group.command("ngrams")
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("-n", "n", default=1, show_default=True, type=int)
@click.option("-k", "top_k", default=20, show_default=True, type=int)
@click.option("--out", "out_path", type=click.Path())
def corpus_ngrams(corpus_path, n, top_k, out_path):
    """Top token n-grams, for keyword-query iteration."""
    tweets = corpus_mod.load_corpus(corpus_path)
    ranked = corpus_mod.top_ngrams(tweets, n, top_k)
    lines = [f"{count}\t{gram}" for gram, count in ranked]
    click.echo("\n".join(lines) if lines else "(no n-grams)")
    if out_path:
        Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------- dataset

@cli.group("dataset")
def dataset_group():
    """Labeled dataset statistics, splitting, agreement, and gold export."""


@dataset_group.command("split")
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--ratios", default="0.6,0.2,0.2", show_default=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_dir", required=True, type=click.Path())
def dataset_split(data_path, ratios, seed, out_dir):
    """Stratified train/val/test split of a labeled CSV."""
    try:
        parts = tuple(float(r) for r in ratios.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad --ratios value: {exc}") from exc
    click.echo(f"# seed: {seed}")
    data = corpus_mod.load_labeled(data_path)
    splits = corpus_mod.stratified_split(data, parts, seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, split in zip(corpus_mod.SPLIT_NAMES, splits):
        corpus_mod.save_labeled(split, out / f"{name}.csv")
        counts = {}
        for item in split:
            counts[item.label] = counts.get(item.label, 0) + 1
        ordered = ", ".join(f"{label}={counts[label]}" for label in sorted(counts))
        click.echo(f"{name}: {len(split)} rows ({ordered}) -> {out / (name + '.csv')}")


@dataset_group.command("stats")
@click.option("--gold", "gold_path", required=True, type=click.Path())
@click.option("--out", "out_path", type=click.Path(), help="JSON mirror of the table")
def dataset_stats(gold_path, out_path):
    """Label distribution table of a gold-label CSV."""
    gold = load_gold_csv(gold_path)
    rows = label_distribution(gold)
    width = max(len(label) for label, _, _ in rows)
    click.echo(f"{'label':<{width}}  {'count':>7}  {'pct':>7}")
    for label, count, pct in rows:
        click.echo(f"{label:<{width}}  {count:>7}  {pct:>7.2f}")
    click.echo(f"{'total':<{width}}  {len(gold):>7}")
    if out_path:
        payload = [
            {"label": label, "count": count, "percentage": pct} for label, count, pct in rows
        ]
        Path(out_path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


@dataset_group.command("kappa")
@click.option("--pairs", "pairs_path", required=True, type=click.Path(),
              help="CSV whose first two columns are aligned label sequences")
@click.option("--out", "out_path", type=click.Path())
def dataset_kappa(pairs_path, out_path):
    """Cohen's kappa between two aligned annotator label columns."""
    path = Path(pairs_path)
    if not path.exists():
        raise DataFormatError(f"pairs file not found: {path}")
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 2:
            raise DataFormatError(f"{path}: expected a CSV with two label columns")
        labels_a, labels_b = [], []
        for row in reader:
            if len(row) < 2:
                raise DataFormatError(f"{path}: short row {row!r}")
            labels_a.append(row[0])
            labels_b.append(row[1])
    kappa = cohen_kappa(labels_a, labels_b)
    labels, table = contingency_table(labels_a, labels_b)
    click.echo(f"kappa: {kappa:.4f} over {len(labels_a)} items")
    click.echo(format_confusion_like(labels, table))
    if out_path:
        payload = {"kappa": kappa, "n_items": len(labels_a), "labels": labels, "table": table}
        Path(out_path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def format_confusion_like(labels, table) -> str:
    width = max(max(len(str(v)) for v in labels) + 2, 8)
    lines = [" " * width + "".join(f"{v:>{width}}" for v in labels)]
    for label, row in zip(labels, table):
        lines.append(f"{label:<{width}}" + "".join(f"{v:>{width}}" for v in row))
    return "\n".join(lines)


def _load_service(corpus_path, store_path, annotators) -> AnnotationService:
    roster = [a.strip() for a in annotators.split(",") if a.strip()]
    return AnnotationService(
        corpus_mod.load_corpus(corpus_path), roster, AnnotationStore(store_path)
    )


@dataset_group.command("export")
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--annotators", required=True, help="comma-separated annotator ids")
@click.option("--out", "out_path", required=True, type=click.Path())
def dataset_export(corpus_path, store_path, annotators, out_path):
    """Adjudicate a store's annotations into a gold-label CSV."""
    service = _load_service(corpus_path, store_path, annotators)
    gold = service.gold_labels()
    write_gold_csv(gold, out_path)
    click.echo(f"wrote {len(gold)} gold labels -> {out_path}")


# ---------------------------------------------------------------- annotate

@cli.group("annotate")
def annotate_group():
    """Run the annotation service or export its records."""


@annotate_group.command("serve")
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--annotators", required=True, help="comma-separated annotator ids")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True, type=int)
def annotate_serve(corpus_path, store_path, annotators, host, port):
    """Serve annotation tasks over HTTP until interrupted."""
    import uvicorn

    service = _load_service(corpus_path, store_path, annotators)
    app = create_app(service)
    click.echo(f"serving {len(service.corpus)} tweets for {service.annotators} on {host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@annotate_group.command("export")
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--store", "store_path", required=True, type=click.Path())
@click.option("--annotators", required=True, help="comma-separated annotator ids")
@click.option("--phase", type=click.Choice(["relevance", "truth"]), required=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def annotate_export(corpus_path, store_path, annotators, phase, out_path):
    """Write a phase's stored annotations as CSV (guideline column layout)."""
    service = _load_service(corpus_path, store_path, annotators)
    content = service.export_csv(phase)
    Path(out_path).write_text(content, encoding="utf-8", newline="")
    click.echo(f"exported {len(service.export_rows(phase))} {phase} records -> {out_path}")


# ---------------------------------------------------------------- training / eval

def _config_with_seed(config_path, seed):
    config = experiments.load_config(config_path)
    if seed is not None:
        specs = tuple(
            models.ClassifierSpec(s.family, s.feature, s.hyperparams, seed) for s in config.specs
        )
        config = experiments.ExperimentConfig(
            mode=config.mode,
            specs=specs,
            split_paths=config.split_paths,
            seed=seed,
            name=config.name,
            balance_config=config.balance_config,
            min_df=config.min_df,
            encoder_name=config.encoder_name,
            encoder_max_tokens=config.encoder_max_tokens,
            encoder_mode=config.encoder_mode,
            embedding_table_path=config.embedding_table_path,
        )
    return config


@cli.command("train")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--seed", type=int, help="override the config seed")
@click.option("--out", "out_dir", required=True, type=click.Path())
def train_cmd(config_path, seed, out_dir):
    """Train the configured classifier on the train split and save it."""
    config = _config_with_seed(config_path, seed)
    if config.mode != "single":
        raise ValidationError("train expects a single-model config")
    click.echo(f"# seed: {config.seed}")
    model, _featurizer = experiments.fit_single(config)
    models.save_model(model, out_dir)
    click.echo(
        f"trained {model.spec.family}+{model.spec.feature} on "
        f"{model.training_meta['n_samples']} samples -> {out_dir}"
    )


def _write_eval_outputs(result, config, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "name": result.name,
        "mode": config.mode,
        "seed": config.seed,
        "report": report_as_dict(result.report),
    }
    (out / "report.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                                     encoding="utf-8")
    with (out / "report.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "accuracy", "precision", "recall", "f1"])
        target = result.report.target
        writer.writerow([
            result.name,
            f"{result.report.accuracy:.2f}",
            f"{target.precision:.2f}",
            f"{target.recall:.2f}",
            f"{target.f1:.2f}",
        ])
    grids = [format_confusion(result.report.confusion, result.report.classes)]
    if set(result.report.classes) == {"irrelevant", "true", "misinformation"}:
        collapsed = collapse_binary(result.report.confusion, result.report.classes)
        grids.append(format_confusion(collapsed, BINARY_CLASSES))
    (out / "confusion.txt").write_text("\n\n".join(grids) + "\n", encoding="utf-8")

    target = result.report.target
    click.echo(
        f"{result.name}: acc={result.report.accuracy:.2f} "
        f"P={target.precision:.2f} R={target.recall:.2f} F1={target.f1:.2f}"
    )
    click.echo(grids[0])


@cli.group("eval")
def eval_group():
    """Run experiments and write metric reports."""


@eval_group.command("single")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--seed", type=int, help="override the config seed")
@click.option("--out", "out_dir", required=True, type=click.Path())
def eval_single(config_path, seed, out_dir):
    """3-class single-classifier experiment."""
    config = _config_with_seed(config_path, seed)
    if config.mode != "single":
        raise ValidationError("eval single expects a single-model config")
    click.echo(f"# seed: {config.seed}")
    result = experiments.run_single(config)
    _write_eval_outputs(result, config, out_dir)


@eval_group.command("two-stage")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--seed", type=int, help="override the config seed")
@click.option("--out", "out_dir", required=True, type=click.Path())
def eval_two_stage(config_path, seed, out_dir):
    """Relevance-gate + truth-classifier cascade experiment."""
    config = _config_with_seed(config_path, seed)
    if config.mode != "two-stage":
        raise ValidationError("eval two-stage expects a two-stage config")
    click.echo(f"# seed: {config.seed}")
    result = experiments.run_two_stage(config)
    _write_eval_outputs(result, config, out_dir)


@eval_group.command("kfold")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--data", "data_path", required=True, type=click.Path(),
              help="labeled CSV to cross-validate on")
@click.option("-k", "k", default=5, show_default=True, type=int)
@click.option("--seed", type=int, help="override the config seed")
@click.option("--out", "out_path", required=True, type=click.Path())
def eval_kfold(config_path, data_path, k, seed, out_path):
    """Stratified k-fold target-F1 scores (for `compare`)."""
    config = _config_with_seed(config_path, seed)
    if config.mode != "single":
        raise ValidationError("eval kfold expects a single-model config")
    click.echo(f"# seed: {config.seed}")
    data = corpus_mod.load_labeled(data_path)
    spec = config.specs[0]
    scores = experiments.kfold_scores(
        spec,
        data,
        k,
        config.seed,
        balance_config=config.balance_config,
        featurizer_factory=lambda: experiments.build_featurizer(config, spec.feature),
    )
    payload = {
        "name": config.name or f"{spec.family}+{spec.feature}",
        "k": k,
        "seed": config.seed,
        "scores": scores,
    }
    Path(out_path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    click.echo(f"fold F1 scores: {', '.join(f'{s:.2f}' for s in scores)} -> {out_path}")


# ---------------------------------------------------------------- compare / report

def _load_scores(path):
    path = Path(path)
    if not path.exists():
        raise DataFormatError(f"scores file not found: {path}")
    payload = json.loads(path.read_text(encoding="utf-8"))
    if isinstance(payload, dict):
        return payload.get("name", path.stem), payload["scores"]
    return path.stem, payload


@cli.command("compare")
@click.option("--scores", "score_paths", nargs=2, required=True, type=click.Path(),
              help="two JSON score files (lists or {'scores': [...]})")
@click.option("--alpha", default=0.05, show_default=True, type=float)
@click.option("--unpaired", is_flag=True, help="independent-samples test instead of paired")
def compare_cmd(score_paths, alpha, unpaired):
    """Two-sided t test between two score samples."""
    (name_a, sample_a), (name_b, sample_b) = (_load_scores(p) for p in score_paths)
    result = experiments.paired_ttest(sample_a, sample_b, alpha=alpha, paired=not unpaired)
    import numpy as np

    click.echo(f"{name_a}: mean={np.mean(sample_a):.2f}  {name_b}: mean={np.mean(sample_b):.2f}")
    verdict = "significant" if result.significant else "not significant"
    click.echo(f"t={result.t:.4f} p={result.p:.4f} -> {verdict} at alpha={alpha}")


@cli.command("report")
@click.argument("report_paths", nargs=-1, required=True, type=click.Path())
@click.option("--out", "out_path", type=click.Path(), help="write the leaderboard CSV here")
def report_cmd(report_paths, out_path):
    """Leaderboard across eval report.json files, best F1 first."""
    entries = []
    for raw_path in report_paths:
        path = Path(raw_path)
        if not path.exists():
            raise DataFormatError(f"report file not found: {path}")
        payload = json.loads(path.read_text(encoding="utf-8"))
        report = payload["report"]
        target = report["per_class"][report["target_class"]]
        entries.append(
            {
                "name": payload.get("name", path.stem),
                "accuracy": report["accuracy"],
                "precision": target["precision"],
                "recall": target["recall"],
                "f1": target["f1"],
            }
        )
    from misinfo.metrics import two_decimals

    rows = [
        {key: (two_decimals(value) if isinstance(value, float) else value)
         for key, value in entry.items()}
        for entry in entries
    ]
    rows.sort(key=lambda row: (-row["f1"], row["name"]))
    click.echo(experiments.format_leaderboard(rows))
    if out_path:
        with Path(out_path).open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["name", "accuracy", "precision", "recall", "f1"])
            for row in rows:
                writer.writerow([row["name"], f"{row['accuracy']:.2f}", f"{row['precision']:.2f}",
                                 f"{row['recall']:.2f}", f"{row['f1']:.2f}"])


# ---------------------------------------------------------------- dispatch

def dispatch(argv: list[str]) -> int:
    """Run one CLI invocation; returns the process exit code."""
    try:
        cli.main(args=list(argv), standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:  # --help and friends
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(exc.format_message(), err=True)
        if exc.ctx is not None:
            click.echo(exc.ctx.get_usage(), err=True)
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except (ValidationError, ConflictError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except DataFormatError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
