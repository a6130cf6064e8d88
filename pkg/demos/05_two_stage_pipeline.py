"""Two-stage cascade vs single classifier, plus the significance test.

Stage 1 gates tweets on relevance (relevant = true or misinformation);
stage 2 separates true from misinformation on the survivors. The demo
compares the cascade against the single 3-class baseline, prints both
confusion matrices (3-class and collapsed binary), and closes with the
k-fold + paired t-test recipe for comparing two configurations.
"""

import tempfile
from pathlib import Path

from misinfo.corpus import load_labeled, save_labeled, stratified_split
from misinfo.experiments import (
    ExperimentConfig,
    experiment_report,
    format_leaderboard,
    kfold_scores,
    paired_ttest,
    run_single,
    run_two_stage,
)
from misinfo.metrics import BINARY_CLASSES, collapse_binary, format_confusion
from misinfo.models import ClassifierSpec
from misinfo.synthetic import generate_final_dataset

workdir = Path(tempfile.mkdtemp())
data = generate_final_dataset(seed=7)
splits = stratified_split(data, (0.6, 0.2, 0.2), seed=42)
split_paths = {}
for name, split in zip(("train", "val", "test"), splits):
    path = workdir / f"{name}.csv"
    save_labeled(split, path)
    split_paths[name] = str(path)

single = run_single(ExperimentConfig(
    mode="single",
    specs=(ClassifierSpec("LR", "tfidf", seed=0),),
    split_paths=split_paths,
    seed=0,
    name="single LR+tfidf",
))
cascade = run_two_stage(ExperimentConfig(
    mode="two-stage",
    specs=(ClassifierSpec("LR", "tfidf", seed=0), ClassifierSpec("LR", "tfidf", seed=0)),
    split_paths=split_paths,
    seed=0,
    name="two-stage LR>LR+tfidf",
))

print(format_leaderboard(experiment_report([
    ("single LR+tfidf", single.report),
    ("two-stage LR>LR+tfidf", cascade.report),
])))

gated = sum(1 for verdict in cascade.stage1_predicted if verdict == "irrelevant")
print(f"\nstage 1 gated {gated} of {len(cascade.stage1_predicted)} test tweets as irrelevant")
print("cascade guarantee: a final irrelevant label occurs exactly when stage 1 said so")

print("\n3-class confusion (rows gold, columns predicted):")
print(format_confusion(cascade.report.confusion, cascade.report.classes))

print("\ncollapsed binary view:")
binary = collapse_binary(cascade.report.confusion, cascade.report.classes)
print(format_confusion(binary, BINARY_CLASSES))

# --- does TF-IDF beat binary BoW for LR here? k-fold + paired t test
train = load_labeled(split_paths["train"])
folds = 5
bow_scores = kfold_scores(ClassifierSpec("LR", "bow", seed=0), train, folds, seed=1)
tfidf_scores = kfold_scores(ClassifierSpec("LR", "tfidf", seed=0), train, folds, seed=1)
print(f"\n{folds}-fold misinformation F1, LR+bow:   "
      + ", ".join(f"{s:.2f}" for s in bow_scores))
print(f"{folds}-fold misinformation F1, LR+tfidf: "
      + ", ".join(f"{s:.2f}" for s in tfidf_scores))

result = paired_ttest(bow_scores, tfidf_scores)
verdict = "significant" if result.significant else "not significant"
print(f"paired t test: t={result.t:.4f}, p={result.p:.4f} -> {verdict} at alpha=0.05")
