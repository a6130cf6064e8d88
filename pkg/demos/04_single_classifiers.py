"""Single 3-class classifier bake-off on the synthetic released-scale data.

Trains a handful of feature/classifier combinations on the stratified
60/20/20 split and prints a leaderboard (accuracy plus one-vs-rest metrics
for the misinformation class), mirroring the single-classifier experiment
round.
"""

import tempfile
from pathlib import Path

from misinfo.corpus import save_labeled, stratified_split
from misinfo.experiments import (
    ExperimentConfig,
    experiment_report,
    format_leaderboard,
    run_single,
)
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
print(f"dataset: {len(data)} tweets -> splits of {[len(s) for s in splits]}")

CANDIDATES = [
    ("NB+bow", ClassifierSpec("NB", "bow", seed=0)),
    ("LR+tfidf", ClassifierSpec("LR", "tfidf", seed=0)),
    ("SVM+tfidf", ClassifierSpec("SVM", "tfidf", seed=0)),
    ("DT+tfidf", ClassifierSpec("DT", "tfidf", seed=0)),
    ("RF+tfidf", ClassifierSpec("RF", "tfidf", {"n_estimators": 100}, seed=0)),
    ("DNN+hash-pooled", ClassifierSpec("DNN", "contextual-pooled", {"epochs": 20}, seed=0)),
]

rows = []
for name, spec in CANDIDATES:
    config = ExperimentConfig(
        mode="single",
        specs=(spec,),
        split_paths=split_paths,
        seed=0,
        name=name,
        encoder_name="hash-64",
    )
    result = run_single(config)
    rows.append((name, result.report))
    print(f"trained {name}: accuracy {result.report.accuracy:.2f}")

print("\nleaderboard (target = misinformation):")
print(format_leaderboard(experiment_report(rows)))
