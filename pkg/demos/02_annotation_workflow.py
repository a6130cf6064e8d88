"""Annotation workflow walkthrough: tasks, agreement, adjudication.

Runs the annotation service fully in-process: two annotators work through a
ten-tweet pool (relevance phase, then the gated truth phase), after which we
look at progress, Cohen's kappa, the CSV export, and the adjudicated gold
labels with their distribution.
"""

import tempfile
from pathlib import Path

from misinfo.annotation import RelevanceAnnotation, TruthAnnotation, label_distribution
from misinfo.corpus import Tweet
from misinfo.service import AnnotationService, AnnotationStore

TWEETS = [
    ("t0", "kes baharu covid dilaporkan kkmputrajaya"),          # not Indonesian
    ("t1", "jualan masker murah promo hari ini"),                # advertisement
    ("t2", "saya kemarin positif covid dan sudah sembuh"),       # personal story
    ("t3", "katanya 5g itu nyebarin corona wkwk"),               # humor
    ("t4", "semangat pagi semua, jaga kesehatan selalu"),        # no claim
    ("t5", "rsud menerima 7 pasien baru hari ini"),              # true claim
    ("t6", "vaksin mengandung mikrochip untuk pelacakan"),       # misinformation
    ("t7", "pasien sembuh bertambah 1200 kemarin"),              # annotators disagree
    ("t8", "obat herbal x katanya menyembuhkan covid"),          # not sure
    ("t9", "varian baru tidak terdeteksi tes pcr jenis lama"),   # needs an expert
]

# answers per tweet: (filter, personal, humor, factual_claim) or short-circuit
RELEVANCE_SCRIPT = {
    "t0": ("non-indonesia",),
    "t1": ("out-of-topic",),
    "t2": ("relevant", True, False, "true"),
    "t3": ("relevant", False, True, "true"),
    "t4": ("relevant", False, False, "false"),
    "t5": ("relevant", False, False, "true"),
    "t6": ("relevant", False, False, "true"),
    "t7": ("relevant", False, False, "true"),
    "t8": ("relevant", False, False, "true"),
    "t9": ("relevant", False, False, "true"),
}
TRUTH_SCRIPT = {
    "t5": {"ann-a": "true", "ann-b": "true"},
    "t6": {"ann-a": "misinformation", "ann-b": "misinformation"},
    "t7": {"ann-a": "true", "ann-b": "misinformation"},
    "t8": {"ann-a": "not-sure", "ann-b": "not-sure"},
    "t9": {"ann-a": "need-expert", "ann-b": "need-expert"},
}

workdir = Path(tempfile.mkdtemp())
corpus = [Tweet(id=tid, text=text) for tid, text in TWEETS]
service = AnnotationService(corpus, ["ann-a", "ann-b"], AnnotationStore(workdir / "log.jsonl"))

# --- relevance phase: each annotator drains their queue
for annotator in service.annotators:
    while (task := service.next_task(annotator, "relevance")) is not None:
        answers = RELEVANCE_SCRIPT[task.tweet.id]
        if len(answers) == 1:
            record = RelevanceAnnotation(task.tweet.id, annotator, answers[0])
        else:
            record = RelevanceAnnotation(task.tweet.id, annotator, *answers)
        service.submit(record)

progress = service.progress("relevance")
print(f"relevance progress: {progress['fully_annotated']}/{progress['total']} fully annotated")

agreement = service.agreement("relevance")
print(f"relevance kappa: {agreement['kappa']:.4f} over {agreement['n_items']} tweets")

# --- truth phase: only tweets adjudicated relevant are served
truth_pool = [t.id for t in service.pool("truth")]
print(f"\ntruth-phase pool (adjudicated relevant): {truth_pool}")
for annotator in service.annotators:
    while (task := service.next_task(annotator, "truth")) is not None:
        verdict = TRUTH_SCRIPT[task.tweet.id][annotator]
        service.submit(TruthAnnotation(task.tweet.id, annotator, verdict))

agreement = service.agreement("truth")
print(f"truth kappa: {agreement['kappa']:.4f} over {agreement['n_items']} tweets")

# --- exports and adjudication
print("\nrelevance export (first 3 lines):")
for line in service.export_csv("relevance").splitlines()[:3]:
    print(f"  {line}")

gold = service.gold_labels()
print("\nadjudicated gold labels:")
for item in gold:
    print(f"  {item.tweet_id}: {item.label}")

print("\nlabel distribution:")
for label, count, pct in label_distribution(gold):
    print(f"  {label:<15} {count:2d}  {pct:6.2f}%")
