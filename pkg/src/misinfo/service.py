"""Annotation task server: assignment queue, durable record store, exports.

State lives in an append-only line-delimited JSON log; an in-memory index is
rebuilt by replaying the log at startup, so an interrupted run loses nothing
that was acknowledged. Writes are serialized through one lock and fsynced
before the acknowledgment; reads see consistent snapshots.

Task ordering is deterministic (corpus order) so that every annotator works
through the same pool. The truth-phase pool contains only tweets whose
relevance annotations are complete and adjudicated relevant. Records are
immutable once written: revising a past answer is rejected as a duplicate.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from misinfo.annotation import (
    GoldLabel,
    RelevanceAnnotation,
    TruthAnnotation,
    adjudicate,
    cohen_kappa,
    combine_verdicts,
    contingency_table,
    derive_relevance,
    relevance_csv,
    truth_csv,
)
from misinfo.corpus import Tweet
from misinfo.errors import ConflictError, ValidationError

PHASES = ("relevance", "truth")


@dataclass(frozen=True)
class TaskAssignment:
    tweet: Tweet
    phase: str
    assigned_to: str
    assigned_at: str


def _record_to_annotation(record: dict) -> RelevanceAnnotation | TruthAnnotation:
    if record["kind"] == "relevance":
        return RelevanceAnnotation(
            tweet_id=record["tweet_id"],
            annotator_id=record["annotator_id"],
            filter=record["filter"],
            personal=record.get("personal"),
            humor=record.get("humor"),
            factual_claim=record.get("factual_claim"),
        )
    return TruthAnnotation(
        tweet_id=record["tweet_id"],
        annotator_id=record["annotator_id"],
        truth=record["truth"],
    )


def _annotation_to_record(ann: RelevanceAnnotation | TruthAnnotation) -> dict:
    if isinstance(ann, RelevanceAnnotation):
        return {
            "kind": "relevance",
            "tweet_id": ann.tweet_id,
            "annotator_id": ann.annotator_id,
            "filter": ann.filter,
            "personal": ann.personal,
            "humor": ann.humor,
            "factual_claim": ann.factual_claim,
        }
    return {
        "kind": "truth",
        "tweet_id": ann.tweet_id,
        "annotator_id": ann.annotator_id,
        "truth": ann.truth,
    }


class AnnotationStore:
    """Append-only record log with a replayable in-memory index."""

    def __init__(self, log_path: str | Path):
        self.log_path = Path(log_path)
        self._lock = threading.RLock()
        # (phase, tweet_id, annotator_id) -> annotation
        self.annotations: dict[tuple[str, str, str], RelevanceAnnotation | TruthAnnotation] = {}
        # (phase, annotator_id) -> tweet ids with an assignment on record
        self.assignments: dict[tuple[str, str], dict[str, str]] = {}
        # per-phase insertion order of annotation records, for exports
        self.annotation_order: dict[str, list[tuple[str, str]]] = {p: [] for p in PHASES}
        if self.log_path.exists():
            self._replay()

    def _replay(self) -> None:
        with self.log_path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._apply(json.loads(line))

    def _apply(self, record: dict) -> None:
        if record["kind"] == "assignment":
            key = (record["phase"], record["annotator_id"])
            self.assignments.setdefault(key, {})[record["tweet_id"]] = record["assigned_at"]
        else:
            ann = _record_to_annotation(record)
            phase = record["kind"]
            self.annotations[(phase, ann.tweet_id, ann.annotator_id)] = ann
            self.annotation_order[phase].append((ann.tweet_id, ann.annotator_id))

    def _append(self, record: dict) -> None:
        # caller holds the lock; ack happens only after the fsync
        with self.log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self._apply(record)

    def record_assignment(self, phase: str, annotator_id: str, tweet_id: str, at: str) -> None:
        with self._lock:
            self._append(
                {
                    "kind": "assignment",
                    "phase": phase,
                    "annotator_id": annotator_id,
                    "tweet_id": tweet_id,
                    "assigned_at": at,
                }
            )

    def record_annotation(self, ann: RelevanceAnnotation | TruthAnnotation) -> None:
        with self._lock:
            self._append(_annotation_to_record(ann))

    def get(self, phase: str, tweet_id: str, annotator_id: str):
        return self.annotations.get((phase, tweet_id, annotator_id))

    def assigned_at(self, phase: str, annotator_id: str, tweet_id: str) -> str | None:
        return self.assignments.get((phase, annotator_id), {}).get(tweet_id)


class AnnotationService:
    """Serves tasks from a fixed corpus to a fixed roster of annotators."""

    def __init__(self, corpus: list[Tweet], annotators: list[str], store: AnnotationStore):
        if len(annotators) < 2:
            raise ValidationError("the annotation workflow needs at least 2 annotators")
        if len(set(annotators)) != len(annotators):
            raise ValidationError("duplicate annotator ids in the roster")
        self.corpus = list(corpus)
        self.by_id = {t.id: t for t in self.corpus}
        self.annotators = tuple(annotators)
        self.store = store
        self._lock = threading.RLock()

    def _check(self, annotator_id: str | None, phase: str) -> None:
        if phase not in PHASES:
            raise ValidationError(f"unknown phase {phase!r}")
        if annotator_id is not None and annotator_id not in self.annotators:
            raise ValidationError(f"unknown annotator {annotator_id!r}")

    def _relevance_complete(self, tweet_id: str) -> bool:
        return all(
            self.store.get("relevance", tweet_id, ann) is not None
            for ann in self.annotators
        )

    def _relevance_verdict(self, tweet_id: str) -> str | None:
        if not self._relevance_complete(tweet_id):
            return None
        records = [self.store.get("relevance", tweet_id, ann) for ann in self.annotators]
        return adjudicate(records, "relevance")

    def pool(self, phase: str) -> list[Tweet]:
        """Tweets eligible for annotation in the phase, in corpus order."""
        if phase == "relevance":
            return self.corpus
        return [t for t in self.corpus if self._relevance_verdict(t.id) == "relevant"]

    def next_task(self, annotator_id: str, phase: str) -> TaskAssignment | None:
        self._check(annotator_id, phase)
        with self._lock:
            for tweet in self.pool(phase):
                if self.store.get(phase, tweet.id, annotator_id) is not None:
                    continue
                assigned_at = self.store.assigned_at(phase, annotator_id, tweet.id)
                if assigned_at is None:
                    assigned_at = datetime.now(timezone.utc).isoformat()
                    self.store.record_assignment(phase, annotator_id, tweet.id, assigned_at)
                return TaskAssignment(
                    tweet=tweet, phase=phase, assigned_to=annotator_id, assigned_at=assigned_at
                )
        return None

    def submit(self, ann: RelevanceAnnotation | TruthAnnotation) -> None:
        phase = "relevance" if isinstance(ann, RelevanceAnnotation) else "truth"
        self._check(ann.annotator_id, phase)
        if ann.tweet_id not in self.by_id:
            raise ValidationError(f"unknown tweet {ann.tweet_id!r}")
        with self._lock:
            if self.store.get(phase, ann.tweet_id, ann.annotator_id) is not None:
                raise ConflictError(
                    f"{ann.annotator_id!r} already annotated tweet {ann.tweet_id!r} "
                    f"in the {phase} phase"
                )
            if self.store.assigned_at(phase, ann.annotator_id, ann.tweet_id) is None:
                raise ValidationError(
                    f"no open {phase} assignment of tweet {ann.tweet_id!r} "
                    f"for {ann.annotator_id!r}"
                )
            self.store.record_annotation(ann)

    def progress(self, phase: str) -> dict:
        self._check(None, phase)
        with self._lock:
            pool = self.pool(phase)
            per_annotator = {
                ann: sum(
                    1 for t in pool if self.store.get(phase, t.id, ann) is not None
                )
                for ann in self.annotators
            }
            fully = sum(
                1
                for t in pool
                if all(
                    self.store.get(phase, t.id, ann) is not None for ann in self.annotators
                )
            )
            return {
                "phase": phase,
                "total": len(pool),
                "fully_annotated": fully,
                "per_annotator": per_annotator,
            }

    def agreement(self, phase: str, a: str | None = None, b: str | None = None) -> dict:
        """Cohen's kappa and contingency table for two annotators.

        Defaults to the first two roster annotators, over the tweets both
        have annotated in the phase.
        """
        self._check(None, phase)
        a = a or self.annotators[0]
        b = b or self.annotators[1]
        self._check(a, phase)
        self._check(b, phase)
        labels_a, labels_b = [], []
        with self._lock:
            for tweet in self.pool(phase):
                ann_a = self.store.get(phase, tweet.id, a)
                ann_b = self.store.get(phase, tweet.id, b)
                if ann_a is None or ann_b is None:
                    continue
                if phase == "relevance":
                    labels_a.append(derive_relevance(ann_a))
                    labels_b.append(derive_relevance(ann_b))
                else:
                    labels_a.append(ann_a.truth)
                    labels_b.append(ann_b.truth)
        if not labels_a:
            raise ValidationError(f"no tweets annotated by both {a!r} and {b!r}")
        labels, table = contingency_table(labels_a, labels_b)
        return {
            "phase": phase,
            "annotators": [a, b],
            "n_items": len(labels_a),
            "kappa": cohen_kappa(labels_a, labels_b),
            "labels": labels,
            "table": table,
        }

    def export_rows(self, phase: str) -> list[tuple[Tweet, RelevanceAnnotation | TruthAnnotation]]:
        """All stored annotations of the phase, in log order."""
        self._check(None, phase)
        with self._lock:
            return [
                (self.by_id[tweet_id], self.store.annotations[(phase, tweet_id, annotator)])
                for tweet_id, annotator in self.store.annotation_order[phase]
            ]

    def export_csv(self, phase: str) -> str:
        rows = self.export_rows(phase)
        return relevance_csv(rows) if phase == "relevance" else truth_csv(rows)

    def gold_labels(self) -> list[GoldLabel]:
        """Adjudicated labels for every tweet whose annotation is complete."""
        with self._lock:
            out = []
            for tweet in self.corpus:
                relevance = self._relevance_verdict(tweet.id)
                if relevance is None:
                    continue
                truth = None
                if relevance == "relevant":
                    records = [
                        self.store.get("truth", tweet.id, ann) for ann in self.annotators
                    ]
                    if any(r is None for r in records):
                        continue
                    truth = adjudicate(records, "truth")
                label = combine_verdicts(relevance, truth)
                if label is not None:
                    out.append(GoldLabel(tweet.id, label))
            return out


def _task_payload(task: TaskAssignment) -> dict:
    from misinfo.annotation import anonymized_tweet_url

    tweet = task.tweet
    return {
        "tweet": {
            "id": tweet.id,
            "text": tweet.text,
            "urls": list(tweet.urls),
            "date": tweet.posted_at.isoformat() if tweet.posted_at else None,
            "tweet_url": anonymized_tweet_url(tweet.id),
        },
        "phase": task.phase,
        "assigned_to": task.assigned_to,
        "assigned_at": task.assigned_at,
    }


def _parse_submission(payload: dict) -> RelevanceAnnotation | TruthAnnotation:
    phase = payload.get("phase")
    if phase not in PHASES:
        raise ValidationError(f"unknown phase {phase!r}")
    try:
        if phase == "relevance":
            return RelevanceAnnotation(
                tweet_id=payload["tweet_id"],
                annotator_id=payload["annotator_id"],
                filter=payload["filter"],
                personal=payload.get("personal"),
                humor=payload.get("humor"),
                factual_claim=payload.get("factual_claim"),
            )
        return TruthAnnotation(
            tweet_id=payload["tweet_id"],
            annotator_id=payload["annotator_id"],
            truth=payload["truth"],
        )
    except KeyError as exc:
        raise ValidationError(f"submission missing field: {exc}") from exc


def create_app(service: AnnotationService) -> FastAPI:
    """HTTP JSON API over an AnnotationService."""
    app = FastAPI(title="annotation service")

    @app.exception_handler(ValidationError)
    async def _validation_error(request: Request, exc: ValidationError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.exception_handler(ConflictError)
    async def _conflict_error(request: Request, exc: ConflictError):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.get("/api/tasks/next")
    def tasks_next(annotator: str = Query(...), phase: str = Query(...)):
        task = service.next_task(annotator, phase)
        if task is None:
            return Response(status_code=204)
        return _task_payload(task)

    @app.post("/api/annotations", status_code=201)
    async def post_annotation(request: Request):
        payload = await request.json()
        if not isinstance(payload, dict):
            raise ValidationError("submission must be a JSON object")
        ann = _parse_submission(payload)
        service.submit(ann)
        return {"status": "stored", "tweet_id": ann.tweet_id}

    @app.get("/api/progress")
    def progress(phase: str = Query(...)):
        return service.progress(phase)

    @app.get("/api/agreement")
    def agreement(phase: str = Query(...), a: str | None = None, b: str | None = None):
        return service.agreement(phase, a=a, b=b)

    @app.get("/api/export")
    def export(phase: str = Query(...), format: str = Query("csv")):
        if format != "csv":
            raise ValidationError(f"unsupported export format {format!r}")
        return PlainTextResponse(service.export_csv(phase), media_type="text/csv")

    return app


def load_service(
    corpus_path: str | Path, store_path: str | Path, annotators: list[str]
) -> AnnotationService:
    from misinfo.corpus import load_corpus

    return AnnotationService(load_corpus(corpus_path), annotators, AnnotationStore(store_path))
