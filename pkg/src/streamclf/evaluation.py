"""Prequential (test-then-train) evaluation: windowed accuracy series,
final accuracies, wall-clock runtimes, and cross-method rank tables.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass

import numpy as np

from .core import Classifier, InstanceStream

__all__ = [
    "EvaluationRecord",
    "EvaluationSummary",
    "prequential_run",
    "write_results_csv",
    "rank_methods",
    "RankTable",
]

RESULTS_HEADER = ["model", "dataset", "instances_seen", "window_acc", "cum_acc", "elapsed_s"]


@dataclass
class EvaluationRecord:
    """One prequential window: counts, accuracies, elapsed wall-clock."""

    instances_seen: int
    window_accuracy: float
    cumulative_accuracy: float
    elapsed_seconds: float
    model: str


@dataclass
class EvaluationSummary:
    model: str
    instances: int
    accuracy: float
    elapsed_seconds: float
    truncated: bool


def prequential_run(stream: InstanceStream, classifier: Classifier,
                    max_instances: int | None = None, n_windows: int = 100,
                    model_id: str = "model"):
    """Evaluate test-then-train: each instance is predicted, scored, and only
    then used for training.

    Emits one record per window; window boundaries divide the target count
    evenly. If the stream runs out early, the series is truncated and the
    summary is flagged.

    Returns (records, summary).
    """
    total = max_instances if max_instances is not None else stream.n_instances
    if total is None:
        raise ValueError("stream length unknown: pass max_instances")
    if n_windows < 1 or total < n_windows:
        raise ValueError("need max_instances >= n_windows >= 1")

    boundaries = [round(k * total / n_windows) for k in range(1, n_windows + 1)]
    records: list[EvaluationRecord] = []
    seen = 0
    correct = 0
    window_seen = 0
    window_correct = 0
    next_boundary = 0
    start = time.perf_counter()

    for inst in stream:
        votes = classifier.predict(inst)
        ok = int(np.argmax(votes)) == inst.label
        classifier.train(inst)
        seen += 1
        window_seen += 1
        correct += ok
        window_correct += ok
        if seen == boundaries[next_boundary]:
            records.append(
                EvaluationRecord(
                    instances_seen=seen,
                    window_accuracy=window_correct / window_seen,
                    cumulative_accuracy=correct / seen,
                    elapsed_seconds=time.perf_counter() - start,
                    model=model_id,
                )
            )
            window_correct = 0
            window_seen = 0
            next_boundary += 1
        if seen >= total:
            break

    elapsed = time.perf_counter() - start
    truncated = seen < total
    if truncated and window_seen:
        records.append(
            EvaluationRecord(seen, window_correct / window_seen, correct / seen, elapsed, model_id)
        )
    summary = EvaluationSummary(
        model=model_id,
        instances=seen,
        accuracy=correct / seen if seen else 0.0,
        elapsed_seconds=elapsed,
        truncated=truncated,
    )
    return records, summary


def write_results_csv(path, records, summary, dataset: str) -> None:
    """Write window records plus a final summary row.

    The summary row repeats the final instance count with the cumulative
    accuracy in both accuracy columns; consumers can drop it by skipping
    the trailing duplicate of ``instances_seen``.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_HEADER)
        for r in records:
            writer.writerow(
                [r.model, dataset, r.instances_seen,
                 f"{r.window_accuracy:.6f}", f"{r.cumulative_accuracy:.6f}",
                 f"{r.elapsed_seconds:.3f}"]
            )
        writer.writerow(
            [summary.model, dataset, summary.instances,
             f"{summary.accuracy:.6f}", f"{summary.accuracy:.6f}",
             f"{summary.elapsed_seconds:.3f}"]
        )


@dataclass
class RankTable:
    """Per-dataset accuracy ranks (competition style: ties share the lower
    rank) and each method's average rank."""

    datasets: list[str]
    methods: list[str]
    accuracy: dict          # (dataset, method) -> accuracy
    runtime: dict           # (dataset, method) -> seconds
    ranks: dict             # (dataset, method) -> rank
    average_rank: dict      # method -> mean rank


def rank_methods(results: dict) -> RankTable:
    """Rank methods per dataset by final accuracy.

    ``results`` maps (dataset, method) to (accuracy, runtime); every method
    must appear on every dataset.
    """
    datasets = sorted({d for d, _ in results})
    methods = sorted({m for _, m in results})
    for d in datasets:
        for m in methods:
            if (d, m) not in results:
                raise ValueError(f"missing result for dataset {d!r}, method {m!r}")
    accuracy = {key: results[key][0] for key in results}
    runtime = {key: results[key][1] for key in results}
    ranks = {}
    for d in datasets:
        accs = {m: accuracy[(d, m)] for m in methods}
        for m in methods:
            ranks[(d, m)] = 1 + sum(1 for other in methods if accs[other] > accs[m])
    average_rank = {
        m: sum(ranks[(d, m)] for d in datasets) / len(datasets) for m in methods
    }
    return RankTable(datasets, methods, accuracy, runtime, ranks, average_rank)
