"""Retrieval metrics: recall, precision, effectiveness, bull's eye and PR curves."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .descriptor import Descriptor
from .errors import (
    EmptyResultSetError,
    NoRelevantInDbError,
    UndefinedBranchError,
    UnknownLabelError,
)
from .retrieval import DescriptorDatabase, rank

RECALL_LEVELS = tuple(round(0.1 * i, 1) for i in range(1, 11))


@dataclass(frozen=True)
class EvalCounts:
    """A relevant retrieved, B relevant missed, C irrelevant retrieved,
    N relevant in the database, T number of results the user asked for."""

    A: int
    B: int
    C: int
    N: int
    T: int

    def __post_init__(self):
        if min(self.A, self.B, self.C, self.N, self.T) < 0:
            raise ValueError("counts must be nonnegative")
        if self.A + self.B != self.N:
            raise ValueError(f"A + B must equal N ({self.A} + {self.B} != {self.N})")

    @classmethod
    def from_ranking(cls, ranked_ids: Sequence[str], relevant_ids: Iterable[str], T: int):
        relevant = set(relevant_ids)
        a = sum(1 for rid in ranked_ids if rid in relevant)
        return cls(A=a, B=len(relevant) - a, C=len(ranked_ids) - a, N=len(relevant), T=T)


def recall(c: EvalCounts) -> float:
    if c.N == 0:
        raise NoRelevantInDbError("no relevant items in the database")
    return c.A / c.N


def precision(c: EvalCounts) -> float:
    if c.A + c.C == 0:
        raise EmptyResultSetError("empty result set")
    return c.A / (c.A + c.C)


def effectiveness(c: EvalCounts) -> float:
    """A/N when more results were requested than exist relevant, else A/T."""
    if c.T > c.N:
        return c.A / c.N
    if c.T == 0:
        raise UndefinedBranchError("effectiveness undefined for T = 0 <= N")
    return c.A / c.T


def pr_curve(ranking: Sequence[str], relevant_ids: Iterable[str]) -> list[tuple[float, float]]:
    """(recall, precision) after each rank position k = 1..len(ranking)."""
    relevant = set(relevant_ids)
    if not relevant:
        raise NoRelevantInDbError("pr_curve needs at least one relevant id")
    n = len(relevant)
    points = []
    hits = 0
    for k, rid in enumerate(ranking, start=1):
        hits += rid in relevant
        points.append((hits / n, hits / k))
    return points


def precision_at_recall(points: Sequence[tuple[float, float]], levels=RECALL_LEVELS) -> list[float]:
    """Precision at the first rank reaching each recall level (0 if never reached)."""
    out = []
    for level in levels:
        p = 0.0
        for r, prec in points:
            if r >= level - 1e-12:
                p = prec
                break
        out.append(p)
    return out


def format_pr_csv(points: Iterable[tuple[float, float]]) -> str:
    lines = ["recall,precision"]
    lines.extend(f"{r:.6f},{p:.6f}" for r, p in points)
    return "\n".join(lines) + "\n"


def _class_members(db: DescriptorDatabase) -> dict[str, set[str]]:
    members: dict[str, set[str]] = {}
    for rec in db.records:
        members.setdefault(rec.label, set()).add(rec.id)
    return members


def bulls_eye(db: DescriptorDatabase, queries: Iterable[tuple[str, str, Descriptor]]) -> float:
    """Mean over queries of (relevant in top 2N) / N, as a percentage.

    ``queries`` yields ``(query_id, label, descriptor)``; a query that is itself
    in the database counts as one of its own relevant results.
    """
    members = _class_members(db)
    scores = []
    for qid, label, desc in queries:
        if label not in members:
            raise UnknownLabelError(f"label {label!r} has no members in the database")
        relevant = members[label]
        n = len(relevant)
        top = rank(desc, db, top_k=2 * n, query_id=qid)
        scores.append(sum(r.id in relevant for r in top) / n)
    if not scores:
        raise EmptyResultSetError("no queries")
    return 100.0 * float(np.mean(scores))


@dataclass
class QueryResult:
    query_id: str
    label: str
    counts: EvalCounts
    recall: float
    precision: float
    effectiveness: float
    curve: list[tuple[float, float]]


@dataclass
class EvalReport:
    mode: str
    queries: list[QueryResult] = field(default_factory=list)
    mean_precision: list[float] = field(default_factory=list)  # at RECALL_LEVELS
    bep: float = 0.0

    @property
    def mean_recall(self) -> float:
        return float(np.mean([q.recall for q in self.queries]))

    @property
    def mean_effectiveness(self) -> float:
        return float(np.mean([q.effectiveness for q in self.queries]))

    def pr_csv(self) -> str:
        return format_pr_csv(zip(RECALL_LEVELS, self.mean_precision))


def evaluate(
    db: DescriptorDatabase,
    queries: Sequence[tuple[str, str, Descriptor]],
    top_k: int = 10,
) -> EvalReport:
    """Per-query counts at ``top_k`` plus averaged PR points and bull's eye."""
    members = _class_members(db)
    report = EvalReport(mode=db.mode)
    curves = []
    for qid, label, desc in queries:
        if label not in members:
            raise UnknownLabelError(f"label {label!r} has no members in the database")
        relevant = members[label]
        ranking = [r.id for r in rank(desc, db, top_k=None, query_id=qid)]
        counts = EvalCounts.from_ranking(ranking[:top_k], relevant, T=top_k)
        curve = pr_curve(ranking, relevant)
        curves.append(precision_at_recall(curve))
        report.queries.append(
            QueryResult(
                qid,
                label,
                counts,
                recall(counts),
                precision(counts) if counts.A + counts.C else 0.0,
                effectiveness(counts) if top_k > 0 else 0.0,
                curve,
            )
        )
    if not report.queries:
        raise EmptyResultSetError("no queries")
    report.mean_precision = list(np.mean(curves, axis=0))
    report.bep = bulls_eye(db, queries)
    return report
