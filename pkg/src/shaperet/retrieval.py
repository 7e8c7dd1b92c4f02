"""Cosine-coefficient ranking over a flat descriptor database."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .descriptor import MODES, Descriptor
from .errors import (
    BadHeaderError,
    DuplicateIdError,
    LengthMismatchError,
    ModeMismatchError,
    RaggedRowError,
    ZeroVectorError,
)

HEADER_RE = re.compile(r"^#shaperet-db v1 grid=(\d+) mode=(\S+)$")


def cosine_similarity(p, q) -> float:
    """Normalized inner product of two vectors, clipped to [-1, 1]."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise LengthMismatchError(f"lengths differ: {p.size} vs {q.size}")
    sp, sq = np.max(np.abs(p), initial=0.0), np.max(np.abs(q), initial=0.0)
    if sp == 0 or sq == 0:
        raise ZeroVectorError("cosine similarity of a zero vector")
    if np.array_equal(p, q):
        return 1.0
    # rescale so squared norms neither underflow nor overflow
    p, q = p / sp, q / sq
    np_, nq = np.linalg.norm(p), np.linalg.norm(q)
    return float(np.clip(np.dot(p, q) / (np_ * nq), -1.0, 1.0))


@dataclass
class DescriptorRecord:
    id: str
    label: str
    descriptor: Descriptor


@dataclass
class DescriptorDatabase:
    grid_n: int
    mode: str
    records: list[DescriptorRecord] = field(default_factory=list)

    def __post_init__(self):
        if self.mode not in MODES:
            raise BadHeaderError(f"unknown mode {self.mode!r}")
        seen = set()
        for rec in self.records:
            self._check(rec, seen)
            seen.add(rec.id)

    def _check(self, rec: DescriptorRecord, seen) -> None:
        if rec.id in seen:
            raise DuplicateIdError(f"duplicate id {rec.id!r}")
        for tok in (rec.id, rec.label):
            if not tok or any(ch in tok for ch in "\t\n\r"):
                raise ValueError(f"bad id/label token {tok!r}")
        if rec.descriptor.mode != self.mode:
            raise ModeMismatchError(f"record mode {rec.descriptor.mode} != database mode {self.mode}")
        if len(rec.descriptor) != self.grid_n - 1:
            raise RaggedRowError(f"record {rec.id!r} has length {len(rec.descriptor)}, want {self.grid_n - 1}")

    def add(self, rec: DescriptorRecord) -> None:
        self._check(rec, {r.id for r in self.records})
        self.records.append(rec)

    def __len__(self):
        return len(self.records)

    def labels(self) -> dict[str, str]:
        return {r.id: r.label for r in self.records}

    def matrix(self) -> np.ndarray:
        if not self.records:
            return np.zeros((0, self.grid_n - 1))
        return np.vstack([r.descriptor.values for r in self.records])


@dataclass(frozen=True)
class RankedResult:
    id: str
    label: str
    score: float
    flagged: bool = False  # database entry was a zero vector


def rank(
    query: Descriptor,
    db: DescriptorDatabase,
    top_k: int | None = 10,
    query_id: str | None = None,
) -> list[RankedResult]:
    """Score every record by cosine similarity and return the best ``top_k``.

    Order is score descending, then the record named ``query_id`` (if any),
    then id ascending. Zero-vector records score 0 and are flagged.
    """
    if query.mode != db.mode:
        raise ModeMismatchError(f"query mode {query.mode} != database mode {db.mode}")
    if len(query) != db.grid_n - 1:
        raise LengthMismatchError(f"query length {len(query)} != {db.grid_n - 1}")
    if top_k is not None and top_k <= 0:
        return []
    results = []
    for rec in db.records:
        try:
            score, flagged = cosine_similarity(query.values, rec.descriptor.values), False
        except ZeroVectorError:
            if not np.any(query.values):
                raise
            score, flagged = 0.0, True
        results.append(RankedResult(rec.id, rec.label, score, flagged))
    results.sort(key=lambda r: (-r.score, r.id != query_id, r.id))
    return results if top_k is None else results[:top_k]


def _format_values(values: np.ndarray) -> str:
    # repr gives the shortest round-tripping decimal (up to 17 significant digits)
    return ",".join(repr(float(v)) for v in values)


def save_db(db: DescriptorDatabase) -> bytes:
    lines = [f"#shaperet-db v1 grid={db.grid_n} mode={db.mode}"]
    for rec in db.records:
        lines.append(f"{rec.id}\t{rec.label}\t{_format_values(rec.descriptor.values)}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_db(data: bytes) -> DescriptorDatabase:
    text = data.decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise BadHeaderError("missing header")
    m = HEADER_RE.match(lines[0])
    if not m or m.group(2) not in MODES:
        raise BadHeaderError(f"bad header {lines[0][:60]!r}")
    grid_n, mode = int(m.group(1)), m.group(2)
    db = DescriptorDatabase(grid_n, mode)
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 3:
            raise RaggedRowError(f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
        rid, label, vals = parts
        try:
            values = np.array([float(v) for v in vals.split(",")], dtype=np.float64)
        except ValueError as exc:
            raise RaggedRowError(f"line {lineno}: {exc}") from None
        if values.size != grid_n - 1:
            raise RaggedRowError(f"line {lineno}: {values.size} values, want {grid_n - 1}")
        if rid in seen:
            raise DuplicateIdError(f"duplicate id {rid!r} on line {lineno}")
        seen.add(rid)
        db.records.append(DescriptorRecord(rid, label, Descriptor(mode, values)))
    return db


def read_db(path) -> DescriptorDatabase:
    with open(path, "rb") as fh:
        return load_db(fh.read())


def write_db(path, db: DescriptorDatabase) -> None:
    with open(path, "wb") as fh:
        fh.write(save_db(db))
