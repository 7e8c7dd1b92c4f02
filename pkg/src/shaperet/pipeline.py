"""Glue between images on disk and descriptor databases."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .descriptor import DEFAULT_MODE, Descriptor, DescriptorConfig, describe
from .errors import DuplicateIdError, ShapeRetError
from .image_io import GrayImage, binarize, read_image
from .retrieval import DescriptorDatabase, DescriptorRecord
from .segmentation import ChanVeseParams, chan_vese, largest_component

log = logging.getLogger(__name__)

IMAGE_SUFFIXES = {".pgm", ".ppm", ".pnm", ".pbm"}
LABELS_FILE = "labels.tsv"
UNLABELED = "unlabeled"
SEG_METHODS = ("otsu", "chanvese", "none")


@dataclass(frozen=True)
class Config:
    grid_n: int = 45
    mode: str = DEFAULT_MODE
    seg: str = "otsu"
    top_k: int = 10
    bandwidth_constant: float = 1.059
    seed: int = 0
    chan_vese: ChanVeseParams = field(default_factory=ChanVeseParams)

    def __post_init__(self):
        if self.grid_n < 3:
            raise ValueError("grid_n must be >= 3")
        if self.top_k < 0:
            raise ValueError("top_k must be >= 0")
        if self.seg not in SEG_METHODS:
            raise ValueError(f"unknown segmentation {self.seg!r}")

    @property
    def descriptor(self) -> DescriptorConfig:
        return DescriptorConfig(grid_n=self.grid_n, bandwidth_constant=self.bandwidth_constant)


def segment(image: GrayImage, config: Config) -> np.ndarray:
    """Foreground silhouette of the single object in ``image``."""
    if config.seg == "none":
        mask = binarize(image, "fixed", 128)
    elif config.seg == "otsu":
        mask = binarize(image, "otsu")
    else:
        mask = chan_vese(image, config.chan_vese).mask
    if config.seg != "none":
        mask = largest_component(mask)
    return mask


def describe_image(image: GrayImage, config: Config, mode: str | None = None) -> Descriptor:
    return describe(segment(image, config), mode or config.mode, config.descriptor)


def image_files(directory) -> list[Path]:
    return sorted(p for p in Path(directory).iterdir() if p.suffix.lower() in IMAGE_SUFFIXES and p.is_file())


def read_labels(path) -> dict[str, str]:
    labels = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'id<TAB>label'")
            labels[parts[0]] = parts[1]
    return labels


def write_labels(path, pairs: Iterable[tuple[str, str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rid, label in pairs:
            fh.write(f"{rid}\t{label}\n")


def thread_count() -> int:
    try:
        return max(0, int(os.environ.get("SHAPERET_THREADS", "0")))
    except ValueError:
        return 0


def parallel_map(fn: Callable, items: list) -> list:
    """Order-preserving map; threaded when SHAPERET_THREADS > 0."""
    n = thread_count()
    if n == 0 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _describe_file(path: Path, config: Config, modes: tuple[str, ...]):
    try:
        image = read_image(path)
        mask = segment(image, config)
        return {m: describe(mask, m, config.descriptor) for m in modes}, None
    except (ShapeRetError, OSError) as exc:
        return None, exc


def describe_files(paths: list[Path], config: Config, modes: tuple[str, ...]):
    """Describe every file in each mode; failures are logged and skipped."""
    results = parallel_map(lambda p: _describe_file(p, config, modes), paths)
    out = []
    for path, (descs, exc) in zip(paths, results):
        if exc is not None:
            kind = getattr(exc, "kind", type(exc).__name__)
            log.warning("skipping %s: %s (%s)", path.name, kind, exc)
            continue
        out.append((path, descs))
    return out


def build_databases(
    paths: list[Path],
    labels: dict[str, str],
    config: Config,
    modes: tuple[str, ...] | None = None,
) -> dict[str, DescriptorDatabase]:
    modes = modes or (config.mode,)
    dbs = {m: DescriptorDatabase(config.grid_n, m) for m in modes}
    for path, descs in describe_files(paths, config, modes):
        rid = path.stem
        try:
            for m in modes:
                dbs[m].add(DescriptorRecord(rid, labels.get(rid, UNLABELED), descs[m]))
        except DuplicateIdError:
            log.warning("skipping %s: DuplicateId (id %r already present)", path.name, rid)
    return dbs
