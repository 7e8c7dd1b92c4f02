"""Retrieval benchmark on the synthetic silhouette corpus.

Builds a database per descriptor mode, runs self-queries (bull's eye) and
out-of-database queries (precision/recall/effectiveness at top k), and prints
a summary table. Optionally writes the averaged PR curves as CSV.
"""

import argparse
import time
from pathlib import Path

from shaperet.dataset import generate_dataset, generate_queries
from shaperet.descriptor import MODES, DescriptorConfig, describe
from shaperet.evaluation import RECALL_LEVELS, bulls_eye, evaluate
from shaperet.retrieval import DescriptorDatabase, DescriptorRecord
from shaperet.segmentation import largest_component


def clean(mask):
    # same cleanup the file pipeline applies after thresholding
    return largest_component(mask)


def build(items, mode, config):
    db = DescriptorDatabase(config.grid_n, mode)
    for it in items:
        db.add(DescriptorRecord(it.id, it.label, describe(clean(it.mask), mode, config)))
    return db


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--classes", type=int, default=20)
    ap.add_argument("--per-class", type=int, default=10)
    ap.add_argument("--queries-per-class", type=int, default=3)
    ap.add_argument("--canvas", type=int, default=64)
    ap.add_argument("--grid", type=int, default=45)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--top-k", type=int, default=10)
    ap.add_argument("--modes", nargs="+", default=list(MODES), choices=MODES)
    ap.add_argument("--csv-dir", type=Path, default=None)
    args = ap.parse_args(argv)

    config = DescriptorConfig(grid_n=args.grid)
    items = generate_dataset(args.classes, args.per_class, args.canvas, seed=args.seed)
    queries = generate_queries(args.classes, args.queries_per_class, args.canvas, seed=args.seed)
    print(f"corpus {len(items)} images, {len(queries)} held-out queries, grid {args.grid}, seed {args.seed}")
    print(f"{'mode':<10} {'BEP':>7} {'P@k':>7} {'R@k':>7} {'E@k':>7} {'build s':>8}")
    for mode in args.modes:
        t0 = time.perf_counter()
        db = build(items, mode, config)
        elapsed = time.perf_counter() - t0
        bep = bulls_eye(db, [(r.id, r.label, r.descriptor) for r in db.records])
        held = [(q.id, q.label, describe(clean(q.mask), mode, config)) for q in queries]
        report = evaluate(db, held, top_k=args.top_k)
        p = sum(q.precision for q in report.queries) / len(report.queries)
        print(
            f"{mode:<10} {bep:7.2f} {p:7.3f} {report.mean_recall:7.3f} "
            f"{report.mean_effectiveness:7.3f} {elapsed:8.2f}"
        )
        if args.csv_dir:
            args.csv_dir.mkdir(parents=True, exist_ok=True)
            (args.csv_dir / f"pr.{mode}.csv").write_text(report.pr_csv())
    print("recall levels:", ", ".join(f"{r:.1f}" for r in RECALL_LEVELS))


if __name__ == "__main__":
    main()
