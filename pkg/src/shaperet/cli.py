"""Command-line entry point: ``shaperet {build,query,eval,gen,segment}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .dataset import generate_dataset
from .descriptor import MODES
from .errors import ShapeRetError
from .evaluation import evaluate
from .image_io import read_image, write_netpbm
from .pipeline import (
    LABELS_FILE,
    SEG_METHODS,
    Config,
    build_databases,
    describe_files,
    describe_image,
    image_files,
    read_labels,
    segment,
    write_labels,
)
from .retrieval import rank, read_db, save_db
from .segmentation import ChanVeseParams

log = logging.getLogger("shaperet")


def _add_config_flags(p: argparse.ArgumentParser, mode_default=MODES[1], grid_default=45) -> None:
    p.add_argument("--grid", type=int, default=grid_default, help="descriptor grid size")
    p.add_argument("--mode", choices=MODES, default=mode_default)
    p.add_argument("--seg", choices=SEG_METHODS, default="otsu")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bandwidth-constant", type=float, default=1.059)
    p.add_argument("--cv-mu", type=float, default=0.2)
    p.add_argument("--cv-dt", type=float, default=0.5)
    p.add_argument("--cv-epsilon", type=float, default=1.0)
    p.add_argument("--cv-iters", type=int, default=500)
    p.add_argument("--cv-tol", type=float, default=1e-3)
    p.add_argument("--cv-init", choices=("checkerboard", "centered_circle"), default="checkerboard")


def _config(args, **overrides) -> Config:
    cv = ChanVeseParams(
        mu=args.cv_mu,
        dt=args.cv_dt,
        epsilon=args.cv_epsilon,
        max_iters=args.cv_iters,
        tol=args.cv_tol,
        init=args.cv_init,
    )
    kw = dict(
        grid_n=args.grid,
        mode=args.mode,
        seg=args.seg,
        top_k=args.top_k,
        bandwidth_constant=args.bandwidth_constant,
        seed=args.seed,
        chan_vese=cv,
    )
    kw.update(overrides)
    return Config(**kw)


def cmd_build(args) -> int:
    config = _config(args)
    input_dir = Path(args.input_dir)
    if not input_dir.is_dir():
        log.error("%s is not a directory", input_dir)
        return 1
    labels_path = Path(args.labels) if args.labels else input_dir / LABELS_FILE
    labels = read_labels(labels_path) if labels_path.exists() else {}
    db = build_databases(image_files(input_dir), labels, config)[config.mode]
    if len(db) == 0:
        log.error("no records written: no readable images in %s", input_dir)
        return 1
    try:
        Path(args.out).write_bytes(save_db(db))
    except OSError as exc:
        log.error("cannot write %s: %s", args.out, exc)
        return 2
    log.info("wrote %d records to %s", len(db), args.out)
    return 0


def cmd_query(args) -> int:
    try:
        db = read_db(args.db)
        image = read_image(args.image)
    except (OSError, ShapeRetError) as exc:
        log.error("cannot read inputs: %s", exc)
        return 1
    if args.mode is not None and args.mode != db.mode:
        log.error("mode mismatch: --mode %s but database holds %s", args.mode, db.mode)
        return 1
    if args.grid is not None and args.grid != db.grid_n:
        log.error("grid mismatch: --grid %d but database holds %d", args.grid, db.grid_n)
        return 1
    config = _config(args, grid_n=db.grid_n, mode=db.mode)
    try:
        query = describe_image(image, config)
        results = rank(query, db, top_k=config.top_k, query_id=Path(args.image).stem)
    except ShapeRetError as exc:
        log.error("query failed: %s (%s)", exc.kind, exc)
        return 1
    lines = [f"{i}\t{r.id}\t{r.label}\t{r.score:.6f}" for i, r in enumerate(results, start=1)]
    sys.stdout.write("".join(line + "\n" for line in lines))
    return 0


def _report_path(base: Path, mode: str) -> Path:
    return base.with_name(f"{base.stem}.{mode}{base.suffix or '.csv'}")


def cmd_eval(args) -> int:
    try:
        db = read_db(args.db)
        labels = read_labels(args.labels)
    except (OSError, ShapeRetError, ValueError) as exc:
        log.error("cannot read inputs: %s", exc)
        return 1
    config = _config(args, grid_n=db.grid_n)
    query_paths = image_files(args.query_dir)
    if not query_paths:
        log.error("no query images in %s", args.query_dir)
        return 1
    missing = [p.stem for p in query_paths if p.stem not in labels]
    if missing:
        log.error("labels missing for %d queries, e.g. %s", len(missing), missing[0])
        return 1

    modes = tuple(dict.fromkeys((config.mode, "dhfp")))
    dbs = {db.mode: db}
    rebuild = [m for m in modes if m not in dbs]
    if rebuild:
        # the stored database holds one mode; the others are recomputed from its images
        source = Path(args.images) if args.images else Path(args.query_dir)
        dbs.update(build_databases(image_files(source), labels, config, tuple(rebuild)))

    described = describe_files(query_paths, config, modes)
    if not described:
        log.error("no query could be described")
        return 1
    out = Path(args.out)
    summary = []
    for m in modes:
        queries = [(p.stem, labels[p.stem], d[m]) for p, d in described]
        try:
            report = evaluate(dbs[m], queries, top_k=config.top_k)
        except ShapeRetError as exc:
            log.error("evaluation failed for %s: %s (%s)", m, exc.kind, exc)
            return 1
        try:
            _report_path(out, m).write_text(report.pr_csv(), encoding="utf-8")
        except OSError as exc:
            log.error("cannot write report: %s", exc)
            return 1
        summary.append(f"BEP {m} {report.bep:.2f}")
    sys.stdout.write("".join(line + "\n" for line in summary))
    return 0


def cmd_gen(args) -> int:
    out = Path(args.out_dir)
    try:
        items = generate_dataset(args.classes, args.per_class, args.canvas, args.seed)
        out.mkdir(parents=True, exist_ok=True)
        for item in items:
            (out / f"{item.id}.pgm").write_bytes(write_netpbm(item.mask))
        write_labels(out / LABELS_FILE, ((it.id, it.label) for it in items))
    except (ShapeRetError, OSError, ValueError) as exc:
        log.error("generation failed: %s", exc)
        return 1
    log.info("wrote %d images to %s", len(items), out)
    return 0


def cmd_segment(args) -> int:
    config = _config(args)
    try:
        mask = segment(read_image(args.image), config)
        Path(args.out).write_bytes(write_netpbm(mask, ascii=args.ascii))
    except (ShapeRetError, OSError) as exc:
        log.error("segmentation failed: %s", exc)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shaperet", description="Ring-density shape retrieval")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="describe a directory of images into a database")
    p.add_argument("input_dir")
    p.add_argument("--out", required=True)
    p.add_argument("--labels", help=f"id<TAB>label file (default <input_dir>/{LABELS_FILE})")
    _add_config_flags(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="rank database records against one image")
    p.add_argument("image")
    p.add_argument("--db", required=True)
    # grid and mode come from the database unless given explicitly
    _add_config_flags(p, mode_default=None, grid_default=None)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("eval", help="bull's eye and PR curves for a query set")
    p.add_argument("query_dir")
    p.add_argument("--db", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True, help="PR CSV base path; one file per method")
    p.add_argument("--images", help="database source images (default: query_dir)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", help="generate a synthetic labeled corpus")
    p.add_argument("out_dir")
    p.add_argument("--classes", type=int, default=20)
    p.add_argument("--per-class", type=int, default=10)
    p.add_argument("--canvas", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("segment", help="segment one image and write the mask")
    p.add_argument("image")
    p.add_argument("--out", required=True)
    p.add_argument("--ascii", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=cmd_segment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
