"""Command-line entry point: corpus synthesis, extraction, codebook training,
indexing, querying, fusion and evaluation.

Stages compose through files under the configured output directory; rerunning
a stage with the same config and seeds reproduces its artifacts byte for
byte.  Exit codes: 0 success, 1 usage error, 2 data error, 3 partial
extraction.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import hashlib
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bench.evaluate import EvalReport, QueryGroup, injection_rankings, result_from_ranking
from .bench.feature_io import (
    import_external_features,
    read_feature_matrix,
    read_descriptor_set,
    write_descriptor_set,
    write_feature_matrix,
)
from .bench.ranks import resolve_ties
from .bench.synth import SynthSpec, synth_corpus
from .codebook import IdfModel, load_codebook, save_codebook, tfidf_weight
from .errors import LogoSearchError
from .fusion import irp_fuse
from .index import InvertedIndex, build_dense, build_inverted, load_index, save_index
from .metrics import METRIC_NAMES, NORMALIZATION_NAMES, hsv72_similarity_matrix
from .pipelines import (
    PipelineConfig,
    bovw_vocabulary_size,
    corpus_idf,
    extract_dense,
    extract_descriptor_set,
    term_counts,
    train_pipeline_codebook,
)
from .raster import ingest_corpus, load_image, to_gray
from .textmask import detect_text_regions

USAGE_ERROR, DATA_ERROR, PARTIAL_EXTRACTION = 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int = DATA_ERROR):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    """Parsed run configuration; see README for the file format."""

    corpus: str
    output: str
    queries: str = ""
    manifest: str = ""
    seed: int = 0
    jobs: int = 0
    pipelines: dict[str, PipelineConfig] = field(default_factory=dict)
    fusions: dict[str, list[str]] = field(default_factory=dict)
    config_hash: str = ""


def _parse_pipeline(section: configparser.SectionProxy) -> PipelineConfig:
    cfg = PipelineConfig(
        feature=section.get("feature", ""),
        metric=section.get("metric", ""),
        normalization=section.get("normalization", ""),
        codebook_k=section.getint("codebook_k", 200),
        codebook_seed=section.getint("codebook_seed", 0),
        codebook_iters=section.getint("codebook_iters", 25),
        sample_limit=section.getint("sample_limit", 500_000),
        strip_text=section.getboolean("strip_text", False),
        cell_px=section.getint("cell_px", 8),
        n_samples=section.getint("n_samples", 100),
    )
    if cfg.metric and cfg.metric not in METRIC_NAMES:
        raise CliError(f"unknown metric {cfg.metric!r}", USAGE_ERROR)
    if cfg.normalization and cfg.normalization not in NORMALIZATION_NAMES:
        raise CliError(f"unknown normalization {cfg.normalization!r}", USAGE_ERROR)
    return cfg


def load_config(path: str) -> RunConfig:
    if not os.path.isfile(path):
        raise CliError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        raw = fh.read()
    parser.read_string(raw)
    if "run" not in parser:
        raise CliError("config needs a [run] section", USAGE_ERROR)
    run = parser["run"]
    cfg = RunConfig(
        corpus=run.get("corpus", ""),
        output=run.get("output", "out"),
        queries=run.get("queries", ""),
        manifest=run.get("manifest", ""),
        seed=run.getint("seed", 0),
        jobs=run.getint("jobs", 0),
        config_hash=hashlib.sha256(raw.encode()).hexdigest()[:16],
    )
    base = os.path.dirname(os.path.abspath(path))

    def _resolve(p):
        return p if (not p or os.path.isabs(p)) else os.path.normpath(os.path.join(base, p))

    cfg.corpus = _resolve(cfg.corpus)
    cfg.queries = _resolve(cfg.queries)
    cfg.manifest = _resolve(cfg.manifest)
    cfg.output = _resolve(cfg.output)

    for name in parser.sections():
        if name.startswith("pipeline."):
            try:
                cfg.pipelines[name.split(".", 1)[1]] = _parse_pipeline(parser[name])
            except LogoSearchError as exc:
                raise CliError(f"bad pipeline section [{name}]: {exc}", USAGE_ERROR) from exc
        elif name.startswith("fusion."):
            inputs = parser[name].get("inputs", "").split()
            if len(inputs) < 2:
                raise CliError(f"[{name}] needs >= 2 inputs", USAGE_ERROR)
            cfg.fusions[name.split(".", 1)[1]] = inputs

    for field_name in ("corpus", "queries", "manifest"):
        value = getattr(cfg, field_name)
        if value and not os.path.exists(value):
            raise CliError(f"{field_name} path does not exist: {value}")
    for fusion, inputs in cfg.fusions.items():
        missing = [p for p in inputs if p not in cfg.pipelines]
        if missing:
            raise CliError(f"fusion {fusion!r} references unknown pipelines {missing}", USAGE_ERROR)
    return cfg


# ---------------------------------------------------------------- paths

def _features_dir(cfg, name):
    return os.path.join(cfg.output, "features", name)


def _codebook_path(cfg, name):
    return os.path.join(cfg.output, "codebooks", f"{name}.cb")


def _index_path(cfg, name):
    return os.path.join(cfg.output, "indexes", f"{name}.idx")


def _idf_path(cfg, name):
    return os.path.join(cfg.output, "indexes", f"{name}.idf.csv")


def _reports_dir(cfg):
    return os.path.join(cfg.output, "reports")


def _save_idf(path: str, idf: IdfModel) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doc_count", str(idf.doc_count)])
        for word in sorted(idf.doc_freq):
            writer.writerow([word, idf.doc_freq[word]])


def _load_idf(path: str) -> IdfModel:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][0] != "doc_count":
        raise CliError(f"bad idf file {path}")
    return IdfModel(int(rows[0][1]), {int(w): int(c) for w, c in rows[1:]})


def _jobs(cfg: RunConfig) -> int:
    return cfg.jobs if cfg.jobs > 0 else (os.cpu_count() or 1)


def _map_images(cfg, items, fn):
    """Ordered parallel map over (image_id, path); failures become None."""
    def _one(item):
        image_id, path = item
        try:
            return image_id, fn(load_image(path))
        except (LogoSearchError, OSError) as exc:
            print(f"warning: skipping {image_id}: {exc}", file=sys.stderr)
            return image_id, None

    workers = _jobs(cfg)
    if workers <= 1:
        return [_one(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_one, items))


# ---------------------------------------------------------------- commands

def cmd_synth(args) -> int:
    spec = SynthSpec(
        seed=args.seed,
        text_only=args.text_only,
        figure_only=args.figure_only,
        combined=args.combined,
        groups=args.groups,
        members_per_group=args.members,
        canvas=args.canvas,
        scale_jitter=not args.no_scale,
        rotation_jitter=not args.no_rotation,
        contrast_inversion=args.contrast_inversion,
        text_contamination=args.text_contamination,
    )
    corpus = synth_corpus(spec)
    corpus.save(args.out)
    print(f"wrote {len(corpus.distractors)} corpus images, "
          f"{len(corpus.queries)} query images in {len(corpus.groups)} groups to {args.out}")
    return 0


def _extract_pipeline(cfg: RunConfig, name: str, pcfg: PipelineConfig, strip_text: bool) -> int:
    """Extract one pipeline for corpus and queries; returns failure count."""
    if strip_text and not pcfg.is_dense:
        pcfg = dataclasses.replace(pcfg, strip_text=True)
    failures = 0
    for role, root in (("corpus", cfg.corpus), ("queries", cfg.queries)):
        if not root:
            continue
        items = ingest_corpus(root)
        if role == "corpus" and not items:
            raise CliError(f"no images found in {root}")
        out_dir = _features_dir(cfg, name)
        os.makedirs(out_dir, exist_ok=True)
        if pcfg.is_dense:
            results = _map_images(cfg, items, lambda img: extract_dense(img, pcfg).values)
            kept = [(i, v) for i, v in results if v is not None]
            failures += len(results) - len(kept)
            if kept:
                write_feature_matrix(
                    os.path.join(out_dir, f"{role}.tmf"),
                    pcfg.feature,
                    [i for i, _ in kept],
                    np.stack([v for _, v in kept]),
                )
        else:
            results = _map_images(cfg, items, lambda img: extract_descriptor_set(img, pcfg))
            for image_id, dset in results:
                if dset is None:
                    failures += 1
                    continue
                path = os.path.join(out_dir, role, f"{image_id}.tmf")
                os.makedirs(os.path.dirname(path), exist_ok=True)
                write_descriptor_set(path, dset)
    return failures


def _export_boxes(cfg: RunConfig, out_path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image_id", "x0", "y0", "x1", "y1", "confidence"])
        for root in (cfg.corpus, cfg.queries):
            if not root:
                continue
            for image_id, path in ingest_corpus(root):
                try:
                    boxes = detect_text_regions(to_gray(load_image(path)))
                except (LogoSearchError, OSError):
                    continue
                for b in boxes:
                    writer.writerow([image_id, b.x0, b.y0, b.x1, b.y1, f"{b.confidence:.4f}"])


def cmd_extract(args) -> int:
    cfg = load_config(args.config)
    if not cfg.corpus:
        raise CliError("config has no corpus path")
    failures = 0
    for name, pcfg in sorted(cfg.pipelines.items()):
        if pcfg.is_external:
            continue  # external vectors arrive via import-features
        failures += _extract_pipeline(cfg, name, pcfg, args.strip_text)
        print(f"extracted {name} ({pcfg.feature})")
    if args.export_boxes:
        _export_boxes(cfg, args.export_boxes)
    if failures:
        print(f"{failures} image(s) failed to extract", file=sys.stderr)
        return PARTIAL_EXTRACTION
    return 0


def _load_corpus_sets(cfg, name):
    root = os.path.join(_features_dir(cfg, name), "corpus")
    if not os.path.isdir(root):
        raise CliError(f"no extracted descriptors for pipeline {name!r}; run extract first")
    sets = {}
    for dirpath, _dirs, files in os.walk(root):
        for fname in sorted(files):
            if fname.endswith(".tmf"):
                full = os.path.join(dirpath, fname)
                image_id = os.path.relpath(full, root)[: -len(".tmf")].replace(os.sep, "/")
                sets[image_id] = read_descriptor_set(full)
    return sets


def cmd_train_codebook(args) -> int:
    cfg = load_config(args.config)
    names = [args.pipeline] if args.pipeline else sorted(cfg.pipelines)
    trained = 0
    for name in names:
        if name not in cfg.pipelines:
            raise CliError(f"unknown pipeline {name!r}", USAGE_ERROR)
        pcfg = cfg.pipelines[name]
        if pcfg.is_dense:
            continue
        sets = _load_corpus_sets(cfg, name)
        cb = train_pipeline_codebook(sets, pcfg, run_seed=cfg.seed)
        os.makedirs(os.path.dirname(_codebook_path(cfg, name)), exist_ok=True)
        save_codebook(cb, _codebook_path(cfg, name))
        print(f"trained codebook {name}: k={cb.k} dim={cb.dim}")
        trained += 1
    if not trained:
        print("no BoVW pipelines to train", file=sys.stderr)
    return 0


def cmd_index(args) -> int:
    cfg = load_config(args.config)
    os.makedirs(os.path.join(cfg.output, "indexes"), exist_ok=True)
    for name in sorted(cfg.pipelines):
        pcfg = cfg.pipelines[name]
        if pcfg.is_external:
            if not os.path.isfile(_index_path(cfg, name)):
                raise CliError(f"external pipeline {name!r} needs import-features first")
            continue
        if pcfg.is_dense:
            path = os.path.join(_features_dir(cfg, name), "corpus.tmf")
            if not os.path.isfile(path):
                raise CliError(f"missing {path}; run extract first")
            feature_id, ids, matrix = read_feature_matrix(path)
            index = build_dense(
                dict(zip(ids, matrix)), feature_id,
                normalization=pcfg.normalization or "l1", seed=cfg.seed,
            )
        else:
            if not os.path.isfile(_codebook_path(cfg, name)):
                raise CliError(f"missing codebook for {name!r}; run train-codebook first")
            cb = load_codebook(_codebook_path(cfg, name))
            sets = _load_corpus_sets(cfg, name)
            counts = {doc: term_counts(sets[doc], cb, pcfg) for doc in sorted(sets)}
            idf = corpus_idf(sets, cb, pcfg)
            _save_idf(_idf_path(cfg, name), idf)
            vectors = {doc: tfidf_weight(c, idf) for doc, c in counts.items()}
            index = build_inverted(
                vectors, k=bovw_vocabulary_size(cb, pcfg),
                feature_id=pcfg.feature, normalization="tfidf", seed=cfg.seed,
            )
        save_index(index, _index_path(cfg, name))
        print(f"indexed {name}: {index.n_docs} docs")
    return 0


def _query_vector(cfg, name, pcfg, img):
    """Query-side representation for one image under a pipeline."""
    if pcfg.is_dense:
        return extract_dense(img, pcfg).values
    cb = load_codebook(_codebook_path(cfg, name))
    idf = _load_idf(_idf_path(cfg, name))
    dset = extract_descriptor_set(img, pcfg)
    return tfidf_weight(term_counts(dset, cb, pcfg), idf)


def cmd_query(args) -> int:
    cfg = load_config(args.config)
    if args.pipeline not in cfg.pipelines:
        raise CliError(f"unknown pipeline {args.pipeline!r}", USAGE_ERROR)
    pcfg = cfg.pipelines[args.pipeline]
    path = _index_path(cfg, args.pipeline)
    if not os.path.isfile(path):
        raise CliError(f"missing index {path}; run index first")
    index = load_index(path)
    try:
        img = load_image(args.image)
    except (LogoSearchError, OSError) as exc:
        raise CliError(f"cannot read query image: {exc}") from exc
    q = _query_vector(cfg, args.pipeline, pcfg, img)
    if isinstance(index, InvertedIndex):
        ranking = index.query(q, top_m=args.top_m)
    else:
        A = hsv72_similarity_matrix() if pcfg.resolved_metric == "quadratic" else None
        ranking = index.query(q, metric=pcfg.resolved_metric, top_m=args.top_m, A=A)
    for doc, score in zip(ranking.doc_ids, ranking.scores):
        print(f"{doc}\t{score:.6f}")
    return 0


def _load_manifest(cfg) -> list[QueryGroup]:
    if not cfg.manifest:
        raise CliError("config has no manifest path")
    members: dict[str, list[str]] = {}
    manifest_dir = os.path.dirname(os.path.abspath(cfg.manifest))
    with open(cfg.manifest, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:2] != ["group_id", "image_path"]:
            raise CliError(f"manifest {cfg.manifest} must start with group_id,image_path")
        for group_id, image_path in reader:
            resolved = os.path.normpath(os.path.join(manifest_dir, image_path))
            image_id = os.path.relpath(resolved, cfg.queries).replace(os.sep, "/")
            if image_id.startswith(".."):
                raise CliError(f"manifest path {image_path} is outside the queries dir")
            members.setdefault(group_id, []).append(image_id)
    return [QueryGroup(gid, ids) for gid, ids in sorted(members.items())]


def _query_features(cfg, name, pcfg, cb=None, idf=None):
    """Per-query-image representations from the extracted artifacts."""
    if pcfg.is_dense:
        path = os.path.join(_features_dir(cfg, name), "queries.tmf")
        if not os.path.isfile(path):
            raise CliError(f"missing {path}; run extract first")
        _fid, ids, matrix = read_feature_matrix(path)
        return {i: matrix[j].astype(np.float64) for j, i in enumerate(ids)}
    root = os.path.join(_features_dir(cfg, name), "queries")
    if not os.path.isdir(root):
        raise CliError(f"missing {root}; run extract first")
    out = {}
    for dirpath, _dirs, files in os.walk(root):
        for fname in sorted(files):
            if fname.endswith(".tmf"):
                full = os.path.join(dirpath, fname)
                image_id = os.path.relpath(full, root)[: -len(".tmf")].replace(os.sep, "/")
                dset = read_descriptor_set(full)
                out[image_id] = tfidf_weight(term_counts(dset, cb, pcfg), idf)
    return out


def _write_report(cfg, name: str, report: EvalReport) -> None:
    os.makedirs(_reports_dir(cfg), exist_ok=True)
    with open(os.path.join(_reports_dir(cfg), f"{name}.csv"), "w", newline="") as fh:
        fh.write(f"# config {cfg.config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(["query_id", "group_id", "rank", "normalized_rank"])
        for row in report.results:
            writer.writerow(
                [row.query_id, row.group_id, f"{row.avg_rank:.4f}", f"{row.norm_rank:.6f}"]
            )
    with open(os.path.join(_reports_dir(cfg), f"{name}_pr.csv"), "w", newline="") as fh:
        fh.write(f"# config {cfg.config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(["recall", "precision"])
        for recall, precision in report.pr_curve:
            writer.writerow([f"{recall:.2f}", f"{precision:.6f}"])


def _evaluate_pipeline(cfg, name, pcfg, groups):
    """Report plus per-(group, query) tie-averaged rank maps (for fusion)."""
    path = _index_path(cfg, name)
    if not os.path.isfile(path):
        raise CliError(f"missing index {path}; run index first")
    index = load_index(path)
    if isinstance(index, InvertedIndex):
        cb = load_codebook(_codebook_path(cfg, name))
        idf = _load_idf(_idf_path(cfg, name))
        features = _query_features(cfg, name, pcfg, cb, idf)
    else:
        features = _query_features(cfg, name, pcfg)
    metric = pcfg.resolved_metric
    A = hsv72_similarity_matrix() if metric == "quadratic" else None

    results = []
    rank_maps: dict[str, dict[str, float]] = {}
    for group in groups:
        missing = [m for m in group.members if m not in features]
        if missing:
            raise CliError(f"pipeline {name!r} lacks features for {missing}")
        rankings = injection_rankings(group, index, features, metric=metric, A=A)
        for q in group.members:
            results.append(result_from_ranking(group, q, rankings[q]))
            rank_maps[q] = resolve_ties(rankings[q])
    return EvalReport.from_results(results), rank_maps


def cmd_evaluate(args) -> int:
    cfg = load_config(args.config)
    groups = _load_manifest(cfg)
    if not cfg.queries:
        raise CliError("config has no queries path")

    summaries = []
    all_rank_maps: dict[str, dict[str, dict[str, float]]] = {}
    for name in sorted(cfg.pipelines):
        report, rank_maps = _evaluate_pipeline(cfg, name, cfg.pipelines[name], groups)
        all_rank_maps[name] = rank_maps
        _write_report(cfg, name, report)
        summaries.append((name, report))
        print(f"evaluated {name}: normalized rank "
              f"{report.mean_norm_rank:.4f} +- {report.std_norm_rank:.4f}")

    for fname, inputs in sorted(cfg.fusions.items()):
        results = []
        for group in groups:
            for q in group.members:
                fused = irp_fuse([all_rank_maps[p][q] for p in inputs], query_id=q)
                results.append(result_from_ranking(group, q, fused))
        report = EvalReport.from_results(results)
        _write_report(cfg, f"fusion_{fname}", report)
        summaries.append((f"fusion_{fname}", report))
        print(f"evaluated fusion {fname}: normalized rank "
              f"{report.mean_norm_rank:.4f} +- {report.std_norm_rank:.4f}")

    lines = [f"# config {cfg.config_hash}",
             f"{'pipeline':24s} {'Average rank':>22s}   {'Normalized average rank':>26s}"]
    for name, report in summaries:
        lines.append(
            f"{name:24s} {report.mean_rank:12.4f} +- {report.std_rank:6.4f}   "
            f"{report.mean_norm_rank:14.6f} +- {report.std_norm_rank:8.6f}"
        )
    summary = "\n".join(lines) + "\n"
    with open(os.path.join(_reports_dir(cfg), "summary.txt"), "w") as fh:
        fh.write(summary)
    print(summary, end="")
    return 0


def _read_ranking_csv(path: str) -> dict[str, float]:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise CliError(f"empty ranking file {path}")
    header = rows[0]
    try:
        doc_col = header.index("doc_id")
        rank_col = header.index("rank")
    except ValueError as exc:
        raise CliError(f"{path} needs doc_id and rank columns") from exc
    return {row[doc_col]: float(row[rank_col]) for row in rows[1:]}


def cmd_fuse(args) -> int:
    if len(args.rankings) < 2:
        raise CliError("fuse needs at least two ranking files", USAGE_ERROR)
    maps = [_read_ranking_csv(p) for p in args.rankings]
    try:
        fused = irp_fuse(maps)
    except LogoSearchError as exc:
        raise CliError(str(exc)) from exc
    averaged = resolve_ties(fused)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doc_id", "score", "rank"])
        for doc, score in zip(fused.doc_ids, fused.scores):
            writer.writerow([doc, f"{score:.6f}", f"{averaged[str(doc)]:.4f}"])
    print(f"fused {len(args.rankings)} rankings over {len(fused)} docs into {args.out}")
    return 0


def cmd_import_features(args) -> int:
    cfg = load_config(args.config)
    try:
        index = import_external_features(args.file)
    except LogoSearchError as exc:
        raise CliError(str(exc)) from exc
    query_ids: set[str] = set()
    if cfg.manifest and cfg.queries:
        query_ids = {m for g in _load_manifest(cfg) for m in g.members}
    corpus_rows = {d: index.matrix[i] for i, d in enumerate(index.doc_ids) if d not in query_ids}
    query_rows = {d: index.matrix[i] for i, d in enumerate(index.doc_ids) if d in query_ids}

    os.makedirs(os.path.join(cfg.output, "indexes"), exist_ok=True)
    trimmed = build_dense(corpus_rows, index.feature_id, normalization="none", seed=cfg.seed)
    save_index(trimmed, _index_path(cfg, args.pipeline))
    if query_rows:
        out_dir = _features_dir(cfg, args.pipeline)
        os.makedirs(out_dir, exist_ok=True)
        ids = sorted(query_rows)
        write_feature_matrix(
            os.path.join(out_dir, "queries.tmf"), index.feature_id, ids,
            np.stack([query_rows[i] for i in ids]),
        )
    print(f"imported {trimmed.n_docs} corpus rows"
          + (f" and {len(query_rows)} query rows" if query_rows else ""))
    return 0


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logosearch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic benchmark corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--text-only", type=int, default=63)
    p.add_argument("--figure-only", type=int, default=2)
    p.add_argument("--combined", type=int, default=34)
    p.add_argument("--groups", type=int, default=10)
    p.add_argument("--members", type=int, default=3)
    p.add_argument("--canvas", type=int, default=128)
    p.add_argument("--no-scale", action="store_true")
    p.add_argument("--no-rotation", action="store_true")
    p.add_argument("--contrast-inversion", action="store_true")
    p.add_argument("--text-contamination", action="store_true")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("extract", help="extract features for corpus and queries")
    p.add_argument("--config", required=True)
    p.add_argument("--strip-text", action="store_true",
                   help="filter keypoints inside detected text boxes")
    p.add_argument("--export-boxes", default="",
                   help="also write detected text boxes to this CSV")
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("train-codebook", help="train k-means codebooks for BoVW pipelines")
    p.add_argument("--config", required=True)
    p.add_argument("--pipeline", default="")
    p.set_defaults(fn=cmd_train_codebook)

    p = sub.add_parser("index", help="build dense or inverted indexes")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_index)

    p = sub.add_parser("query", help="rank the corpus against one image")
    p.add_argument("--config", required=True)
    p.add_argument("--pipeline", required=True)
    p.add_argument("--top-m", type=int, default=10)
    p.add_argument("image")
    p.set_defaults(fn=cmd_query)

    p = sub.add_parser("evaluate", help="run the query-injection benchmark")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("fuse", help="IRP-fuse ranking CSV files")
    p.add_argument("--out", required=True)
    p.add_argument("rankings", nargs="+")
    p.set_defaults(fn=cmd_fuse)

    p = sub.add_parser("import-features", help="import an external feature matrix")
    p.add_argument("--config", required=True)
    p.add_argument("--pipeline", required=True)
    p.add_argument("file")
    p.set_defaults(fn=cmd_import_features)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except LogoSearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
