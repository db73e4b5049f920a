"""Command-line pipeline: train, simulate, postprocess, evaluate, demo."""

from __future__ import annotations

import argparse
import sys
from importlib import resources as importlib_resources
from pathlib import Path

from . import evaluate as evalkit
from . import pipeline, simulate, train
from .config import PipelineConfig, apply_overrides, load_config
from .cooccur import load_cooccurrence_model, save_cooccurrence_model
from .lattice import (
    FormatError,
    SelectionConfig,
    load_lattice_file,
    load_similar_table,
    save_lattice_file,
    save_similar_table,
)
from .morph import LexiconError, load_lexicon
from .tagger import load_tag_model, save_tag_model

USAGE_ERROR = 2
PROCESSING_ERROR = 1


def demo_data_dir() -> Path:
    return Path(importlib_resources.files("ocrpost").joinpath("data", "demo"))


def _load_lexicon(cfg: PipelineConfig):
    return load_lexicon(cfg.path("dictionary"), cfg.path("connectivity"), cfg.path("tagmap"))


def _confusion_model(cfg: PipelineConfig) -> simulate.ConfusionModel:
    return simulate.load_confusion_file(
        cfg.path("confusion"),
        k=cfg.k,
        p_err=cfg.p_err,
        p_in_k=cfg.p_in_k,
        base_range=(cfg.base_lo, cfg.base_hi),
        incr_range=(cfg.incr_lo, cfg.incr_hi),
        seed=cfg.seed,
    )


def _similar_table(cfg: PipelineConfig):
    if cfg.has("similar_table"):
        return load_similar_table(cfg.path("similar_table"))
    if cfg.has("confusion"):
        return simulate.derive_similar_table(_confusion_model(cfg), cfg.derive_similar_top_m)
    raise FormatError("config must set similar_table or confusion")


def load_resources(cfg: PipelineConfig) -> pipeline.Resources:
    return pipeline.Resources(
        lexicon=_load_lexicon(cfg),
        tag_model=load_tag_model(cfg.path("tag_model")),
        cooccur_model=load_cooccurrence_model(cfg.path("cooccur_model")),
        similar_table=_similar_table(cfg),
        selection=SelectionConfig(cfg.theta1, cfg.theta2, cfg.supplement),
        nbest=cfg.nbest,
        chain_cap=cfg.chain_cap,
    )


def cmd_train(cfg: PipelineConfig, args) -> int:
    corpus = train.load_corpus(cfg.path("corpus"))
    lexicon = _load_lexicon(cfg)
    tag_model = train.train_tag_model(corpus, cfg.lambdas(), cfg.eps_lex)
    cooc = train.train_cooccurrence(
        corpus,
        lexicon,
        mi_lambdas=cfg.mi_lambdas(),
        gf_threshold=cfg.gf_threshold,
        min_pair_freq=cfg.min_pair_freq,
    )
    out_dir = Path(args.out_dir) if args.out_dir else cfg.base_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    tag_path = out_dir / Path(cfg.tag_model).name
    cooc_path = out_dir / Path(cfg.cooccur_model).name
    save_tag_model(tag_path, tag_model)
    save_cooccurrence_model(cooc_path, cooc)
    print(tag_path)
    print(cooc_path)
    return 0


def cmd_simulate(cfg: PipelineConfig, args) -> int:
    model = _confusion_model(cfg)
    truths = simulate.load_truth_file(args.truth)
    lattices = simulate.corrupt_corpus(truths, model)
    save_lattice_file(args.out, lattices)
    print(args.out)
    if args.similar_out:
        save_similar_table(
            args.similar_out, simulate.derive_similar_table(model, cfg.derive_similar_top_m)
        )
        print(args.similar_out)
    return 0


def cmd_postprocess(cfg: PipelineConfig, args) -> int:
    res = load_resources(cfg)
    lattices = load_lattice_file(args.lattice)
    results = pipeline.process_corpus(res, lattices)
    pipeline.save_hypotheses(args.out, results)
    print(args.out)
    if args.stages_out:
        pipeline.save_stage_hypotheses(args.stages_out, results)
        print(args.stages_out)
    return 0


def cmd_evaluate(cfg: PipelineConfig, args) -> int:
    truth = simulate.load_truth_file(args.truth)
    lattices = load_lattice_file(args.lattice)
    surfaces, provenance = pipeline.load_hypotheses(args.hypotheses)
    stages = pipeline.load_stage_hypotheses(args.stages) if args.stages else None
    report = evalkit.evaluate(
        truth, lattices, surfaces, stage_hypotheses=stages,
        provenance=provenance if provenance else None,
    )
    text_path = Path(f"{args.out_prefix}.txt")
    tsv_path = Path(f"{args.out_prefix}.tsv")
    text_path.write_text(report.to_text(), encoding="utf-8")
    tsv_path.write_text(report.to_tsv(), encoding="utf-8")
    if args.format == "text":
        sys.stdout.write(report.to_text())
    else:
        sys.stdout.write(report.to_tsv())
    print(text_path)
    print(tsv_path)
    return 0


def cmd_demo(args) -> int:
    data = demo_data_dir()
    cfg = load_config(data / "config.cfg")
    out_dir = Path(args.out_dir).resolve()
    out_dir.mkdir(parents=True, exist_ok=True)

    train_args = argparse.Namespace(out_dir=str(out_dir))
    cmd_train(cfg, train_args)
    cfg.tag_model = str(out_dir / Path(cfg.tag_model).name)
    cfg.cooccur_model = str(out_dir / Path(cfg.cooccur_model).name)

    res = load_resources(cfg)
    lattices = load_lattice_file(data / "lattice.txt")
    results = pipeline.process_corpus(res, lattices)
    hyp_path = out_dir / "hypotheses.txt"
    pipeline.save_hypotheses(hyp_path, results)

    truth = simulate.load_truth_file(data / "truth.txt")
    report = evalkit.evaluate(
        truth,
        lattices,
        [[chain.symbols for chain in r.chains] for r in results],
        stage_hypotheses=pipeline.collect_stage_hypotheses(results),
        provenance=[r.provenance for r in results],
    )
    print("corrected output:")
    for result in results:
        print(" ", result.surface_line())
        print("  stages:", " ".join(result.provenance))
    print()
    sys.stdout.write(report.to_text())
    print(hyp_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocrpost",
        description="Multi-level post-processing for syllable-based character recognition",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("-c", "--config", required=True, help="pipeline config file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key")

    p = sub.add_parser("train", help="train tagging and co-occurrence models")
    add_config(p)
    p.add_argument("--out-dir", help="directory for the model files")

    p = sub.add_parser("simulate", help="corrupt ground truth into a lattice")
    add_config(p)
    p.add_argument("truth", help="ground-truth text file")
    p.add_argument("--out", required=True, help="lattice output file")
    p.add_argument("--similar-out", help="also write the derived similar-character table")

    p = sub.add_parser("postprocess", help="correct a recognition lattice")
    add_config(p)
    p.add_argument("lattice", help="lattice input file")
    p.add_argument("--out", required=True, help="hypothesis output file")
    p.add_argument("--stages-out", help="also write per-stage ablation hypotheses")

    p = sub.add_parser("evaluate", help="score hypotheses against ground truth")
    add_config(p)
    p.add_argument("--truth", required=True)
    p.add_argument("--lattice", required=True)
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--stages", help="stage hypotheses from postprocess --stages-out")
    p.add_argument("--out-prefix", required=True, help="report files prefix")
    p.add_argument("--format", choices=("text", "tsv"), default="text")

    p = sub.add_parser("demo", help="run the bundled example end to end")
    p.add_argument("--out-dir", default="demo_out")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "demo":
            return cmd_demo(args)
        cfg = load_config(args.config)
        overrides = {}
        for item in args.set:
            key, sep, value = item.partition("=")
            if not sep:
                parser.error(f"--set expects KEY=VALUE, got {item!r}")
            overrides[key.strip()] = value.strip()
        apply_overrides(cfg, overrides)
        if args.command == "train":
            return cmd_train(cfg, args)
        if args.command == "simulate":
            return cmd_simulate(cfg, args)
        if args.command == "postprocess":
            return cmd_postprocess(cfg, args)
        if args.command == "evaluate":
            return cmd_evaluate(cfg, args)
        parser.error(f"unknown command {args.command!r}")
    except (FormatError, LexiconError, FileNotFoundError, evalkit.AlignmentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:  # processing failure
        print(f"processing failed: {exc}", file=sys.stderr)
        return PROCESSING_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
