#!/usr/bin/env python3
"""Synthetic toy-language benchmark for the full post-processing cascade.

Generates a training corpus and a disjoint test set from the built-in toy
language, corrupts the test set with the ring-confusion device, runs the
pipeline, and prints the evaluation report. The restriction thresholds
are tuned to this device's distance distribution, not to the bundled
example device.
"""

import argparse
import sys
import time

from ocrpost import evaluate as evalkit
from ocrpost import pipeline, toylang
from ocrpost.lattice import SelectionConfig
from ocrpost.simulate import corrupt_corpus, derive_similar_table
from ocrpost.train import train_cooccurrence, train_tag_model


def build_resources(lang, n_train, train_seed, selection, nbest):
    corpus = toylang.generate_corpus(lang, n_train, seed=train_seed)
    lexicon = lang.lexicon()
    return pipeline.Resources(
        lexicon=lexicon,
        tag_model=train_tag_model(corpus),
        cooccur_model=train_cooccurrence(corpus, lexicon, gf_threshold=2.0),
        similar_table=derive_similar_table(
            toylang.confusion_model(lang), top_m=1
        ),
        selection=selection,
        nbest=nbest,
    )


def run_benchmark(
    n_train=2000,
    n_test=1800,
    train_seed=11,
    test_seed=99,
    device_seed=5,
    p_err=0.3,
    p_in_k=0.9,
    theta1=500.0,
    theta2=8.0,
    nbest=5,
    lang_seed=7,
):
    lang = toylang.build_language(seed=lang_seed)
    selection = SelectionConfig(theta1=theta1, theta2=theta2)
    res = build_resources(lang, n_train, train_seed, selection, nbest)

    test_corpus = toylang.generate_corpus(lang, n_test, seed=test_seed)
    truths = toylang.corpus_truth(test_corpus)
    device = toylang.confusion_model(
        lang, p_err=p_err, p_in_k=p_in_k, seed=device_seed
    )
    lattices = corrupt_corpus(truths, device)

    start = time.monotonic()
    results = pipeline.process_corpus(res, lattices)
    elapsed = time.monotonic() - start

    report = evalkit.evaluate(
        truths,
        lattices,
        [[c.symbols for c in r.chains] for r in results],
        stage_hypotheses=pipeline.collect_stage_hypotheses(results),
        provenance=[r.provenance for r in results],
    )
    return report, elapsed


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--train", type=int, default=2000)
    parser.add_argument("--test", type=int, default=1800)
    parser.add_argument("--p-err", type=float, default=0.3)
    parser.add_argument("--theta1", type=float, default=500.0)
    parser.add_argument("--theta2", type=float, default=8.0)
    parser.add_argument("--nbest", type=int, default=5)
    args = parser.parse_args(argv)

    report, elapsed = run_benchmark(
        n_train=args.train,
        n_test=args.test,
        p_err=args.p_err,
        theta1=args.theta1,
        theta2=args.theta2,
        nbest=args.nbest,
    )
    sys.stdout.write(report.to_text())
    print(f"pipeline_seconds  {elapsed:.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
