import random
from itertools import product

import pytest

from ocrpost.lattice import CandidateCell, EojeolLattice, SentenceLattice
from ocrpost.morph import MorphChain, MorphLexicon, build_lexicon


def cell(*pairs):
    return CandidateCell(tuple(pairs))


def eojeol(*cells):
    return EojeolLattice(tuple(cells))


def sentence(*eojeols):
    return SentenceLattice(tuple(eojeols))


def compositions(n):
    """All ways to split n positions into contiguous non-empty segments."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def brute_force_analyze(lexicon: MorphLexicon, eo: EojeolLattice):
    """Oracle: enumerate candidate strings x segmentations x categories,
    keep connectable full covers. Returns a set of comparable chain keys."""
    cells = eo.cells
    n = len(cells)
    found = set()
    for choice in product(*[range(len(c.pairs)) for c in cells]):
        syms = tuple(cells[i].pairs[choice[i]][0] for i in range(n))
        dist = sum(cells[i].pairs[choice[i]][1] for i in range(n))
        for seg in compositions(n):
            parts = []
            pos = 0
            for length in seg:
                parts.append(syms[pos : pos + length])
                pos += length
            cat_options = [sorted(lexicon.lookup(p)) for p in parts]
            if any(not opts for opts in cat_options):
                continue
            for cats in product(*cat_options):
                if all(
                    (cats[i], cats[i + 1]) in lexicon.connectivity
                    for i in range(len(cats) - 1)
                ):
                    morphemes = tuple(zip(parts, cats))
                    found.add((morphemes, syms, tuple(choice), dist))
    return found


def chain_as_key(chain: MorphChain):
    return (chain.morphemes, chain.symbols, chain.ranks, chain.total_distance)


def random_morph_instance(rng: random.Random):
    """A small random lexicon plus eojeol lattice for oracle comparison."""
    alphabet = ["a", "b", "c", "d", "e"]
    cats = ["N", "J", "V", "E"][: rng.randint(2, 4)]
    tag_map = {c: t for c, t in zip(cats, ["MC", "jC", "D", "mT"])}
    entries = []
    for _ in range(rng.randint(1, 12)):
        length = rng.randint(1, 3)
        surface = tuple(rng.choice(alphabet) for _ in range(length))
        entries.append((surface, rng.choice(cats)))
    pairs = [
        (a, b)
        for a in cats
        for b in cats
        if rng.random() < 0.4
    ]
    lexicon = build_lexicon(entries, pairs, tag_map)
    n = rng.randint(1, 5)
    cells = []
    for _ in range(n):
        k = rng.randint(1, 3)
        symbols = rng.sample(alphabet, k)
        dists = sorted(rng.randint(0, 99) for _ in range(k))
        cells.append(CandidateCell(tuple(zip(symbols, dists))))
    return lexicon, EojeolLattice(tuple(cells))


@pytest.fixture(scope="session")
def demo_resources():
    from ocrpost.cli import demo_data_dir, load_resources
    from ocrpost.config import load_config
    from ocrpost.cooccur import save_cooccurrence_model
    from ocrpost.morph import load_lexicon
    from ocrpost.tagger import save_tag_model
    from ocrpost.train import load_corpus, train_cooccurrence, train_tag_model
    import tempfile
    from pathlib import Path

    data = demo_data_dir()
    cfg = load_config(data / "config.cfg")
    corpus = load_corpus(cfg.path("corpus"))
    lexicon = load_lexicon(
        cfg.path("dictionary"), cfg.path("connectivity"), cfg.path("tagmap")
    )
    tag_model = train_tag_model(corpus, cfg.lambdas(), cfg.eps_lex)
    cooc = train_cooccurrence(
        corpus,
        lexicon,
        mi_lambdas=cfg.mi_lambdas(),
        gf_threshold=cfg.gf_threshold,
        min_pair_freq=cfg.min_pair_freq,
    )
    with tempfile.TemporaryDirectory() as tmp:
        save_tag_model(Path(tmp) / "tag_model.tsv", tag_model)
        save_cooccurrence_model(Path(tmp) / "cooccur_model.tsv", cooc)
        cfg.tag_model = str(Path(tmp) / "tag_model.tsv")
        cfg.cooccur_model = str(Path(tmp) / "cooccur_model.tsv")
        yield cfg, load_resources(cfg)
