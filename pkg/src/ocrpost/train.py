"""Model training from a tagged corpus.

The corpus is plain text: one sentence per line, eojeols as
`surface/TAG` tokens where the surface is a `.`-joined symbol sequence
and the tag a `+`-joined concatenation of morpheme tags.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import cooccur
from .lattice import CandidateCell, EojeolLattice, FormatError
from .morph import TAGSET, MorphLexicon, analyze_eojeol, chain_tag, parse_surface
from .tagger import BOS, DEFAULT_EPS_LEX, DEFAULT_LAMBDAS, TagModel, check_lambdas


@dataclass(frozen=True)
class TaggedCorpus:
    sentences: tuple[tuple[tuple[str, str], ...], ...]  # ((surface, tag), ...)

    def __len__(self) -> int:
        return len(self.sentences)

    def eojeol_count(self) -> int:
        return sum(len(s) for s in self.sentences)


def check_tag(tag: str, where: str) -> None:
    if not tag:
        raise FormatError(f"{where}: empty tag")
    for part in tag.split("+"):
        if part not in TAGSET:
            raise FormatError(f"{where}: unknown morpheme tag {part!r} in {tag!r}")


def parse_corpus(lines, name: str = "<corpus>") -> TaggedCorpus:
    sentences = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        sent = []
        for col, token in enumerate(line.split(), 1):
            where = f"{name}: line {lineno}, token {col}"
            surface, sep, tag = token.rpartition("/")
            if not sep or not surface:
                raise FormatError(f"{where}: expected surface/TAG, got {token!r}")
            parse_surface(surface)
            check_tag(tag, where)
            sent.append((surface, tag))
        sentences.append(tuple(sent))
    if not sentences:
        raise FormatError(f"{name}: corpus contains no sentences")
    return TaggedCorpus(tuple(sentences))


def load_corpus(path) -> TaggedCorpus:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh, str(path))


def save_corpus(path, corpus: TaggedCorpus) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sent in corpus.sentences:
            fh.write(" ".join(f"{surface}/{tag}" for surface, tag in sent) + "\n")


def train_tag_model(
    corpus: TaggedCorpus,
    lambdas: Sequence[float] = DEFAULT_LAMBDAS,
    eps_lex: float = DEFAULT_EPS_LEX,
) -> TagModel:
    """Count uni/bi/trigram eojeol tags with BOS padding, plus lexical pairs.

    Bigram counts are the trigram contexts of the padded sequence, so every
    observed trigram marginalizes exactly onto its bigram; unigram counts
    cover real tags only and normalize the smoothing prior.
    """
    check_lambdas(tuple(lambdas))
    unigram: dict[str, int] = {}
    bigram: dict[tuple[str, str], int] = {}
    trigram: dict[tuple[str, str, str], int] = {}
    lexical: dict[tuple[str, str], int] = {}
    total = 0
    for sent in corpus.sentences:
        tags = [tag for _, tag in sent]
        for surface, tag in sent:
            unigram[tag] = unigram.get(tag, 0) + 1
            lexical[(surface, tag)] = lexical.get((surface, tag), 0) + 1
            total += 1
        padded = [BOS, BOS] + tags
        for i in range(len(tags)):
            ctx = (padded[i], padded[i + 1])
            bigram[ctx] = bigram.get(ctx, 0) + 1
            tri = (padded[i], padded[i + 1], padded[i + 2])
            trigram[tri] = trigram.get(tri, 0) + 1
    return TagModel(
        unigram=unigram,
        bigram=bigram,
        trigram=trigram,
        lexical=lexical,
        total_tags=total,
        lambdas=tuple(lambdas),
        eps_lex=eps_lex,
    )


def segment_eojeol(lexicon: MorphLexicon, surface: str, tag: str):
    """Morphologically analyze a clean corpus eojeol; None when no chain
    carries the annotated tag."""
    symbols = parse_surface(surface)
    eojeol = EojeolLattice(tuple(CandidateCell(((sym, 0),)) for sym in symbols))
    for chain in analyze_eojeol(lexicon, eojeol):
        if chain_tag(chain, lexicon) == tag:
            return chain
    return None


def train_cooccurrence(
    corpus: TaggedCorpus,
    lexicon: MorphLexicon,
    mi_lambdas=cooccur.DEFAULT_MI_LAMBDAS,
    gf_threshold: float = cooccur.DEFAULT_GF_THRESHOLD,
    min_pair_freq: int = cooccur.DEFAULT_MIN_PAIR_FREQ,
) -> cooccur.CooccurrenceModel:
    """Extract co-occurrence patterns over the corpus's content morphemes.

    Each eojeol is segmented with the lexicon under its annotated tag;
    nominal and predicate morphemes become the pattern words. Eojeols the
    lexicon cannot segment contribute nothing.
    """
    sentences = []
    for sent in corpus.sentences:
        words: list[tuple[str, str]] = []
        for surface, tag in sent:
            chain = segment_eojeol(lexicon, surface, tag)
            if chain is not None:
                words.extend(cooccur.content_words(chain, lexicon))
        sentences.append(words)
    return cooccur.extract_patterns(
        sentences,
        mi_lambdas=mi_lambdas,
        gf_threshold=gf_threshold,
        min_pair_freq=min_pair_freq,
    )
