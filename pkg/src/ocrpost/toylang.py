"""A small synthetic agglutinative language for desk-scale benchmarks.

Words are noun+particle or verb+ending eojeols over two-letter syllable
tokens. Verbs prefer a few specific nouns, so generated corpora contain
genuine collocations for the co-occurrence stage to exploit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .morph import MorphLexicon, build_lexicon
from .simulate import ConfusionModel
from .train import TaggedCorpus

CONSONANTS = "k n t m s r p h".split()
VOWELS = "a o i u e".split()

CATEGORY_TAGS = {"nc": "MC", "jc": "jC", "pv": "D", "ef": "mT"}
CONNECTIVITY = [("nc", "jc"), ("pv", "ef")]


@dataclass
class ToyLanguage:
    syllables: list[str]
    nouns: list[tuple[str, str]]
    verbs: list[tuple[str, str]]
    particles: list[str]
    endings: list[str]
    verb_prefs: dict[tuple[str, str], list[tuple[str, str]]]

    def lexicon(self) -> MorphLexicon:
        entries = (
            [(n, "nc") for n in self.nouns]
            + [(v, "pv") for v in self.verbs]
            + [((p,), "jc") for p in self.particles]
            + [((e,), "ef") for e in self.endings]
        )
        return build_lexicon(entries, CONNECTIVITY, dict(CATEGORY_TAGS))

    def lexicon_files(self):
        """(dictionary, connectivity, tagmap) rows for writing fixtures."""
        dict_rows = [
            (".".join(surface), cat)
            for surface, cat in (
                [(n, "nc") for n in self.nouns]
                + [(v, "pv") for v in self.verbs]
                + [((p,), "jc") for p in self.particles]
                + [((e,), "ef") for e in self.endings]
            )
        ]
        return dict_rows, list(CONNECTIVITY), dict(CATEGORY_TAGS)


def build_language(
    seed: int = 7, n_nouns: int = 18, n_verbs: int = 8,
    n_particles: int = 4, n_endings: int = 4,
) -> ToyLanguage:
    rng = random.Random(seed)
    syllables = [c + v for c in CONSONANTS for v in VOWELS]
    singles = rng.sample(syllables, n_particles + n_endings)
    particles = singles[:n_particles]
    endings = singles[n_particles:]
    words: set[tuple[str, str]] = set()
    while len(words) < n_nouns + n_verbs:
        words.add((rng.choice(syllables), rng.choice(syllables)))
    ordered = sorted(words)
    rng.shuffle(ordered)
    nouns = ordered[:n_nouns]
    verbs = ordered[n_nouns:]
    verb_prefs = {v: rng.sample(nouns, 3) for v in verbs}
    return ToyLanguage(
        syllables=syllables,
        nouns=nouns,
        verbs=verbs,
        particles=particles,
        endings=endings,
        verb_prefs=verb_prefs,
    )


def generate_sentence(lang: ToyLanguage, rng: random.Random) -> list[tuple[str, str]]:
    """One tagged sentence: 1..3 noun+particle eojeols then verb+ending."""
    verb = rng.choice(lang.verbs)
    prefs = lang.verb_prefs[verb]
    sent = []
    for _ in range(rng.randint(1, 3)):
        noun = rng.choice(prefs) if rng.random() < 0.8 else rng.choice(lang.nouns)
        surface = ".".join(noun + (rng.choice(lang.particles),))
        sent.append((surface, "MC+jC"))
    sent.append((".".join(verb + (rng.choice(lang.endings),)), "D+mT"))
    return sent


def generate_corpus(lang: ToyLanguage, n_sentences: int, seed: int = 11) -> TaggedCorpus:
    rng = random.Random(seed)
    return TaggedCorpus(
        tuple(tuple(generate_sentence(lang, rng)) for _ in range(n_sentences))
    )


def corpus_truth(corpus: TaggedCorpus) -> list[list[tuple[str, ...]]]:
    """Ground-truth symbol sequences for a generated corpus."""
    return [
        [tuple(surface.split(".")) for surface, _ in sent]
        for sent in corpus.sentences
    ]


def confusion_model(lang: ToyLanguage, **params) -> ConfusionModel:
    """Ring-structured confusions: each syllable with its index neighbors."""
    n = len(lang.syllables)
    confusions = {}
    for i, sym in enumerate(lang.syllables):
        alts = [(sym, 1.0)]
        for off, w in ((1, 0.5), (-1, 0.5), (2, 0.3), (-2, 0.3)):
            alts.append((lang.syllables[(i + off) % n], w))
        confusions[sym] = tuple(alts)
    return ConfusionModel(confusions=confusions, **params)
