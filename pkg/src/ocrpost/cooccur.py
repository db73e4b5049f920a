"""Co-occurrence constraints and final eojeol disambiguation.

Word association is measured by mutual information over within-sentence
co-occurrence counts, smoothed with raw word frequencies so unseen pairs
still rank. Disambiguation scores the chains left ambiguous by n-best
tagging against the already-fixed positions' content words and falls back
to the recognition device's distances and candidate order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .lattice import FormatError
from .morph import MorphChain, MorphLexicon, chain_key
from .tagger import TaggedPath

NOMINAL_TAGS = frozenset({"MC", "MP", "MD", "T"})
PREDICATE_TAGS = frozenset({"D", "H"})

NEG_INFINITE = float("-inf")

DEFAULT_MI_LAMBDAS = (0.01, 1.0)
DEFAULT_GF_THRESHOLD = 0.5
DEFAULT_MIN_PAIR_FREQ = 2


class UnknownWordError(KeyError):
    """Raised when an association query names a word with zero frequency."""


@dataclass
class CooccurrenceModel:
    """Word/pair frequencies with the pruning and smoothing parameters."""

    word_freq: dict[str, int] = field(default_factory=dict)
    pair_freq: dict[frozenset, int] = field(default_factory=dict)
    n_sentences: int = 0
    roles: dict[str, str] = field(default_factory=dict)  # word -> "pred" | "nom"
    mi_lambdas: tuple[float, float] = DEFAULT_MI_LAMBDAS
    gf_threshold: float = DEFAULT_GF_THRESHOLD
    min_pair_freq: int = DEFAULT_MIN_PAIR_FREQ

    def freq(self, word: str) -> int:
        return self.word_freq.get(word, 0)

    def pair(self, x: str, y: str) -> int:
        return self.pair_freq.get(frozenset((x, y)), 0)

    def partners(self, word: str) -> set[str]:
        out = set()
        for pair in self.pair_freq:
            if word in pair:
                out |= pair - {word}
        return out

    def association(self, x: str, y: str) -> float:
        """Total-scoring variant used during disambiguation.

        Unknown words contribute zero frequency and absent pairs drop the
        mutual-information term, so the score is always finite.
        """
        l1, l2 = self.mi_lambdas
        score = l1 * (self.freq(x) + self.freq(y))
        fx, fy, fxy = self.freq(x), self.freq(y), self.pair(x, y)
        if fx > 0 and fy > 0 and fxy > 0:
            score += l2 * math.log2(self.n_sentences * fxy / (fx * fy))
        return score


def generalization_factor(model: CooccurrenceModel, word: str) -> float:
    """Distinct co-occurring partners divided by the word's own frequency."""
    f = model.freq(word)
    if f == 0:
        raise UnknownWordError(word)
    return len(model.partners(word)) / f


def mutual_information(model: CooccurrenceModel, x: str, y: str) -> float:
    """log2(N * f(x,y) / (f(x) f(y))); -inf when the pair never co-occurs."""
    fx, fy = model.freq(x), model.freq(y)
    if fx == 0:
        raise UnknownWordError(x)
    if fy == 0:
        raise UnknownWordError(y)
    fxy = model.pair(x, y)
    if fxy == 0:
        return NEG_INFINITE
    return math.log2(model.n_sentences * fxy / (fx * fy))


def smoothed_association(model: CooccurrenceModel, x: str, y: str) -> float:
    """Frequency-smoothed association; unseen pairs keep the frequency term."""
    l1, l2 = model.mi_lambdas
    mi = mutual_information(model, x, y)
    score = l1 * (model.freq(x) + model.freq(y))
    if mi != NEG_INFINITE:
        score += l2 * mi
    return score


def content_words(chain: MorphChain, lexicon: MorphLexicon) -> list[tuple[str, str]]:
    """(word, role) for each nominal or predicate morpheme in a chain."""
    out = []
    for surface, category in chain.morphemes:
        tag = lexicon.tag_of(category)
        if tag in NOMINAL_TAGS:
            out.append((".".join(surface), "nom"))
        elif tag in PREDICATE_TAGS:
            out.append((".".join(surface), "pred"))
    return out


def extract_patterns(
    sentences: Iterable[Sequence[tuple[str, str]]],
    mi_lambdas: tuple[float, float] = DEFAULT_MI_LAMBDAS,
    gf_threshold: float = DEFAULT_GF_THRESHOLD,
    min_pair_freq: int = DEFAULT_MIN_PAIR_FREQ,
) -> CooccurrenceModel:
    """Count (predicate, nominal) and (nominal, nominal) pairs per sentence.

    Words whose generalization factor exceeds the threshold are dropped
    from the pattern set (they co-occur with too many different words to
    carry meaning), as are pairs seen fewer than min_pair_freq times.
    """
    word_freq: dict[str, int] = {}
    raw_pairs: dict[frozenset, int] = {}
    roles: dict[str, str] = {}
    n = 0
    for sent in sentences:
        n += 1
        for word, role in sent:
            if role not in ("pred", "nom"):
                raise ValueError(f"unknown role {role!r} for word {word!r}")
            word_freq[word] = word_freq.get(word, 0) + 1
            roles.setdefault(word, role)
        for i in range(len(sent)):
            for j in range(i + 1, len(sent)):
                (wx, rx), (wy, ry) = sent[i], sent[j]
                if wx == wy:
                    continue
                if rx == "pred" and ry == "pred":
                    continue  # only predicate-nominal and nominal-nominal
                key = frozenset((wx, wy))
                raw_pairs[key] = raw_pairs.get(key, 0) + 1

    partners: dict[str, set[str]] = {}
    for pair in raw_pairs:
        a, b = tuple(pair)
        partners.setdefault(a, set()).add(b)
        partners.setdefault(b, set()).add(a)
    too_general = {
        w
        for w, ps in partners.items()
        if len(ps) / word_freq[w] > gf_threshold
    }
    pair_freq = {
        pair: c
        for pair, c in raw_pairs.items()
        if c >= min_pair_freq and not (pair & too_general)
    }
    return CooccurrenceModel(
        word_freq=word_freq,
        pair_freq=pair_freq,
        n_sentences=n,
        roles=roles,
        mi_lambdas=mi_lambdas,
        gf_threshold=gf_threshold,
        min_pair_freq=min_pair_freq,
    )


@dataclass(frozen=True)
class SentenceHypothesis:
    """One chosen chain per position with the deciding mechanism recorded.

    Provenance per position: "agreed" (all n-best paths shared the chain),
    "cooccur" (association score decided), "fallback" (distance and
    candidate order decided).
    """

    chains: tuple[MorphChain, ...]
    provenance: tuple[str, ...]

    def surfaces(self) -> tuple[str, ...]:
        return tuple(chain.surface for chain in self.chains)


def _fallback_key(chain: MorphChain):
    return (chain.total_distance, chain.ranks, chain.surface, chain.categories)


def resolve(
    model: CooccurrenceModel,
    positions: Sequence[Sequence[MorphChain]],
    paths: Sequence[TaggedPath],
    lexicon: MorphLexicon,
) -> SentenceHypothesis:
    """Pick a single chain per position from the n-best tagged paths.

    Positions on which every path agrees are fixed. Each remaining chain
    is scored by its best association between its content words and the
    fixed positions' content words; score ties (including the no-signal
    case) fall back to minimum total distance, then candidate order.
    """
    if not paths:
        raise ValueError("need at least one tagged path")
    npos = len(positions)
    for path in paths:
        if len(path.choices) != npos:
            raise ValueError("tagged paths disagree on sentence length")

    surviving: list[dict[tuple, MorphChain]] = [{} for _ in range(npos)]
    for path in paths:
        for pos, ci in enumerate(path.choices):
            chain = positions[pos][ci]
            surviving[pos].setdefault(chain_key(chain), chain)

    fixed_words: set[str] = set()
    for pos in range(npos):
        if len(surviving[pos]) == 1:
            (chain,) = surviving[pos].values()
            fixed_words.update(w for w, _ in content_words(chain, lexicon))

    chosen: list[MorphChain] = []
    provenance: list[str] = []
    for pos in range(npos):
        chains = sorted(surviving[pos].values(), key=_fallback_key)
        if len(chains) == 1:
            chosen.append(chains[0])
            provenance.append("agreed")
            continue
        scored = []
        for chain in chains:
            words = [w for w, _ in content_words(chain, lexicon)]
            score = max(
                (model.association(w, fw) for w in words for fw in fixed_words),
                default=NEG_INFINITE,
            )
            scored.append((score, chain))
        best = max(s for s, _ in scored)
        leaders = [c for s, c in scored if s == best]
        if len(leaders) == 1 and best != NEG_INFINITE:
            chosen.append(leaders[0])
            provenance.append("cooccur")
        else:
            ties = leaders if best != NEG_INFINITE else chains
            chosen.append(min(ties, key=_fallback_key))
            provenance.append("fallback")
    return SentenceHypothesis(chains=tuple(chosen), provenance=tuple(provenance))


# ---------------------------------------------------------------------------
# Model file format: sectioned TSV


def save_cooccurrence_model(path, model: CooccurrenceModel) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("[META]\n")
        fh.write(f"N\t{model.n_sentences}\n")
        fh.write(f"lambdas\t{model.mi_lambdas[0]!r}\t{model.mi_lambdas[1]!r}\n")
        fh.write(f"gf_threshold\t{model.gf_threshold!r}\n")
        fh.write(f"min_pair_freq\t{model.min_pair_freq}\n")
        fh.write("[WF]\n")
        for word in sorted(model.word_freq):
            fh.write(f"{word}\t{model.word_freq[word]}\n")
        fh.write("[PF]\n")
        for a, b in sorted(tuple(sorted(p)) for p in model.pair_freq):
            fh.write(f"{a}\t{b}\t{model.pair_freq[frozenset((a, b))]}\n")
        fh.write("[ROLE]\n")
        for word in sorted(model.roles):
            fh.write(f"{word}\t{model.roles[word]}\n")


def load_cooccurrence_model(path) -> CooccurrenceModel:
    meta: dict[str, list[str]] = {}
    word_freq: dict[str, int] = {}
    pair_freq: dict[frozenset, int] = {}
    roles: dict[str, str] = {}
    section = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1]
                continue
            parts = line.split("\t")
            where = f"{path}: line {lineno}"
            try:
                if section == "META":
                    meta[parts[0]] = parts[1:]
                elif section == "WF":
                    word_freq[parts[0]] = int(parts[1])
                elif section == "PF":
                    pair_freq[frozenset((parts[0], parts[1]))] = int(parts[2])
                elif section == "ROLE":
                    roles[parts[0]] = parts[1]
                else:
                    raise FormatError(f"{where}: data outside any known section")
            except (IndexError, ValueError) as exc:
                raise FormatError(f"{where}: {exc}") from exc
    try:
        return CooccurrenceModel(
            word_freq=word_freq,
            pair_freq=pair_freq,
            n_sentences=int(meta["N"][0]),
            roles=roles,
            mi_lambdas=tuple(float(x) for x in meta["lambdas"]),
            gf_threshold=float(meta["gf_threshold"][0]),
            min_pair_freq=int(meta["min_pair_freq"][0]),
        )
    except KeyError as exc:
        raise FormatError(f"{path}: missing META field {exc}") from exc
