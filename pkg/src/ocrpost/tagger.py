"""Trigram hidden-Markov eojeol tagging with n-best Viterbi search.

Eojeol tags are `+`-joined morpheme tags. The contextual model is an
interpolated mixture of unigram, bigram, and trigram maximum-likelihood
estimates; the lexical model is a raw ratio with a constant floor for
unseen (surface, tag) pairs. Scoring is done in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from .lattice import FormatError

BOS = "<s>"

DEFAULT_LAMBDAS = (0.1, 0.3, 0.6)
DEFAULT_EPS_LEX = 1e-6


def _log(p: float) -> float:
    return math.log(p) if p > 0.0 else float("-inf")


@dataclass
class TagModel:
    """Frequency tables and interpolation weights for the tagging model.

    `bigram` counts (t_{i-2}, t_{i-1}) trigram contexts over the BOS-padded
    tag sequence, so trigram counts marginalize exactly onto it; `unigram`
    counts real tags only (BOS padding is excluded from the prior).
    """

    unigram: dict[str, int] = field(default_factory=dict)
    bigram: dict[tuple[str, str], int] = field(default_factory=dict)
    trigram: dict[tuple[str, str, str], int] = field(default_factory=dict)
    lexical: dict[tuple[str, str], int] = field(default_factory=dict)
    total_tags: int = 0
    lambdas: tuple[float, float, float] = DEFAULT_LAMBDAS
    eps_lex: float = DEFAULT_EPS_LEX
    bos: str = BOS

    def __post_init__(self) -> None:
        check_lambdas(self.lambdas)
        # Predecessor totals for p(tag | t_prev1). The (BOS, BOS) context
        # is a trigram history, not a transition, so it is excluded; with
        # it the distribution conditioned on a sentence start would not
        # sum to one.
        self._bigram_context: dict[str, int] = {}
        for (t1, t2), c in self.bigram.items():
            if t2 == self.bos:
                continue
            self._bigram_context[t1] = self._bigram_context.get(t1, 0) + c

    def tags(self) -> list[str]:
        return sorted(self.unigram)

    def validate(self) -> None:
        """Check count nesting and weight invariants; raise on violation."""
        check_lambdas(self.lambdas)
        for (t1, t2, t3), c in self.trigram.items():
            if c > self.bigram.get((t1, t2), 0):
                raise ValueError(f"trigram {t1, t2, t3} exceeds its bigram context")
        for t1, c in self._bigram_context.items():
            if t1 != self.bos and c > self.unigram.get(t1, 0):
                raise ValueError(f"bigram contexts for {t1!r} exceed its occurrences")
        for (_, t) in self.lexical:
            if t == self.bos:
                raise ValueError("BOS pseudo-tag present in lexical counts")


def check_lambdas(lambdas: Sequence[float]) -> None:
    if len(lambdas) != 3 or any(l < 0 for l in lambdas):
        raise ValueError(f"need three non-negative weights, got {lambdas!r}")
    if abs(sum(lambdas) - 1.0) > 1e-9:
        raise ValueError(f"interpolation weights must sum to 1, got {lambdas!r}")


def lexical_prob(model: TagModel, surface: str, tag: str) -> float:
    """p(surface | tag) = freq(surface, tag) / freq(tag), floored when unseen."""
    num = model.lexical.get((surface, tag), 0)
    den = model.unigram.get(tag, 0)
    if num == 0 or den == 0:
        return model.eps_lex
    return num / den


def contextual_prob(model: TagModel, t_prev2: str, t_prev1: str, tag: str) -> float:
    """Interpolated p(tag | t_prev2, t_prev1); undefined components count 0."""
    l1, l2, l3 = model.lambdas
    p = 0.0
    if model.total_tags > 0:
        p += l1 * (model.unigram.get(tag, 0) / model.total_tags)
    den_bi = model._bigram_context.get(t_prev1, 0)
    if den_bi > 0:
        p += l2 * (model.bigram.get((t_prev1, tag), 0) / den_bi)
    den_tri = model.bigram.get((t_prev2, t_prev1), 0)
    if den_tri > 0:
        p += l3 * (model.trigram.get((t_prev2, t_prev1, tag), 0) / den_tri)
    return p


@dataclass(frozen=True)
class TagCandidate:
    """One taggable reading of a sentence position."""

    tag: str
    surface: str
    payload: Any = None


@dataclass(frozen=True)
class TaggedPath:
    """One scored assignment of a reading (and hence tag) to every position."""

    choices: tuple[int, ...]  # candidate index per position
    tags: tuple[str, ...]
    surfaces: tuple[str, ...]
    log_score: float

    def sort_key(self):
        return (-self.log_score, self.tags, self.surfaces)


def score_path(
    model: TagModel, candidates: Sequence[TagCandidate]
) -> float:
    """Log score of one complete reading sequence (both BOS history slots)."""
    t2 = t1 = model.bos
    total = 0.0
    for cand in candidates:
        # one addition per position, like the search, so rescoring a path
        # reproduces its search score bit for bit
        total += _log(lexical_prob(model, cand.surface, cand.tag)) + _log(
            contextual_prob(model, t2, t1, cand.tag)
        )
        t2, t1 = t1, cand.tag
    return total


def viterbi_nbest(
    model: TagModel,
    sentence: Sequence[Sequence[TagCandidate]],
    n: int,
) -> list[TaggedPath]:
    """Exact n-best readings by per-state k-best list extension.

    The dynamic-programming state is the last two tags; future scores
    depend on the history only through those two tags. Ties break by
    lexicographic tag sequence, then surface sequence. Each state keeps
    its n best partial paths under the score ordering and also under the
    tie-break ordering alone: a zero-probability step later on sends
    every score in a state to -inf at once, and after that collapse the
    tie-break alone decides the final ranking.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not sentence:
        raise ValueError("cannot tag an empty sentence")
    for i, cands in enumerate(sentence):
        if not cands:
            raise ValueError(f"position {i} has no candidate readings")

    # state -> list of (log_score, tags, surfaces, choices), best n kept
    states: dict[tuple[str, str], list] = {
        (model.bos, model.bos): [(0.0, (), (), ())]
    }
    for cands in sentence:
        nxt: dict[tuple[str, str], list] = {}
        for (t2, t1), paths in states.items():
            for ci, cand in enumerate(cands):
                step = _log(lexical_prob(model, cand.surface, cand.tag)) + _log(
                    contextual_prob(model, t2, t1, cand.tag)
                )
                key = (t1, cand.tag)
                bucket = nxt.setdefault(key, [])
                for score, tags, surfaces, choices in paths:
                    bucket.append(
                        (
                            score + step,
                            tags + (cand.tag,),
                            surfaces + (cand.surface,),
                            choices + (ci,),
                        )
                    )
        for key, bucket in nxt.items():
            bucket.sort(key=lambda e: (-e[0], e[1], e[2]))
            if len(bucket) > n:
                survivors = bucket[:n]
                for entry in sorted(bucket, key=lambda e: (e[1], e[2]))[:n]:
                    if entry not in survivors:
                        survivors.append(entry)
                survivors.sort(key=lambda e: (-e[0], e[1], e[2]))
                bucket[:] = survivors
        states = nxt

    final = [entry for bucket in states.values() for entry in bucket]
    final.sort(key=lambda e: (-e[0], e[1], e[2]))
    return [
        TaggedPath(choices=choices, tags=tags, surfaces=surfaces, log_score=score)
        for score, tags, surfaces, choices in final[:n]
    ]


# ---------------------------------------------------------------------------
# Model file format: sectioned TSV


def save_tag_model(path, model: TagModel) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("[META]\n")
        fh.write(f"total_tags\t{model.total_tags}\n")
        fh.write(f"lambdas\t{model.lambdas[0]!r}\t{model.lambdas[1]!r}\t{model.lambdas[2]!r}\n")
        fh.write(f"eps_lex\t{model.eps_lex!r}\n")
        fh.write(f"bos\t{model.bos}\n")
        fh.write("[UNI]\n")
        for tag in sorted(model.unigram):
            fh.write(f"{tag}\t{model.unigram[tag]}\n")
        fh.write("[BI]\n")
        for t1, t2 in sorted(model.bigram):
            fh.write(f"{t1}\t{t2}\t{model.bigram[(t1, t2)]}\n")
        fh.write("[TRI]\n")
        for t1, t2, t3 in sorted(model.trigram):
            fh.write(f"{t1}\t{t2}\t{t3}\t{model.trigram[(t1, t2, t3)]}\n")
        fh.write("[LEX]\n")
        for surface, tag in sorted(model.lexical):
            fh.write(f"{surface}\t{tag}\t{model.lexical[(surface, tag)]}\n")


def load_tag_model(path) -> TagModel:
    meta: dict[str, list[str]] = {}
    unigram: dict[str, int] = {}
    bigram: dict[tuple[str, str], int] = {}
    trigram: dict[tuple[str, str, str], int] = {}
    lexical: dict[tuple[str, str], int] = {}
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
                elif section == "UNI":
                    unigram[parts[0]] = int(parts[1])
                elif section == "BI":
                    bigram[(parts[0], parts[1])] = int(parts[2])
                elif section == "TRI":
                    trigram[(parts[0], parts[1], parts[2])] = int(parts[3])
                elif section == "LEX":
                    lexical[(parts[0], parts[1])] = int(parts[2])
                else:
                    raise FormatError(f"{where}: data outside any known section")
            except (IndexError, ValueError) as exc:
                raise FormatError(f"{where}: {exc}") from exc
    try:
        model = TagModel(
            unigram=unigram,
            bigram=bigram,
            trigram=trigram,
            lexical=lexical,
            total_tags=int(meta["total_tags"][0]),
            lambdas=tuple(float(x) for x in meta["lambdas"]),
            eps_lex=float(meta["eps_lex"][0]),
            bos=meta.get("bos", [BOS])[0],
        )
    except KeyError as exc:
        raise FormatError(f"{path}: missing META field {exc}") from exc
    return model
