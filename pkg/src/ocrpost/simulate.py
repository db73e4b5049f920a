"""Synthetic recognition device.

Corrupts ground-truth text into candidate lattices: per character, k
candidates are drawn from a per-symbol confusion distribution with
synthetic integer distances increasing by rank. With probability p_err
the true symbol loses the first rank (a recognition error), and an
erroneous cell keeps the truth somewhere among the k candidates only with
probability p_in_k, so the no-solution failure mode occurs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .lattice import (
    CandidateCell,
    EojeolLattice,
    FormatError,
    SentenceLattice,
    SimilarCharTable,
    check_symbol,
)
from .morph import parse_surface


@dataclass
class ConfusionModel:
    """Per-symbol confusion distributions plus distance noise parameters."""

    confusions: dict[str, tuple[tuple[str, float], ...]]
    k: int = 5
    p_err: float = 0.3
    p_in_k: float = 0.9
    base_range: tuple[int, int] = (30, 250)
    incr_range: tuple[int, int] = (5, 80)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("candidate count k must be at least 1")
        if self.incr_range[0] < 1:
            raise ValueError("distance increments must be positive")
        for sym, alts in self.confusions.items():
            check_symbol(sym)
            if any(w <= 0 for _, w in alts):
                raise ValueError(f"non-positive confusion weight for {sym!r}")
            if sym not in {a for a, _ in alts}:
                raise ValueError(f"symbol {sym!r} is not confusable with itself")


def _weighted_sample(rng: random.Random, items: list[tuple[str, float]], count: int) -> list[str]:
    """Weighted sampling without replacement; fewer when items run out."""
    pool = list(items)
    out = []
    while pool and len(out) < count:
        total = sum(w for _, w in pool)
        r = rng.random() * total
        acc = 0.0
        for i, (sym, w) in enumerate(pool):
            acc += w
            if r <= acc:
                out.append(sym)
                del pool[i]
                break
        else:
            out.append(pool[-1][0])
            del pool[-1]
    return out


def _corrupt_cell(model: ConfusionModel, truth: str, rng: random.Random) -> CandidateCell:
    try:
        alts = model.confusions[truth]
    except KeyError:
        raise KeyError(f"symbol {truth!r} absent from the confusion model") from None
    others = [(s, w) for s, w in alts if s != truth]
    is_err = rng.random() < model.p_err and others
    if not is_err:
        symbols = [truth] + _weighted_sample(rng, others, model.k - 1)
    else:
        truth_in_k = model.k >= 2 and rng.random() < model.p_in_k
        symbols = _weighted_sample(rng, others, model.k - 1 if truth_in_k else model.k)
        if truth_in_k:
            symbols.insert(rng.randrange(1, min(model.k, len(symbols) + 1)), truth)
    dist = rng.randint(*model.base_range)
    pairs = []
    for sym in symbols:
        pairs.append((sym, dist))
        dist += rng.randint(*model.incr_range)
    return CandidateCell(tuple(pairs))


def sentence_rng(model: ConfusionModel, index: int) -> random.Random:
    return random.Random(f"{model.seed}:{index}")


def corrupt(
    truth: Sequence[Sequence[str]],
    model: ConfusionModel,
    sentence_index: int = 0,
) -> tuple[SentenceLattice, tuple[tuple[str, ...], ...]]:
    """Corrupt one sentence (eojeols of symbols) into a candidate lattice.

    Returns the lattice and the per-cell ground-truth alignment. The RNG
    stream is derived from (model.seed, sentence_index), so sentences are
    reproducible independently of each other.
    """
    if not truth or any(not eo for eo in truth):
        raise ValueError("truth sentence and its eojeols must be non-empty")
    rng = sentence_rng(model, sentence_index)
    eojeols = []
    for eo in truth:
        eojeols.append(EojeolLattice(tuple(_corrupt_cell(model, sym, rng) for sym in eo)))
    alignment = tuple(tuple(eo) for eo in truth)
    return SentenceLattice(tuple(eojeols)), alignment


def corrupt_corpus(
    truths: Sequence[Sequence[Sequence[str]]], model: ConfusionModel
) -> list[SentenceLattice]:
    return [corrupt(sent, model, i)[0] for i, sent in enumerate(truths)]


def derive_similar_table(model: ConfusionModel, top_m: int) -> SimilarCharTable:
    """Pair each symbol with its top_m most confusable partners, symmetrized."""
    table = SimilarCharTable()
    for sym, alts in model.confusions.items():
        others = sorted(
            ((s, w) for s, w in alts if s != sym), key=lambda e: (-e[1], e[0])
        )
        for partner, _ in others[:top_m]:
            table.add(sym, partner)
    return table


# ---------------------------------------------------------------------------
# File formats


def load_confusion_file(path, **params) -> ConfusionModel:
    """Load `symbol<TAB>alt:weight,alt:weight,...` lines; keyword arguments
    override the simulator parameters (k, p_err, p_in_k, ranges, seed)."""
    confusions: dict[str, tuple[tuple[str, float], ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            where = f"{path}: line {lineno}"
            if len(parts) != 2:
                raise FormatError(f"{where}: expected symbol<TAB>alternatives")
            alts = []
            for item in parts[1].split(","):
                alt, sep, weight_s = item.partition(":")
                if not sep:
                    raise FormatError(f"{where}: expected alt:weight, got {item!r}")
                try:
                    alts.append((alt, float(weight_s)))
                except ValueError as exc:
                    raise FormatError(f"{where}: bad weight in {item!r}") from exc
            confusions[parts[0]] = tuple(alts)
    try:
        return ConfusionModel(confusions=confusions, **params)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def save_confusion_file(path, model: ConfusionModel) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sym in sorted(model.confusions):
            alts = ",".join(f"{a}:{w!r}" for a, w in model.confusions[sym])
            fh.write(f"{sym}\t{alts}\n")


def load_truth_file(path) -> list[list[tuple[str, ...]]]:
    """Ground truth: one sentence per line, eojeols space-separated,
    symbols `.`-joined."""
    sentences = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            sentences.append([parse_surface(tok) for tok in line.split()])
    if not sentences:
        raise FormatError(f"{path}: no sentences")
    return sentences


def save_truth_file(path, sentences) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sent in sentences:
            fh.write(" ".join(".".join(eo) for eo in sent) + "\n")
