"""End-to-end post-processing of candidate lattices.

Cascade per sentence: candidate restriction and supplement, morphological
chart analysis per eojeol, n-best trigram tagging, co-occurrence
resolution, distance fallback. Unanalyzable eojeols fall back to the
device's first candidates and are flagged, keeping the pipeline total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cooccur import CooccurrenceModel, resolve
from .lattice import (
    SelectionConfig,
    SentenceLattice,
    SimilarCharTable,
    select_candidates,
)
from .morph import (
    ChainOverflow,
    MorphChain,
    MorphLexicon,
    analyze_eojeol,
    chain_tag,
)
from .tagger import TagCandidate, TagModel, viterbi_nbest

MORPH_FAIL = "morph-fail"


@dataclass
class Resources:
    """Everything a post-processing run needs, loaded once and shared."""

    lexicon: MorphLexicon
    tag_model: TagModel
    cooccur_model: CooccurrenceModel
    similar_table: SimilarCharTable
    selection: SelectionConfig = field(default_factory=SelectionConfig)
    nbest: int = 5
    chain_cap: int = 256

    def fallback_tag(self) -> str:
        """Tag assigned to morph-fail pseudo-chains: the most frequent
        eojeol tag, so smoothing keeps their scores finite."""
        if not self.tag_model.unigram:
            return "MC"
        return max(self.tag_model.unigram.items(), key=lambda e: (e[1], e[0]))[0]


@dataclass
class SentenceResult:
    """Final hypothesis plus instrumentation for one sentence."""

    chains: tuple[MorphChain, ...]
    provenance: tuple[str, ...]  # morph-fail | morph | tagging | cooccur | fallback
    stage_surfaces: dict[str, tuple[tuple[str, ...], ...]]  # stage -> per-eojeol symbols

    def surfaces(self) -> tuple[tuple[str, ...], ...]:
        return tuple(chain.symbols for chain in self.chains)

    def surface_line(self) -> str:
        return " ".join(chain.surface for chain in self.chains)


def _fallback_chain(eojeol) -> MorphChain:
    symbols = eojeol.first_candidates()
    return MorphChain(
        morphemes=(),
        symbols=symbols,
        ranks=(0,) * len(symbols),
        total_distance=sum(cell.first[1] for cell in eojeol.cells),
    )


def process_sentence(res: Resources, lattice: SentenceLattice) -> SentenceResult:
    selected = select_candidates(lattice, res.selection, res.similar_table)

    positions: list[list[MorphChain]] = []
    candidates: list[list[TagCandidate]] = []
    failed: list[bool] = []
    for eojeol in selected.eojeols:
        try:
            chains = analyze_eojeol(res.lexicon, eojeol, chain_cap=res.chain_cap)
        except ChainOverflow:
            chains = []
        if chains:
            failed.append(False)
        else:
            chains = [_fallback_chain(eojeol)]
            failed.append(True)
        positions.append(chains)
        candidates.append(
            [
                TagCandidate(
                    tag=res.fallback_tag() if failed[-1] else chain_tag(chain, res.lexicon),
                    surface=chain.surface,
                    payload=chain,
                )
                for chain in chains
            ]
        )

    paths = viterbi_nbest(res.tag_model, candidates, res.nbest)
    hypothesis = resolve(res.cooccur_model, positions, paths, res.lexicon)

    best = paths[0]
    one_best = tuple(positions[i][ci] for i, ci in enumerate(best.choices))

    provenance = []
    for i in range(len(positions)):
        if failed[i]:
            provenance.append(MORPH_FAIL)
        elif len(positions[i]) == 1:
            provenance.append("morph")
        elif hypothesis.provenance[i] == "agreed":
            provenance.append("tagging")
        else:
            provenance.append(hypothesis.provenance[i])

    # Stage ablation hypotheses: cut the cascade after each stage.
    morph_stage = tuple(min(p, key=lambda c: c.sort_key()).symbols for p in positions)
    tagging_stage = tuple(chain.symbols for chain in one_best)
    cooccur_stage = tuple(
        (hypothesis.chains[i] if hypothesis.provenance[i] != "fallback" else one_best[i]).symbols
        for i in range(len(positions))
    )
    final_stage = tuple(chain.symbols for chain in hypothesis.chains)

    return SentenceResult(
        chains=hypothesis.chains,
        provenance=tuple(provenance),
        stage_surfaces={
            "morph": morph_stage,
            "tagging": tagging_stage,
            "cooccur": cooccur_stage,
            "fallback": final_stage,
        },
    )


def process_corpus(
    res: Resources, lattices: Sequence[SentenceLattice]
) -> list[SentenceResult]:
    return [process_sentence(res, lat) for lat in lattices]


# ---------------------------------------------------------------------------
# Hypothesis files


def save_hypotheses(path, results: Sequence[SentenceResult]) -> None:
    """One surface line per sentence, followed by a `#!` provenance line."""
    with open(path, "w", encoding="utf-8") as fh:
        for result in results:
            fh.write(result.surface_line() + "\n")
            fh.write("#! " + " ".join(result.provenance) + "\n")


def load_hypotheses(path) -> tuple[list[list[tuple[str, ...]]], list[list[str]]]:
    """Parse hypothesis files back into surfaces and provenance labels."""
    from .morph import parse_surface

    surfaces: list[list[tuple[str, ...]]] = []
    provenance: list[list[str]] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#!"):
                provenance.append(line[2:].split())
            elif line.startswith("#"):
                continue
            else:
                surfaces.append([parse_surface(tok) for tok in line.split()])
    return surfaces, provenance


def save_stage_hypotheses(path, results: Sequence[SentenceResult]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for si, result in enumerate(results):
            for stage, surfaces in sorted(result.stage_surfaces.items()):
                line = " ".join(".".join(sym) for sym in surfaces)
                fh.write(f"{si}\t{stage}\t{line}\n")


def load_stage_hypotheses(path) -> dict[str, list[list[tuple[str, ...]]]]:
    from .morph import parse_surface

    stages: dict[str, dict[int, list[tuple[str, ...]]]] = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            si_s, stage, rest = line.split("\t")
            stages.setdefault(stage, {})[int(si_s)] = [
                parse_surface(tok) for tok in rest.split()
            ]
    return {
        stage: [rows[i] for i in sorted(rows)] for stage, rows in stages.items()
    }


def collect_stage_hypotheses(
    results: Sequence[SentenceResult],
) -> dict[str, list[tuple[tuple[str, ...], ...]]]:
    stages: dict[str, list] = {}
    for result in results:
        for stage, surfaces in result.stage_surfaces.items():
            stages.setdefault(stage, []).append(surfaces)
    return stages
