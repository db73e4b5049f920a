"""Recognition-device output model and candidate character-set selection.

A recognition device emits, per character position, an ordered list of
(candidate, distance) pairs with lower distance meaning a better match.
Candidate selection prunes each cell by distance-gap thresholds and then
supplements the first candidate with its known look-alike characters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable


class FormatError(ValueError):
    """Raised when an input file does not match its documented format."""


def check_symbol(token: str) -> str:
    """Validate one atomic symbol token and return it unchanged."""
    if not token:
        raise ValueError("empty symbol token")
    if any(ch.isspace() for ch in token):
        raise ValueError(f"symbol contains whitespace: {token!r}")
    if ":" in token or "#" in token or "." in token:
        raise ValueError(f"symbol contains reserved character: {token!r}")
    return token


@dataclass(frozen=True)
class CandidateCell:
    """One recognized character position: (candidate, distance) pairs.

    Device-native cells are sorted by non-decreasing distance; supplemented
    look-alike entries are appended at the end and may break the sort (they
    carry the first candidate's distance but rank after native candidates).
    """

    pairs: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise ValueError("candidate cell must be non-empty")
        seen = set()
        for cand, dist in self.pairs:
            check_symbol(cand)
            if dist < 0:
                raise ValueError(f"negative distance for {cand!r}: {dist}")
            if cand in seen:
                raise ValueError(f"duplicate candidate {cand!r}")
            seen.add(cand)

    @property
    def first(self) -> tuple[str, int]:
        return self.pairs[0]

    def is_sorted(self) -> bool:
        dists = [d for _, d in self.pairs]
        return all(a <= b for a, b in zip(dists, dists[1:]))

    def symbols(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.pairs)

    def distance_of(self, symbol: str) -> int:
        for cand, dist in self.pairs:
            if cand == symbol:
                return dist
        raise KeyError(symbol)

    def rank_of(self, symbol: str) -> int:
        for i, (cand, _) in enumerate(self.pairs):
            if cand == symbol:
                return i
        raise KeyError(symbol)


@dataclass(frozen=True)
class EojeolLattice:
    """Candidate cells for one word (eojeol), one cell per character."""

    cells: tuple[CandidateCell, ...]

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("eojeol lattice must have at least one cell")

    def __len__(self) -> int:
        return len(self.cells)

    def first_candidates(self) -> tuple[str, ...]:
        return tuple(cell.first[0] for cell in self.cells)


@dataclass(frozen=True)
class SentenceLattice:
    """Ordered eojeol lattices for one sentence."""

    eojeols: tuple[EojeolLattice, ...]

    def __post_init__(self) -> None:
        if not self.eojeols:
            raise ValueError("sentence lattice must have at least one eojeol")

    def __len__(self) -> int:
        return len(self.eojeols)


class SimilarCharTable:
    """Symmetric table of mutually mis-recognizable character pairs."""

    def __init__(self, pairs: Iterable[tuple[str, str]] = ()) -> None:
        self._partners: dict[str, set[str]] = {}
        self._pairs: set[frozenset[str]] = set()
        for a, b in pairs:
            self.add(a, b)

    def add(self, a: str, b: str) -> None:
        check_symbol(a)
        check_symbol(b)
        if a == b:
            raise ValueError(f"similar-character pair {{{a!r}, {a!r}}} is degenerate")
        self._pairs.add(frozenset((a, b)))
        self._partners.setdefault(a, set()).add(b)
        self._partners.setdefault(b, set()).add(a)

    def partners(self, symbol: str) -> set[str]:
        return set(self._partners.get(symbol, ()))

    def __contains__(self, pair: tuple[str, str]) -> bool:
        a, b = pair
        return frozenset((a, b)) in self._pairs

    def __len__(self) -> int:
        return len(self._pairs)

    def pairs(self) -> set[frozenset[str]]:
        return set(self._pairs)


@dataclass(frozen=True)
class SelectionConfig:
    """Thresholds for candidate restriction and the supplement switch.

    theta1 bounds the absolute distance gap to the first candidate, theta2
    the gap relative to the first candidate's own distance. Both must be
    tuned to the recognition device; the defaults fit the bundled example
    device output.
    """

    theta1: float = 110
    theta2: float = 0.55
    supplement_enabled: bool = True

    def __post_init__(self) -> None:
        if self.theta1 < 0 or self.theta2 < 0:
            raise ValueError("restriction thresholds must be non-negative")


def restrict(cell: CandidateCell, cfg: SelectionConfig) -> CandidateCell:
    """Prune a cell to candidates close to the first one.

    A candidate survives when d_i - d_1 < theta1 and (d_i - d_1)/d_1 <
    theta2. The first candidate always survives (both gaps are zero).
    When d_1 = 0 the relative test is skipped.
    """
    d1 = cell.pairs[0][1]
    kept = [cell.pairs[0]]
    for cand, dist in cell.pairs[1:]:
        gap = dist - d1
        if gap >= cfg.theta1:
            continue
        if d1 > 0 and gap / d1 >= cfg.theta2:
            continue
        kept.append((cand, dist))
    return CandidateCell(tuple(kept))


def supplement(cell: CandidateCell, table: SimilarCharTable) -> CandidateCell:
    """Append the first candidate's look-alikes, carrying its distance.

    Supplemented entries rank after every device-native candidate so that
    downstream distance/order tie-breaks prefer what the device actually
    saw. Candidates already present are not duplicated.
    """
    c1, d1 = cell.first
    present = set(cell.symbols())
    added = sorted(table.partners(c1) - present)
    if not added:
        return cell
    return CandidateCell(cell.pairs + tuple((c, d1) for c in added))


def select_candidates(
    lattice: SentenceLattice, cfg: SelectionConfig, table: SimilarCharTable
) -> SentenceLattice:
    """Apply restriction then supplement to every cell of a sentence."""

    def one(cell: CandidateCell) -> CandidateCell:
        out = restrict(cell, cfg)
        if cfg.supplement_enabled:
            out = supplement(out, table)
        return out

    return SentenceLattice(
        tuple(
            EojeolLattice(tuple(one(c) for c in eo.cells)) for eo in lattice.eojeols
        )
    )


def unrestricted_config() -> SelectionConfig:
    """A configuration that keeps every candidate (identity restriction)."""
    return SelectionConfig(theta1=math.inf, theta2=math.inf, supplement_enabled=False)


# ---------------------------------------------------------------------------
# File formats


def _parse_cell(line: str, where: str) -> CandidateCell:
    pairs = []
    for token in line.split():
        if ":" not in token:
            raise FormatError(f"{where}: expected candidate:distance, got {token!r}")
        cand, _, dist_s = token.rpartition(":")
        try:
            dist = int(dist_s)
        except ValueError as exc:
            raise FormatError(f"{where}: bad distance in {token!r}") from exc
        pairs.append((cand, dist))
    try:
        cell = CandidateCell(tuple(pairs))
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from exc
    if not cell.is_sorted():
        raise FormatError(f"{where}: candidates not sorted by distance")
    return cell


def parse_lattice_file(lines: Iterable[str]) -> list[SentenceLattice]:
    """Parse the line-oriented lattice format.

    `#SENT` starts a sentence, one cell per line as space-separated
    `candidate:distance` pairs, blank lines separate eojeols, other
    `#`-prefixed lines are comments.
    """
    sentences: list[SentenceLattice] = []
    eojeols: list[EojeolLattice] = []
    cells: list[CandidateCell] = []

    def close_eojeol() -> None:
        nonlocal cells
        if cells:
            eojeols.append(EojeolLattice(tuple(cells)))
            cells = []

    def close_sentence(where: str) -> None:
        nonlocal eojeols
        close_eojeol()
        if eojeols:
            sentences.append(SentenceLattice(tuple(eojeols)))
            eojeols = []

    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n")
        where = f"line {lineno}"
        if line.strip() == "#SENT":
            close_sentence(where)
            continue
        if line.startswith("#"):
            continue
        if not line.strip():
            close_eojeol()
            continue
        cells.append(_parse_cell(line, where))
    close_sentence("end of file")
    return sentences


def format_lattice(sentences: Iterable[SentenceLattice]) -> str:
    out: list[str] = []
    for sent in sentences:
        out.append("#SENT")
        for i, eo in enumerate(sent.eojeols):
            if i:
                out.append("")
            for cell in eo.cells:
                out.append(" ".join(f"{c}:{d}" for c, d in cell.pairs))
    return "\n".join(out) + "\n"


def load_lattice_file(path) -> list[SentenceLattice]:
    with open(path, encoding="utf-8") as fh:
        return parse_lattice_file(fh)


def save_lattice_file(path, sentences: Iterable[SentenceLattice]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_lattice(sentences))


def load_similar_table(path) -> SimilarCharTable:
    """Load a similar-character table: one tab-separated pair per line."""
    table = SimilarCharTable()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"{path}: line {lineno}: expected two tab-separated symbols")
            try:
                table.add(parts[0], parts[1])
            except ValueError as exc:
                raise FormatError(f"{path}: line {lineno}: {exc}") from exc
    return table


def save_similar_table(path, table: SimilarCharTable) -> None:
    rows = sorted(tuple(sorted(p)) for p in table.pairs())
    with open(path, "w", encoding="utf-8") as fh:
        for a, b in rows:
            fh.write(f"{a}\t{b}\n")
