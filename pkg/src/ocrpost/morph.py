"""Dictionary- and connectivity-constrained morphological analysis.

An eojeol lattice is segmented into every grammatically valid morpheme
chain over all per-cell candidate choices. The dictionary is a trie over
reversed morpheme surfaces so that a single right-to-left walk from a
column yields every dictionary morpheme ending there; a chart indexed by
(start, end) is filled right-anchored: full-span analyses accumulate in
the last column and interior columns hold single dictionary morphemes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .lattice import EojeolLattice, FormatError, check_symbol

#: The 20 coarse morpheme tags eojeol tags are concatenated from.
TAGSET = frozenset(
    [
        "MP", "MD", "MC", "D", "H", "G", "B", "jJ", "jS", "jC",
        "SC", "SO", "e", "y", "mC", "mT", "mJ", "T", "+", "-",
    ]
)


class LexiconError(ValueError):
    """Raised when dictionary, connectivity, or tag-map data is inconsistent."""


class ChainOverflow(RuntimeError):
    """Raised when an eojeol produces more chains than the configured cap."""

    def __init__(self, count: int, cap: int) -> None:
        super().__init__(f"eojeol produced {count} morpheme chains (cap {cap})")
        self.count = count
        self.cap = cap


class _TrieNode:
    __slots__ = ("children", "categories")

    def __init__(self) -> None:
        self.children: dict[str, _TrieNode] = {}
        self.categories: set[str] = set()


class MorphLexicon:
    """Reverse-trie morpheme dictionary plus category connectivity table."""

    def __init__(self) -> None:
        self._root = _TrieNode()
        self._entries: dict[tuple[str, ...], set[str]] = {}
        self.connectivity: set[tuple[str, str]] = set()
        self.category_tag: dict[str, str] = {}

    def add_morpheme(self, surface: Sequence[str], category: str) -> None:
        surface = tuple(surface)
        if not surface:
            raise LexiconError("morpheme surface must be non-empty")
        for sym in surface:
            check_symbol(sym)
        if category not in self.category_tag:
            raise LexiconError(f"unknown category in dictionary entry: {category!r}")
        node = self._root
        for sym in reversed(surface):
            node = node.children.setdefault(sym, _TrieNode())
        node.categories.add(category)
        self._entries.setdefault(surface, set()).add(category)

    def add_connectivity(self, left: str, right: str) -> None:
        for cat in (left, right):
            if cat not in self.category_tag:
                raise LexiconError(f"unknown category in connectivity pair: {cat!r}")
        self.connectivity.add((left, right))

    def lookup(self, surface: Sequence[str]) -> set[str]:
        """Categories stored for an exact surface (empty set when absent)."""
        return set(self._entries.get(tuple(surface), ()))

    def entries(self) -> dict[tuple[str, ...], set[str]]:
        return {k: set(v) for k, v in self._entries.items()}

    def tag_of(self, category: str) -> str:
        return self.category_tag[category]


def build_lexicon(
    entries: Iterable[tuple[Sequence[str], str]],
    connectivity_pairs: Iterable[tuple[str, str]],
    category_tag_map: dict[str, str],
) -> MorphLexicon:
    lex = MorphLexicon()
    for category, tag in category_tag_map.items():
        if tag not in TAGSET:
            raise LexiconError(f"category {category!r} maps to unknown tag {tag!r}")
        lex.category_tag[category] = tag
    for surface, category in entries:
        lex.add_morpheme(surface, category)
    for left, right in connectivity_pairs:
        lex.add_connectivity(left, right)
    return lex


def connectable(lexicon: MorphLexicon, left: str, right: str) -> bool:
    """Whether the ordered category pair (left, right) may be adjacent."""
    return (left, right) in lexicon.connectivity


@dataclass(frozen=True)
class MorphChain:
    """One full segmentation of an eojeol into connectable morphemes.

    ``symbols`` are the chosen candidates, one per character position;
    ``ranks`` their indices within each cell (the device's candidate
    order); ``total_distance`` the sum of the chosen candidates' distances.
    """

    morphemes: tuple[tuple[tuple[str, ...], str], ...]
    symbols: tuple[str, ...]
    ranks: tuple[int, ...]
    total_distance: int

    @property
    def surface(self) -> str:
        return ".".join(self.symbols)

    @property
    def categories(self) -> tuple[str, ...]:
        return tuple(cat for _, cat in self.morphemes)

    def sort_key(self):
        return (self.total_distance, self.surface, self.categories)


def chain_tag(chain: MorphChain, lexicon: MorphLexicon) -> str:
    """Eojeol tag: `+`-joined coarse tags of the constituent morphemes."""
    return "+".join(lexicon.tag_of(cat) for cat in chain.categories)


def chain_key(chain: MorphChain) -> tuple:
    return (chain.morphemes, chain.symbols)


def suffix_matches(
    lexicon: MorphLexicon, chars: Sequence[str], end: int
) -> list[tuple[int, str]]:
    """All (start, category) with chars[start..end] a dictionary surface.

    Positions are 1-based and inclusive; a single reverse-trie walk from
    `end` leftward visits every match.
    """
    out = []
    node = lexicon._root
    for pos in range(end - 1, -1, -1):
        node = node.children.get(chars[pos])
        if node is None:
            break
        for cat in sorted(node.categories):
            out.append((pos + 1, cat))
    return out


@dataclass(frozen=True)
class _Match:
    """A dictionary morpheme found over candidate choices, ending at a column."""

    start: int  # 0-based inclusive
    category: str
    symbols: tuple[str, ...]
    ranks: tuple[int, ...]
    distance: int


@dataclass
class ChartStats:
    """Instrumentation counters for the chart construction."""

    trie_walks: int = 0
    combinations: int = 0


def _column_matches(
    lexicon: MorphLexicon,
    cells: Sequence,
    end: int,
    stats: ChartStats | None,
) -> list[_Match]:
    """One reverse-trie walk from column `end` (0-based exclusive).

    The walk branches over each cell's candidates, so matches cover every
    candidate choice without enumerating whole character sequences.
    """
    if stats is not None:
        stats.trie_walks += 1
    out: list[_Match] = []
    frontier = [(lexicon._root, (), (), 0)]
    for pos in range(end - 1, -1, -1):
        nxt = []
        for node, syms, ranks, dist in frontier:
            for r, (cand, d) in enumerate(cells[pos].pairs):
                child = node.children.get(cand)
                if child is None:
                    continue
                state = (child, (cand,) + syms, (r,) + ranks, dist + d)
                nxt.append(state)
                for cat in child.categories:
                    out.append(_Match(pos, cat, state[1], state[2], state[3]))
        frontier = nxt
        if not frontier:
            break
    return out


def analyze_eojeol(
    lexicon: MorphLexicon,
    eojeol: EojeolLattice,
    chain_cap: int = 256,
    stats: ChartStats | None = None,
) -> list[MorphChain]:
    """All full-span morpheme chains for a candidate-selected eojeol.

    Fills the last chart column first, then extends leftward only where a
    right-anchored analysis exists; interior columns hold single
    dictionary morphemes and are memoized. Returns chains sorted by
    ascending total distance, then surface, then categories; empty list
    means morphological analysis failed.
    """
    cells = eojeol.cells
    n = len(cells)
    column_memo: dict[int, list[_Match]] = {}

    def matches_ending_at(end: int) -> list[_Match]:
        if end not in column_memo:
            column_memo[end] = _column_matches(lexicon, cells, end, stats)
        return column_memo[end]

    def single(m: _Match) -> MorphChain:
        return MorphChain(
            morphemes=((m.symbols, m.category),),
            symbols=m.symbols,
            ranks=m.ranks,
            total_distance=m.distance,
        )

    # last_col[start] = chains covering start..n-1 (0-based start)
    last_col: dict[int, dict[tuple, MorphChain]] = {}
    total = 0

    def add(start: int, chain: MorphChain) -> None:
        nonlocal total
        bucket = last_col.setdefault(start, {})
        key = chain_key(chain)
        if key not in bucket:
            bucket[key] = chain
            total += 1
            if total > chain_cap:
                raise ChainOverflow(total, chain_cap)

    for m in matches_ending_at(n):
        add(m.start, single(m))

    for start in range(n - 1, 0, -1):
        right = last_col.get(start)
        if not right:
            continue
        for m in matches_ending_at(start):
            for rchain in list(right.values()):
                if stats is not None:
                    stats.combinations += 1
                if (m.category, rchain.categories[0]) in lexicon.connectivity:
                    add(
                        m.start,
                        MorphChain(
                            morphemes=((m.symbols, m.category),) + rchain.morphemes,
                            symbols=m.symbols + rchain.symbols,
                            ranks=m.ranks + rchain.ranks,
                            total_distance=m.distance + rchain.total_distance,
                        ),
                    )

    result = list(last_col.get(0, {}).values())
    result.sort(key=MorphChain.sort_key)
    return result


# ---------------------------------------------------------------------------
# File formats


def parse_surface(text: str) -> tuple[str, ...]:
    """Split a `.`-joined surface into symbol tokens."""
    parts = tuple(text.split("."))
    if not all(parts):
        raise FormatError(f"bad surface {text!r}")
    return parts


def _read_tsv(path, ncols: int):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != ncols:
                raise FormatError(
                    f"{path}: line {lineno}: expected {ncols} tab-separated fields"
                )
            yield lineno, parts


def load_lexicon(dictionary_path, connectivity_path, tagmap_path) -> MorphLexicon:
    """Load the three lexicon files (dictionary, connectivity, category map)."""
    tag_map: dict[str, str] = {}
    for lineno, (category, tag) in _read_tsv(tagmap_path, 2):
        if tag not in TAGSET:
            raise LexiconError(f"{tagmap_path}: line {lineno}: unknown tag {tag!r}")
        if category in tag_map and tag_map[category] != tag:
            raise LexiconError(
                f"{tagmap_path}: line {lineno}: category {category!r} remapped"
            )
        tag_map[category] = tag
    entries = []
    for lineno, (surface, category) in _read_tsv(dictionary_path, 2):
        if category not in tag_map:
            raise LexiconError(
                f"{dictionary_path}: line {lineno}: unknown category {category!r}"
            )
        entries.append((parse_surface(surface), category))
    pairs = []
    for lineno, (left, right) in _read_tsv(connectivity_path, 2):
        for cat in (left, right):
            if cat not in tag_map:
                raise LexiconError(
                    f"{connectivity_path}: line {lineno}: unknown category {cat!r}"
                )
        pairs.append((left, right))
    return build_lexicon(entries, pairs, tag_map)
