import random

import pytest

from ocrpost.lattice import CandidateCell, EojeolLattice
from ocrpost.morph import (
    ChainOverflow,
    ChartStats,
    LexiconError,
    analyze_eojeol,
    build_lexicon,
    chain_tag,
    connectable,
    parse_surface,
    suffix_matches,
)

from conftest import (
    brute_force_analyze,
    cell,
    chain_as_key,
    eojeol,
    random_morph_instance,
)

TAGS = {"n": "MC", "j": "jC", "v": "D", "e": "mT"}


def tiny_lexicon():
    return build_lexicon(
        [
            (("nwun",), "n"),
            (("ul",), "j"),
            (("mwul",), "n"),
            (("mwul", "ul"), "n"),  # ambiguous with mwul + ul
            (("tta",), "v"),
            (("ta",), "e"),
        ],
        [("n", "j"), ("v", "e")],
        TAGS,
    )


class TestLexicon:
    def test_lookup_and_entries(self):
        lex = tiny_lexicon()
        assert lex.lookup(("nwun",)) == {"n"}
        assert lex.lookup(("mwul", "ul")) == {"n"}
        assert lex.lookup(("xx",)) == set()

    def test_same_surface_multiple_categories(self):
        lex = build_lexicon([(("ey",), "j"), (("ey",), "e")], [], TAGS)
        assert lex.lookup(("ey",)) == {"j", "e"}

    def test_unknown_category_rejected(self):
        with pytest.raises(LexiconError):
            build_lexicon([(("a",), "zz")], [], TAGS)

    def test_unknown_tag_rejected(self):
        with pytest.raises(LexiconError):
            build_lexicon([], [], {"n": "NOPE"})

    def test_connectivity_is_directional(self):
        lex = tiny_lexicon()
        assert connectable(lex, "n", "j")
        assert not connectable(lex, "j", "n")


class TestSuffixMatches:
    def test_matches_every_suffix_ending_at_position(self):
        lex = tiny_lexicon()
        chars = ["nwun", "mwul", "ul"]
        # surfaces ending at 1-based position 3: "ul" and "mwul.ul"
        assert sorted(suffix_matches(lex, chars, 3)) == [(2, "n"), (3, "j")]
        assert suffix_matches(lex, chars, 2) == [(2, "n")]
        assert suffix_matches(lex, chars, 1) == [(1, "n")]

    def test_oracle_equivalence(self):
        rng = random.Random(5)
        for _ in range(200):
            lex, eo = random_morph_instance(rng)
            chars = [c.first[0] for c in eo.cells]
            for end in range(1, len(chars) + 1):
                expected = sorted(
                    (start, cat)
                    for start in range(1, end + 1)
                    for cat in lex.lookup(chars[start - 1 : end])
                )
                assert sorted(suffix_matches(lex, chars, end)) == expected


class TestAnalyzeEojeol:
    def test_single_unambiguous_chain(self):
        lex = tiny_lexicon()
        eo = eojeol(cell(("nwun", 10)), cell(("ul", 5)))
        chains = analyze_eojeol(lex, eo)
        assert len(chains) == 1
        chain = chains[0]
        assert chain.morphemes == ((("nwun",), "n"), (("ul",), "j"))
        assert chain.symbols == ("nwun", "ul")
        assert chain.ranks == (0, 0)
        assert chain.total_distance == 15
        assert chain.surface == "nwun.ul"
        assert chain_tag(chain, lex) == "MC+jC"

    def test_segmentation_ambiguity(self):
        lex = tiny_lexicon()
        eo = eojeol(cell(("mwul", 10)), cell(("ul", 5)))
        got = {c.morphemes for c in analyze_eojeol(lex, eo)}
        assert got == {
            ((("mwul",), "n"), (("ul",), "j")),
            ((("mwul", "ul"), "n"),),
        }

    def test_candidate_ambiguity(self):
        lex = tiny_lexicon()
        eo = eojeol(cell(("mwul", 10), ("nwun", 20)), cell(("ul", 5)))
        got = {(c.symbols, c.ranks) for c in analyze_eojeol(lex, eo)}
        assert (("nwun", "ul"), (1, 0)) in got
        assert (("mwul", "ul"), (0, 0)) in got

    def test_connectivity_blocks_chains(self):
        lex = build_lexicon(
            [(("a",), "n"), (("b",), "j")], [], TAGS
        )
        eo = eojeol(cell(("a", 1)), cell(("b", 1)))
        assert analyze_eojeol(lex, eo) == []

    def test_failure_on_unknown_symbols(self):
        lex = tiny_lexicon()
        assert analyze_eojeol(lex, eojeol(cell(("zz", 3)))) == []

    def test_sorted_by_distance_then_surface(self):
        lex = tiny_lexicon()
        eo = eojeol(cell(("mwul", 30), ("nwun", 10)), cell(("ul", 5)))
        chains = analyze_eojeol(lex, eo)
        keys = [c.sort_key() for c in chains]
        assert keys == sorted(keys)

    def test_chain_cap_overflow(self):
        lex = build_lexicon(
            [(("a",), "n"), (("b",), "n"), (("a", "a"), "n"), (("a", "b"), "n")],
            [("n", "n")],
            TAGS,
        )
        eo = eojeol(*[cell(("a", 1), ("b", 2))] * 6)
        with pytest.raises(ChainOverflow):
            analyze_eojeol(lex, eo, chain_cap=4)
        assert len(analyze_eojeol(lex, eo, chain_cap=100000)) > 4

    def test_oracle_equivalence_random(self):
        rng = random.Random(11)
        for _ in range(300):
            lex, eo = random_morph_instance(rng)
            got = set()
            for chain in analyze_eojeol(lex, eo, chain_cap=100000):
                key = chain_as_key(chain)
                assert key not in got, "duplicate chain emitted"
                got.add(key)
            assert got == brute_force_analyze(lex, eo)

    def test_candidate_order_within_cell_does_not_change_chain_set(self):
        rng = random.Random(23)
        for _ in range(100):
            lex, eo = random_morph_instance(rng)
            shuffled_cells = []
            for c in eo.cells:
                pairs = list(c.pairs)
                rng.shuffle(pairs)
                shuffled_cells.append(CandidateCell(tuple(pairs)))
            shuffled = EojeolLattice(tuple(shuffled_cells))
            base = {
                (c.morphemes, c.symbols, c.total_distance)
                for c in analyze_eojeol(lex, eo, chain_cap=100000)
            }
            perm = {
                (c.morphemes, c.symbols, c.total_distance)
                for c in analyze_eojeol(lex, shuffled, chain_cap=100000)
            }
            assert base == perm

    def test_removing_connectivity_never_adds_chains(self):
        rng = random.Random(31)
        for _ in range(100):
            lex, eo = random_morph_instance(rng)
            if not lex.connectivity:
                continue
            entries = [(s, c) for s, cats in lex.entries().items() for c in cats]
            pairs = sorted(lex.connectivity)
            pairs.remove(rng.choice(pairs))
            smaller = build_lexicon(entries, pairs, dict(lex.category_tag))
            full = {chain_as_key(c) for c in analyze_eojeol(lex, eo, chain_cap=100000)}
            cut = {chain_as_key(c) for c in analyze_eojeol(smaller, eo, chain_cap=100000)}
            assert cut <= full

    def test_one_trie_walk_per_column(self):
        lex = tiny_lexicon()
        eo = eojeol(
            cell(("mwul", 10), ("nwun", 20)),
            cell(("ul", 5), ("ta", 9)),
            cell(("ul", 7)),
        )
        stats = ChartStats()
        analyze_eojeol(lex, eo, stats=stats)
        assert stats.trie_walks <= len(eo.cells)


class TestSurfaceParsing:
    def test_round_trip(self):
        assert parse_surface("cam.kyel.ey") == ("cam", "kyel", "ey")
        assert parse_surface("po") == ("po",)

    @pytest.mark.parametrize("bad", ["", ".", "a..b", ".a", "a."])
    def test_malformed(self, bad):
        from ocrpost.lattice import FormatError

        with pytest.raises(FormatError):
            parse_surface(bad)
