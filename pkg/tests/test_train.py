import pytest

from ocrpost.lattice import FormatError
from ocrpost.morph import build_lexicon
from ocrpost.tagger import BOS
from ocrpost.train import (
    TaggedCorpus,
    load_corpus,
    parse_corpus,
    save_corpus,
    segment_eojeol,
    train_cooccurrence,
    train_tag_model,
)


class TestCorpusFormat:
    def test_parse_tokens(self):
        corpus = parse_corpus(["cam.kyel.ey/MC+jC tul.lye/D+mC", "po.ni/D+mC"])
        assert corpus.sentences == (
            (("cam.kyel.ey", "MC+jC"), ("tul.lye", "D+mC")),
            (("po.ni", "D+mC"),),
        )
        assert len(corpus) == 2
        assert corpus.eojeol_count() == 3

    def test_comments_and_blanks_skipped(self):
        corpus = parse_corpus(["# header", "", "a/MC"])
        assert len(corpus) == 1

    @pytest.mark.parametrize(
        "bad",
        [
            "notag",
            "/MC",
            "a/NOPE",
            "a/MC+NOPE",
            "a/",
            "a..b/MC",
        ],
    )
    def test_malformed_tokens_rejected(self, bad):
        with pytest.raises(FormatError):
            parse_corpus([bad])

    def test_empty_corpus_rejected(self):
        with pytest.raises(FormatError):
            parse_corpus(["# only comments"])

    def test_file_round_trip(self, tmp_path):
        corpus = parse_corpus(["a/MC b.c/D+mT", "d/T"])
        path = tmp_path / "corpus.txt"
        save_corpus(path, corpus)
        assert load_corpus(path) == corpus


class TestTagModelTraining:
    def test_hand_counted_ngrams(self):
        corpus = TaggedCorpus(
            (
                (("x", "MC"), ("y", "D"), ("z", "MC")),
                (("x", "MC"),),
            )
        )
        m = train_tag_model(corpus)
        assert m.unigram == {"MC": 3, "D": 1}
        assert m.total_tags == 4
        assert m.trigram == {
            (BOS, BOS, "MC"): 2,
            (BOS, "MC", "D"): 1,
            ("MC", "D", "MC"): 1,
        }
        assert m.bigram == {
            (BOS, BOS): 2,
            (BOS, "MC"): 1,
            ("MC", "D"): 1,
        }
        assert m.lexical == {("x", "MC"): 2, ("y", "D"): 1, ("z", "MC"): 1}

    def test_trigram_marginalizes_onto_bigram(self):
        corpus = parse_corpus(
            ["a/MC b/D c/mT", "a/MC b/D", "c/mT a/MC b/D c/mT a/MC"]
        )
        m = train_tag_model(corpus)
        for ctx, count in m.bigram.items():
            total = sum(c for tri, c in m.trigram.items() if tri[:2] == ctx)
            assert total == count

    def test_count_conservation(self):
        corpus = parse_corpus(["a/MC b/D", "c/mT"])
        m = train_tag_model(corpus)
        assert sum(m.unigram.values()) == m.total_tags == corpus.eojeol_count()
        assert sum(m.trigram.values()) == m.total_tags
        assert sum(m.lexical.values()) == m.total_tags

    def test_doubling_corpus_doubles_counts(self):
        sents = (
            (("x", "MC"), ("y", "D")),
            (("z", "T"),),
        )
        m1 = train_tag_model(TaggedCorpus(sents))
        m2 = train_tag_model(TaggedCorpus(sents + sents))
        assert m2.unigram == {t: 2 * c for t, c in m1.unigram.items()}
        assert m2.trigram == {t: 2 * c for t, c in m1.trigram.items()}
        assert m2.total_tags == 2 * m1.total_tags

    def test_trained_model_validates(self):
        corpus = parse_corpus(["a/MC b/D c/mT a/MC", "b/D b/D"])
        train_tag_model(corpus).validate()

    def test_bad_lambdas_rejected(self):
        corpus = parse_corpus(["a/MC"])
        with pytest.raises(ValueError):
            train_tag_model(corpus, lambdas=(0.5, 0.5, 0.5))


LEX = build_lexicon(
    [
        (("nwun",), "nc"),
        (("mwul",), "nc"),
        (("ul",), "jco"),
        (("tte",), "pv"),
        (("ta",), "ef"),
    ],
    [("nc", "jco"), ("pv", "ef")],
    {"nc": "MC", "jco": "jC", "pv": "D", "ef": "mT"},
)


class TestSegmentation:
    def test_segments_under_annotated_tag(self):
        chain = segment_eojeol(LEX, "nwun.ul", "MC+jC")
        assert chain is not None
        assert chain.morphemes == ((("nwun",), "nc"), (("ul",), "jco"))

    def test_tag_mismatch_returns_none(self):
        assert segment_eojeol(LEX, "nwun.ul", "D+mT") is None

    def test_unknown_surface_returns_none(self):
        assert segment_eojeol(LEX, "zz", "MC") is None


class TestCooccurrenceTraining:
    def test_patterns_from_segmented_corpus(self):
        corpus = parse_corpus(
            [
                "nwun.ul/MC+jC tte.ta/D+mT",
                "nwun.ul/MC+jC tte.ta/D+mT",
                "mwul.ul/MC+jC tte.ta/D+mT",
            ]
        )
        m = train_cooccurrence(corpus, LEX, gf_threshold=10.0, min_pair_freq=2)
        assert m.n_sentences == 3
        assert m.freq("nwun") == 2
        assert m.freq("tte") == 3
        assert m.pair("nwun", "tte") == 2
        assert m.pair("mwul", "tte") == 0  # below min_pair_freq
        assert m.roles["nwun"] == "nom"
        assert m.roles["tte"] == "pred"

    def test_unsegmentable_eojeols_contribute_nothing(self):
        corpus = parse_corpus(["zz/MC tte.ta/D+mT", "zz/MC tte.ta/D+mT"])
        m = train_cooccurrence(corpus, LEX, gf_threshold=10.0, min_pair_freq=1)
        assert m.freq("zz") == 0
        assert m.freq("tte") == 2
        assert m.pair_freq == {}
