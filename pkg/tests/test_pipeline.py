import pytest

from ocrpost import pipeline, toylang
from ocrpost.lattice import (
    CandidateCell,
    EojeolLattice,
    SelectionConfig,
    SentenceLattice,
    SimilarCharTable,
)
from ocrpost.pipeline import MORPH_FAIL, Resources, process_corpus, process_sentence
from ocrpost.train import train_cooccurrence, train_tag_model


@pytest.fixture(scope="module")
def toy_resources():
    lang = toylang.build_language(seed=7)
    corpus = toylang.generate_corpus(lang, 400, seed=11)
    lexicon = lang.lexicon()
    return Resources(
        lexicon=lexicon,
        tag_model=train_tag_model(corpus),
        cooccur_model=train_cooccurrence(corpus, lexicon, gf_threshold=2.0),
        similar_table=SimilarCharTable(),
        selection=SelectionConfig(theta1=500, theta2=8.0),
        nbest=5,
    )


@pytest.fixture(scope="module")
def toy_batch():
    lang = toylang.build_language(seed=7)
    corpus = toylang.generate_corpus(lang, 30, seed=99)
    truths = toylang.corpus_truth(corpus)
    model = toylang.confusion_model(lang, p_err=0.3, p_in_k=0.9, seed=5)
    from ocrpost.simulate import corrupt_corpus

    return truths, corrupt_corpus(truths, model)


class TestProcessSentence:
    def test_clean_lattice_is_reproduced(self, toy_resources):
        lang = toylang.build_language(seed=7)
        surface = lang.nouns[0] + (lang.particles[0],)
        lattice = SentenceLattice(
            (EojeolLattice(tuple(CandidateCell(((s, 10),)) for s in surface)),)
        )
        result = process_sentence(toy_resources, lattice)
        assert result.surfaces() == (surface,)
        assert result.provenance == ("morph",)

    def test_unanalyzable_eojeol_falls_back_to_first_candidates(self, toy_resources):
        lattice = SentenceLattice(
            (EojeolLattice((CandidateCell((("zz", 10), ("qq", 20))),)),)
        )
        result = process_sentence(toy_resources, lattice)
        assert result.provenance == (MORPH_FAIL,)
        assert result.surfaces() == (("zz",),)

    def test_output_shape_matches_input(self, toy_resources, toy_batch):
        truths, lattices = toy_batch
        for truth, lattice in zip(truths, lattices):
            result = process_sentence(toy_resources, lattice)
            assert len(result.chains) == len(truth)
            assert len(result.provenance) == len(truth)
            for chain, eo in zip(result.chains, truth):
                assert len(chain.symbols) == len(eo)

    def test_provenance_labels_are_known(self, toy_resources, toy_batch):
        known = {MORPH_FAIL, "morph", "tagging", "cooccur", "fallback"}
        _, lattices = toy_batch
        for result in process_corpus(toy_resources, lattices):
            assert set(result.provenance) <= known

    def test_stage_surfaces_cover_all_stages(self, toy_resources, toy_batch):
        _, lattices = toy_batch
        result = process_sentence(toy_resources, lattices[0])
        assert set(result.stage_surfaces) == {"morph", "tagging", "cooccur", "fallback"}
        final = result.stage_surfaces["fallback"]
        assert final == result.surfaces()

    def test_deterministic(self, toy_resources, toy_batch):
        _, lattices = toy_batch
        a = process_corpus(toy_resources, lattices)
        b = process_corpus(toy_resources, lattices)
        assert [r.chains for r in a] == [r.chains for r in b]
        assert [r.provenance for r in a] == [r.provenance for r in b]


class TestHypothesisFiles:
    def test_round_trip(self, toy_resources, toy_batch, tmp_path):
        _, lattices = toy_batch
        results = process_corpus(toy_resources, lattices)
        path = tmp_path / "hyp.txt"
        pipeline.save_hypotheses(path, results)
        surfaces, provenance = pipeline.load_hypotheses(path)
        assert surfaces == [[c.symbols for c in r.chains] for r in results]
        assert provenance == [list(r.provenance) for r in results]

    def test_stage_round_trip(self, toy_resources, toy_batch, tmp_path):
        _, lattices = toy_batch
        results = process_corpus(toy_resources, lattices)
        path = tmp_path / "stages.tsv"
        pipeline.save_stage_hypotheses(path, results)
        loaded = pipeline.load_stage_hypotheses(path)
        collected = pipeline.collect_stage_hypotheses(results)
        assert set(loaded) == set(collected)
        for stage in loaded:
            assert loaded[stage] == [
                [tuple(eo) for eo in sent] for sent in collected[stage]
            ]
