"""Performance measures for post-processing runs.

Correctness is exact symbol equality against aligned ground truth, at
both character and eojeol granularity (an eojeol is correct only when all
its characters are). Stage attribution splits the total recognition-rate
increase over the cascade morphology -> tagging -> co-occurrence ->
distance fallback, in that fixed order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .lattice import SentenceLattice

#: Ablation order for stage attribution; other orders would change shares.
STAGES = ("morph", "tagging", "cooccur", "fallback")


def recognition_rate(correct_first: int, total_first: int) -> float | None:
    """Percentage of correctly recognized characters; None when undefined."""
    if total_first <= 0:
        return None
    return correct_first / total_first * 100.0


def correction_rate(
    successes: int, miscorrections: int, total_erroneous_first: int
) -> float | None:
    """(corrected - mis-corrected) / total erroneous first candidates, in %.

    Mis-corrections are characters the device got right and the
    post-processing broke; the rate can therefore be negative. None when
    there was nothing to correct.
    """
    if total_erroneous_first <= 0:
        return None
    return (successes - miscorrections) / total_erroneous_first * 100.0


def ambiguity_resolution_rate(stage_increase: float, total_increase: float) -> float | None:
    """Share of the total recognition-rate increase owed to one stage."""
    if total_increase <= 0:
        return None
    return stage_increase / total_increase * 100.0


@dataclass
class _Tally:
    total: int = 0
    correct_before: int = 0
    correct_after: int = 0
    successes: int = 0
    miscorrections: int = 0

    def add(self, before_ok: bool, after_ok: bool) -> None:
        self.total += 1
        self.correct_before += before_ok
        self.correct_after += after_ok
        self.successes += (not before_ok) and after_ok
        self.miscorrections += before_ok and not after_ok

    @property
    def erroneous_first(self) -> int:
        return self.total - self.correct_before

    def before_rate(self) -> float | None:
        return recognition_rate(self.correct_before, self.total)

    def after_rate(self) -> float | None:
        return recognition_rate(self.correct_after, self.total)

    def rate(self) -> float | None:
        return correction_rate(self.successes, self.miscorrections, self.erroneous_first)


@dataclass
class EvalReport:
    chars: _Tally
    eojeols: _Tally
    stage_rates: dict[str, float] = field(default_factory=dict)
    stage_shares: dict[str, float | None] = field(default_factory=dict)
    provenance_counts: dict[str, int] = field(default_factory=dict)

    def residual_ambiguity_fraction(self) -> float | None:
        total = sum(self.provenance_counts.values())
        if not total:
            return None
        return self.provenance_counts.get("fallback", 0) / total

    def as_rows(self) -> list[tuple[str, str]]:
        def fmt(v) -> str:
            return "n/a" if v is None else f"{v:.4f}"

        rows = [
            ("char_recognition_before_pct", fmt(self.chars.before_rate())),
            ("char_recognition_after_pct", fmt(self.chars.after_rate())),
            ("char_correction_pct", fmt(self.chars.rate())),
            ("char_successes", str(self.chars.successes)),
            ("char_miscorrections", str(self.chars.miscorrections)),
            ("char_erroneous_first", str(self.chars.erroneous_first)),
            ("eojeol_recognition_before_pct", fmt(self.eojeols.before_rate())),
            ("eojeol_recognition_after_pct", fmt(self.eojeols.after_rate())),
            ("eojeol_correction_pct", fmt(self.eojeols.rate())),
            ("eojeol_successes", str(self.eojeols.successes)),
            ("eojeol_miscorrections", str(self.eojeols.miscorrections)),
            ("eojeol_erroneous_first", str(self.eojeols.erroneous_first)),
        ]
        for stage in STAGES:
            if stage in self.stage_rates:
                rows.append((f"stage_{stage}_char_rate_pct", fmt(self.stage_rates[stage])))
        for stage in STAGES:
            if stage in self.stage_shares:
                rows.append((f"stage_{stage}_share_pct", fmt(self.stage_shares[stage])))
        for label in sorted(self.provenance_counts):
            rows.append((f"decided_by_{label}", str(self.provenance_counts[label])))
        frac = self.residual_ambiguity_fraction()
        if frac is not None:
            rows.append(("residual_ambiguity_fraction", f"{frac:.4f}"))
        return rows

    def to_tsv(self) -> str:
        return "".join(f"{k}\t{v}\n" for k, v in self.as_rows())

    def to_text(self) -> str:
        width = max(len(k) for k, _ in self.as_rows())
        return "".join(f"{k:<{width}}  {v}\n" for k, v in self.as_rows())


class AlignmentError(ValueError):
    """Raised when truth, lattice, and hypotheses do not line up."""


def evaluate(
    truth: Sequence[Sequence[Sequence[str]]],
    before: Sequence[SentenceLattice],
    after: Sequence[Sequence[Sequence[str]]],
    stage_hypotheses: dict[str, Sequence[Sequence[Sequence[str]]]] | None = None,
    provenance: Sequence[Sequence[str]] | None = None,
) -> EvalReport:
    """Compare truth, device-first-candidate, and post-processed texts.

    `stage_hypotheses` maps stage names (see STAGES) to full hypothesis
    sets produced with the cascade cut after that stage; when given, the
    report carries per-stage rates and each stage's share of the total
    recognition-rate increase.
    """
    chars = _Tally()
    eojeols = _Tally()

    def check_shape(hyp, what: str) -> None:
        if len(hyp) != len(truth):
            raise AlignmentError(f"{what}: {len(hyp)} sentences, truth has {len(truth)}")
        for si, sent in enumerate(truth):
            if len(hyp[si]) != len(sent):
                raise AlignmentError(f"{what}: sentence {si}: eojeol count mismatch")
            for ei, eo in enumerate(sent):
                if len(hyp[si][ei]) != len(eo):
                    raise AlignmentError(
                        f"{what}: sentence {si}, eojeol {ei}: length mismatch"
                    )

    if len(before) != len(truth):
        raise AlignmentError("lattice/truth sentence count mismatch")
    firsts = []
    for si, sent in enumerate(truth):
        lat = before[si]
        if len(lat.eojeols) != len(sent):
            raise AlignmentError(f"sentence {si}: lattice eojeol count mismatch")
        row = []
        for ei, eo in enumerate(sent):
            if len(lat.eojeols[ei].cells) != len(eo):
                raise AlignmentError(f"sentence {si}, eojeol {ei}: cell count mismatch")
            row.append(lat.eojeols[ei].first_candidates())
        firsts.append(row)
    check_shape(after, "hypotheses")

    def char_rate_against(hyp) -> float:
        correct = total = 0
        for si, sent in enumerate(truth):
            for ei, eo in enumerate(sent):
                for ci, sym in enumerate(eo):
                    total += 1
                    correct += hyp[si][ei][ci] == sym
        return correct / total * 100.0

    for si, sent in enumerate(truth):
        for ei, eo in enumerate(sent):
            eo_before_ok = eo_after_ok = True
            for ci, sym in enumerate(eo):
                b_ok = firsts[si][ei][ci] == sym
                a_ok = after[si][ei][ci] == sym
                chars.add(b_ok, a_ok)
                eo_before_ok &= b_ok
                eo_after_ok &= a_ok
            eojeols.add(eo_before_ok, eo_after_ok)

    report = EvalReport(chars=chars, eojeols=eojeols)

    if stage_hypotheses:
        before_rate = chars.before_rate() or 0.0
        prev = before_rate
        shares: dict[str, float | None] = {}
        rates: dict[str, float] = {}
        final_rate = prev
        for stage in STAGES:
            if stage not in stage_hypotheses:
                continue
            check_shape(stage_hypotheses[stage], f"stage {stage}")
            rate = char_rate_against(stage_hypotheses[stage])
            rates[stage] = rate
            final_rate = rate
        total_increase = final_rate - before_rate
        prev = before_rate
        for stage in STAGES:
            if stage not in rates:
                continue
            shares[stage] = ambiguity_resolution_rate(rates[stage] - prev, total_increase)
            prev = rates[stage]
        report.stage_rates = rates
        report.stage_shares = shares

    if provenance is not None:
        counts: dict[str, int] = {}
        for sent in provenance:
            for label in sent:
                counts[label] = counts.get(label, 0) + 1
        report.provenance_counts = counts
    return report
