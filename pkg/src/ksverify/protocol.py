"""Simulated twin experiment and the 40-key refutation of deterministic predictors.

Outcome law: A's triple is uniform over the three valid patterns. When B's
direction is one of A's three, B copies that slot (twin correlation); otherwise B
draws 0 with probability 1/3. The law lives entirely in
:func:`sample_triple_outcome` and :func:`sample_single_outcome`.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from .coloring import SPIN_PATTERNS, Assignment, first_violated_basis, pattern_valid
from .geometry import NUM_DIRECTIONS, NUM_RAYS, Basis, build_ray_system, enumerate_bases
from .rng import SplitMix64

SCHEDULES = ("random", "exhaustive_keys")


class ProtocolError(RuntimeError):
    """An invariant the axioms guarantee did not hold."""


def sample_triple_outcome(rng: SplitMix64) -> tuple[int, int, int]:
    return SPIN_PATTERNS[rng.below(3)]


def sample_single_outcome(rng: SplitMix64) -> int:
    return 0 if rng.below(3) == 0 else 1


_default_bases: list[Basis] | None = None


def default_bases() -> list[Basis]:
    global _default_bases
    if _default_bases is None:
        _default_bases = enumerate_bases(build_ray_system())
    return _default_bases


@dataclass(frozen=True)
class TrialRecord:
    basis_rank: int
    a_outcome: tuple[int, int, int]
    b_direction: int
    b_outcome: int
    twin_position: int | None = None

    def check(self) -> None:
        if not pattern_valid(self.a_outcome):
            raise ProtocolError(f"trial on key {self.basis_rank}: invalid pattern")
        if self.twin_position is not None:
            if self.b_outcome != self.a_outcome[self.twin_position - 1]:
                raise ProtocolError(f"trial on key {self.basis_rank}: twins disagree")


def run_trial(
    basis_rank: int,
    b_direction: int,
    rng: SplitMix64,
    bases: Sequence[Basis] | None = None,
) -> TrialRecord:
    bases = default_bases() if bases is None else bases
    if not 1 <= basis_rank <= len(bases):
        raise ValueError(f"unknown basis rank {basis_rank}")
    if not 1 <= b_direction <= NUM_DIRECTIONS:
        raise ValueError(f"unknown direction id {b_direction}")
    basis = bases[basis_rank - 1]
    a = sample_triple_outcome(rng)
    if b_direction in basis.ids:
        slot = basis.ids.index(b_direction)
        return TrialRecord(basis_rank, a, b_direction, a[slot], slot + 1)
    return TrialRecord(basis_rank, a, b_direction, sample_single_outcome(rng))


@dataclass(frozen=True)
class Predictor:
    """A deterministic response function for particle b."""

    theta_b: Assignment
    name: str = "predictor"


@dataclass(frozen=True)
class RefutationRecord:
    k: int
    predicted: tuple[int, int, int]
    measured: tuple[int, int, int]
    predictor: str = "predictor"


def refute(
    p: Predictor, bases: Sequence[Basis] | None = None, rng: SplitMix64 | None = None
) -> RefutationRecord:
    """Press keys 1, 2, ... and stop at the first one whose predicted triple is
    not a valid pattern; the measurement there is always valid."""
    bases = default_bases() if bases is None else bases
    k = first_violated_basis(p.theta_b, bases)
    if k is None:
        raise ProtocolError(
            f"{p.name} is valid on every basis; the configuration is colourable"
        )
    basis = next(b for b in bases if b.rank == k)
    predicted = p.theta_b.triple(basis)
    measured = sample_triple_outcome(rng if rng is not None else SplitMix64(0))
    if measured == predicted:
        raise ProtocolError("measured triple equals an invalid prediction")
    return RefutationRecord(k, predicted, measured, p.name)


@dataclass(frozen=True)
class SpacetimeEvent:
    r: tuple[float, float, float]
    t: float
    c: float = 299_792_458.0

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise ValueError("signal speed c must be positive")


def interval(e1: SpacetimeEvent, e2: SpacetimeEvent) -> float:
    """|r1 - r2|^2 - c^2 (t1 - t2)^2."""
    if e1.c != e2.c:
        raise ValueError("events use different signal speeds")
    space = sum((p - q) ** 2 for p, q in zip(e1.r, e2.r))
    return space - (e1.c * (e1.t - e2.t)) ** 2


def spacelike_separated(e1: SpacetimeEvent, e2: SpacetimeEvent) -> bool:
    # on the cone counts as outside it
    return interval(e1, e2) >= 0


@dataclass
class CampaignReport:
    n_trials: int
    seed: int
    schedule: str
    twin_matches: int = 0
    twin_agreements: int = 0
    invalid_patterns: int = 0
    pattern_counts: dict[str, int] = field(
        default_factory=lambda: {"".join(map(str, p)): 0 for p in SPIN_PATTERNS}
    )
    unmatched_b: int = 0
    unmatched_b_zeros: int = 0
    refutations: list[RefutationRecord] = field(default_factory=list)
    trials: list[TrialRecord] | None = None

    @property
    def twin_agreement_rate(self) -> float:
        # vacuously 1.0 when no trial shared a direction
        if self.twin_matches == 0:
            return 1.0
        return self.twin_agreements / self.twin_matches

    def pattern_frequencies(self) -> dict[str, float]:
        return {p: n / self.n_trials for p, n in self.pattern_counts.items()}

    def to_dict(self) -> dict:
        d = {
            "n_trials": self.n_trials,
            "seed": self.seed,
            "schedule": self.schedule,
            "twin_matches": self.twin_matches,
            "twin_agreements": self.twin_agreements,
            "twin_agreement_rate": self.twin_agreement_rate,
            "invalid_patterns": self.invalid_patterns,
            "pattern_counts": self.pattern_counts,
            "pattern_frequencies": self.pattern_frequencies(),
            "unmatched_b": self.unmatched_b,
            "unmatched_b_zeros": self.unmatched_b_zeros,
            "refutations": [asdict(r) for r in self.refutations],
        }
        if self.trials is not None:
            d["trials"] = [asdict(t) for t in self.trials]
        return d

    def to_text(self) -> str:
        """Summary block, then one JSON record per trial when trials were kept."""
        d = self.to_dict()
        trials = d.pop("trials", None)
        lines = [json.dumps(d, sort_keys=True, indent=2)]
        if trials is not None:
            lines += [json.dumps(t, sort_keys=True) for t in trials]
        return "\n".join(lines) + "\n"


def run_campaign(
    n_trials: int,
    seed: int,
    schedule: str = "random",
    predictors: Iterable[Predictor] = (),
    keep_trials: bool = False,
    bases: Sequence[Basis] | None = None,
) -> CampaignReport:
    """Run ``n_trials`` twin trials from ``SplitMix64(seed)``.

    ``random`` draws the key uniformly from 1..40 and B's direction uniformly
    from the 33 axes. ``exhaustive_keys`` walks the keys in order and lets B
    follow the first, second and third direction of the key on successive
    passes, so every trial is twinned. Refutations of ``predictors`` are drawn
    from the same stream after the trials.
    """
    if n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    if schedule not in SCHEDULES:
        raise ValueError(f"unknown schedule {schedule!r}; expected one of {SCHEDULES}")
    bases = default_bases() if bases is None else list(bases)
    rng = SplitMix64(seed)
    report = CampaignReport(n_trials, seed, schedule)
    if keep_trials:
        report.trials = []
    nb = len(bases)
    for t in range(n_trials):
        if schedule == "random":
            rank = rng.below(nb) + 1
            direction = rng.below(NUM_RAYS) + 1
        else:
            rank = t % nb + 1
            direction = bases[rank - 1].ids[(t // nb) % 3]
        rec = run_trial(rank, direction, rng, bases)
        if pattern_valid(rec.a_outcome):
            report.pattern_counts["".join(map(str, rec.a_outcome))] += 1
        else:
            report.invalid_patterns += 1
        if rec.twin_position is not None:
            report.twin_matches += 1
            report.twin_agreements += rec.b_outcome == rec.a_outcome[rec.twin_position - 1]
        else:
            report.unmatched_b += 1
            report.unmatched_b_zeros += rec.b_outcome == 0
        if keep_trials:
            report.trials.append(rec)
    for p in predictors:
        report.refutations.append(refute(p, bases, rng))
    return report

