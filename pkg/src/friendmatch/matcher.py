"""Per-source matching: rank candidates and apply the two-threshold rule.

The best candidate is emitted only if its score clears the absolute
threshold (gamma) and it dominates the runner-up by more than the ratio
threshold (delta); a sole candidate, or one whose runner-up scored zero,
passes the ratio test vacuously. Exact score ties at the top can never
pass the ratio test, so no arbitrary winner is invented.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

from .index import CandidateIndex, generate_candidates
from .names import NameStats, SynonymDictionary
from .profiles import Profile
from .scoring import FriendName, MatchConfig, ScoredCandidate, profile_similarity


class Reason(str, Enum):
    MATCHED = "matched"
    BELOW_GAMMA = "below_gamma"
    RATIO_TOO_LOW = "ratio_too_low"
    NO_CANDIDATES = "no_candidates"
    LOST_DEDUP = "lost_dedup"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class MatchDecision:
    """Outcome for one source profile.

    best_target_id names the top-ranked candidate whenever any candidate
    existed, which is what makes threshold sweeps replayable from a logged
    run; target_id only reports it for actual matches.
    """

    source_id: str
    best_target_id: str | None
    score: float | None
    runner_up_score: float | None
    reason: Reason

    @property
    def target_id(self) -> str | None:
        return self.best_target_id if self.reason is Reason.MATCHED else None

    def demote(self, reason: Reason) -> "MatchDecision":
        return replace(self, reason=reason)


def rank_candidates(
    source: Profile,
    candidates: set[Profile],
    stats: NameStats,
    cfg: MatchConfig,
    source_friends: list[FriendName],
    target_friends: Callable[[Profile], list[FriendName]],
) -> list[ScoredCandidate]:
    """Score all candidates; order by score descending, ties by target id."""
    scored = [
        profile_similarity(source, target, source_friends, target_friends(target), stats, cfg)
        for target in candidates
    ]
    scored.sort(key=lambda sc: (-sc.score, sc.target.id))
    return scored


def decide(source_id: str, ranked: list[ScoredCandidate], cfg: MatchConfig) -> MatchDecision:
    """Apply the gamma/delta rule to an already ranked candidate list."""
    if not ranked:
        return MatchDecision(source_id, None, None, None, Reason.NO_CANDIDATES)
    best = ranked[0]
    runner_up = ranked[1].score if len(ranked) > 1 else None
    if not best.score > cfg.gamma:
        reason = Reason.BELOW_GAMMA
    elif runner_up is None or runner_up == 0 or best.score / runner_up > cfg.delta:
        reason = Reason.MATCHED
    else:
        reason = Reason.RATIO_TOO_LOW
    return MatchDecision(source_id, best.target.id, best.score, runner_up, reason)


def match_one(
    source: Profile,
    index: CandidateIndex,
    synonyms: SynonymDictionary,
    stats: NameStats,
    cfg: MatchConfig,
    source_friends: list[FriendName],
    target_friends: Callable[[Profile], list[FriendName]],
) -> MatchDecision:
    """Generate, rank and threshold candidates for one source profile."""
    candidates = generate_candidates(index, source, synonyms)
    ranked = rank_candidates(source, candidates, stats, cfg, source_friends, target_friends)
    return decide(source.id, ranked, cfg)
