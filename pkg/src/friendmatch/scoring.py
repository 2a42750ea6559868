"""Similarity scoring: normalized string similarity and friend-overlap score.

A candidate's score is the sum, over its friends that look like some friend
of the source profile, of how surprising the shared friend's name is: the
contribution is the inverse of the expected number of target-network
profiles carrying that (first, last) combination, capped at one. Rare
shared friends therefore dominate; armies of shared Ivan Ivanovs do not.
"""

from __future__ import annotations

from dataclasses import dataclass

from .editdist import levenshtein
from .errors import ConfigError
from .names import NameStats
from .profiles import Profile

FriendName = tuple[str, str]


@dataclass(frozen=True)
class MatchConfig:
    """Every tunable of the matching pipeline.

    alpha / beta      minimum first/last name similarity for two friends
                      to count as the same person (strict >)
    gamma             minimum score of the best candidate (strict >)
    delta             minimum best-to-runner-up score ratio (strict >)
    candidate_distance  edit-distance bound of candidate retrieval
    synonym_min_count   pair frequency below which name pairs are noise
    """

    alpha: float = 0.8
    beta: float = 0.6
    gamma: float = 3.0
    delta: float = 5.0
    candidate_distance: int = 1
    synonym_min_count: int = 2

    def validate(self) -> "MatchConfig":
        if not 0 < self.alpha <= 1:
            raise ConfigError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0 < self.beta <= 1:
            raise ConfigError(f"beta must be in (0, 1], got {self.beta}")
        if self.gamma < 0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if self.delta < 1:
            raise ConfigError(f"delta must be >= 1, got {self.delta}")
        if self.candidate_distance not in (0, 1, 2):
            raise ConfigError(f"candidate_distance must be 0, 1 or 2, got {self.candidate_distance}")
        if self.synonym_min_count < 1:
            raise ConfigError(f"synonym_min_count must be >= 1, got {self.synonym_min_count}")
        return self


@dataclass(frozen=True)
class ScoredCandidate:
    target: Profile
    score: float
    matched_friends: int


def string_similarity(a: str, b: str) -> float:
    """1 - edit_distance / length of the longer string; 1.0 iff equal."""
    if a == b:
        return 1.0
    return 1.0 - levenshtein(a, b) / max(len(a), len(b))


def _last_names_blocked(a: str, b: str) -> bool:
    """First-two-letter blocking; single-letter surnames only match their twins."""
    if len(a) >= 2 and len(b) >= 2:
        return a[:2] == b[:2]
    return a == b and len(a) == 1 and len(b) == 1


def friends_match(src_friend: FriendName, tgt_friend: FriendName, cfg: MatchConfig) -> bool:
    """Whether two friends plausibly are the same person."""
    sf, sl = src_friend
    tf, tl = tgt_friend
    if not _last_names_blocked(sl, tl):
        return False
    return string_similarity(sf, tf) > cfg.alpha and string_similarity(sl, tl) > cfg.beta


def friend_weight(tgt_friend: FriendName, stats: NameStats) -> float:
    """Inverse expected frequency of the friend's full name, capped at 1.

    A name unseen in the target network is rarer than anything observed,
    so it gets the cap value outright.
    """
    first_count = stats.first_count(tgt_friend[0])
    last_count = stats.last_count(tgt_friend[1])
    if first_count == 0 or last_count == 0:
        return 1.0
    return min(1.0, stats.total / (first_count * last_count))


def profile_similarity(
    source: Profile,
    target: Profile,
    friends_src: list[FriendName],
    friends_tgt: list[FriendName],
    stats: NameStats,
    cfg: MatchConfig,
) -> ScoredCandidate:
    """Sum the weights of target friends matched by at least one source friend.

    Each target friend contributes at most once, in input order (which
    fixes the floating-point summation order); a single source friend may
    enable several target-friend contributions.
    """
    # Bucket source friends by the blocking key so each target friend only
    # meets source friends that could pass the prefix rule.
    buckets: dict[str, list[FriendName]] = {}
    for friend in friends_src:
        key = friend[1][:2] if len(friend[1]) >= 2 else "\0" + friend[1]
        buckets.setdefault(key, []).append(friend)

    score = 0.0
    matched = 0
    for tgt in friends_tgt:
        key = tgt[1][:2] if len(tgt[1]) >= 2 else "\0" + tgt[1]
        for src in buckets.get(key, ()):
            if friends_match(src, tgt, cfg):
                score += friend_weight(tgt, stats)
                matched += 1
                break
    return ScoredCandidate(target, score, matched)
