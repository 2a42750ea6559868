"""End-to-end batch driver.

Loads both networks, builds the shared read-only artifacts (index, name
statistics, synonym dictionary), fans source profiles out over worker
processes, then runs the global target-side dedup and writes results.

The map phase shares no mutable state: workers inherit the parent's
structures via fork and only ship their decision lists back, so output is
byte-identical for any worker count. Matching direction is generic
source -> target; pick the smaller network as the target, since every
worker holds all of it in memory.
"""

from __future__ import annotations

import csv
import logging
import multiprocessing
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DuplicateId, EmptyName, ParseError
from .index import CandidateIndex, build_index
from .matcher import MatchDecision, Reason, match_one
from .names import NameStats, SynonymDictionary, build_stats
from .normalize import romanize
from .profiles import Profile
from .scoring import FriendName, MatchConfig

log = logging.getLogger(__name__)

CSV_HEADER = ["source_id", "target_id", "score", "runner_up_score", "reason"]


def load_profiles(path) -> tuple[list[Profile], dict[str, Profile], dict[str, int]]:
    """Parse a profile file: id<TAB>first<TAB>last<TAB>friend,friend,...

    Raw names are normalized on load. Records whose names normalize to
    nothing are skipped and tallied; duplicate and self friend references
    are dropped and tallied.
    """
    profiles: list[Profile] = []
    by_id: dict[str, Profile] = {}
    diagnostics: Counter = Counter()
    intern = sys.intern
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise ParseError(f"expected 4 tab-separated fields, got {len(fields)}", str(path), lineno)
            pid, raw_first, raw_last, friends_field = fields
            if not pid:
                raise ParseError("empty profile id", str(path), lineno)
            if pid in by_id:
                raise DuplicateId(f"{path}:{lineno}: profile id {pid!r} seen twice")
            try:
                first = romanize(raw_first)
                last = romanize(raw_last)
            except EmptyName:
                diagnostics["profiles_skipped_empty_name"] += 1
                continue
            friend_ids = [f for f in friends_field.split(",") if f]
            deduped = list(dict.fromkeys(friend_ids))
            if len(deduped) < len(friend_ids):
                diagnostics["duplicate_friend_refs"] += len(friend_ids) - len(deduped)
            if pid in deduped:
                deduped.remove(pid)
                diagnostics["self_friend_refs"] += 1
            pid = intern(pid)
            profile = Profile(pid, intern(first), intern(last),
                              tuple(intern(f) for f in deduped))
            profiles.append(profile)
            by_id[pid] = profile
    return profiles, by_id, dict(diagnostics)


class FriendNameResolver:
    """Resolve a profile's friend ids to (first, last) names, with a cache.

    Unresolvable ids (friends outside the loaded network) are silently
    skipped here; count_unresolved() reports them corpus-wide.
    """

    def __init__(self, by_id: dict[str, Profile]):
        self._by_id = by_id
        self._cache: dict[str, list[FriendName]] = {}

    def __call__(self, profile: Profile) -> list[FriendName]:
        names = self._cache.get(profile.id)
        if names is None:
            by_id = self._by_id
            names = []
            for friend_id in profile.friends:
                friend = by_id.get(friend_id)
                if friend is not None:
                    names.append((friend.first, friend.last))
            self._cache[profile.id] = names
        return names

    def count_unresolved(self, profiles: Iterable[Profile]) -> int:
        by_id = self._by_id
        return sum(1 for p in profiles for f in p.friends if f not in by_id)


@dataclass
class MatchRun:
    """Summary of one batch run."""

    config: MatchConfig
    source_count: int
    target_count: int
    matched_count: int
    reason_counts: dict[str, int]
    wall_time: float
    diagnostics: dict[str, int] = field(default_factory=dict)
    precision: float | None = None
    recall: float | None = None


def dedup_targets(decisions: Sequence[MatchDecision]) -> list[MatchDecision]:
    """Keep, per target, only the highest-scoring match; demote the rest.

    Ties go to the smallest source id. Non-matched decisions pass through
    untouched and input order is preserved, so every source appears exactly
    once in the result.
    """
    by_target: dict[str, list[int]] = {}
    for pos, decision in enumerate(decisions):
        if decision.reason is Reason.MATCHED:
            by_target.setdefault(decision.best_target_id, []).append(pos)
    out = list(decisions)
    for positions in by_target.values():
        if len(positions) == 1:
            continue
        positions.sort(key=lambda pos: (-out[pos].score, out[pos].source_id))
        for pos in positions[1:]:
            out[pos] = out[pos].demote(Reason.LOST_DEDUP)
    return out


# Worker state inherited through fork; set just before the pool spawns.
_SHARED: dict = {}


def _match_shard(bounds: tuple[int, int]) -> list[MatchDecision]:
    lo, hi = bounds
    state = _SHARED
    index: CandidateIndex = state["index"]
    synonyms: SynonymDictionary = state["synonyms"]
    stats: NameStats = state["stats"]
    cfg: MatchConfig = state["cfg"]
    sources: list[Profile] = state["sources"]
    friend_names: list[list[FriendName]] = state["source_friend_names"]
    target_friends: FriendNameResolver = state["target_friends"]
    return [
        match_one(sources[i], index, synonyms, stats, cfg, friend_names[i], target_friends)
        for i in range(lo, hi)
    ]


def _run_map_phase(n_sources: int, workers: int) -> list[MatchDecision]:
    if workers <= 1 or n_sources == 0:
        return _match_shard((0, n_sources))
    try:
        ctx = multiprocessing.get_context("fork")
    except ValueError:
        log.warning("fork start method unavailable; matching sequentially")
        return _match_shard((0, n_sources))
    shard_count = min(workers * 4, n_sources)
    step = -(-n_sources // shard_count)
    bounds = [(lo, min(lo + step, n_sources)) for lo in range(0, n_sources, step)]
    with ctx.Pool(processes=workers) as pool:
        shards = pool.map(_match_shard, bounds)
    return [decision for shard in shards for decision in shard]


def run_match(
    source_path,
    target_path,
    out_path,
    cfg: MatchConfig | None = None,
    *,
    synonyms_path=None,
    truth_path=None,
    workers: int = 1,
    decision_log_path=None,
) -> MatchRun:
    """Match every source profile against the target network.

    Writes matched pairs to out_path (sorted by source id) and, if asked,
    the full per-source decision log. When a ground-truth file is supplied
    the run summary also carries precision/recall.
    """
    cfg = (cfg or MatchConfig()).validate()
    started = time.perf_counter()

    targets, targets_by_id, diagnostics = load_profiles(target_path)
    diagnostics = {f"target_{k}": v for k, v in diagnostics.items()}
    log.info("loaded %d target profiles", len(targets))
    stats = build_stats(targets) if targets else NameStats()
    index = build_index(targets, cfg.candidate_distance)
    synonyms = SynonymDictionary.load(synonyms_path) if synonyms_path else SynonymDictionary()

    sources, _, src_diag = load_profiles(source_path)
    diagnostics.update({f"source_{k}": v for k, v in src_diag.items()})
    log.info("loaded %d source profiles", len(sources))

    source_resolver = FriendNameResolver({p.id: p for p in sources})
    target_resolver = FriendNameResolver(targets_by_id)
    diagnostics["source_unresolved_friend_refs"] = source_resolver.count_unresolved(sources)
    diagnostics["target_unresolved_friend_refs"] = target_resolver.count_unresolved(targets)

    _SHARED.clear()
    _SHARED.update(
        index=index,
        synonyms=synonyms,
        stats=stats,
        cfg=cfg,
        sources=sources,
        source_friend_names=[source_resolver(p) for p in sources],
        target_friends=target_resolver,
    )
    try:
        decisions = _run_map_phase(len(sources), workers)
    finally:
        _SHARED.clear()

    decisions = dedup_targets(decisions)
    decisions.sort(key=lambda d: d.source_id)

    write_matches(out_path, decisions)
    if decision_log_path:
        write_decision_log(decision_log_path, decisions)

    reason_counts = Counter(d.reason.value for d in decisions)
    run = MatchRun(
        config=cfg,
        source_count=len(sources),
        target_count=len(targets),
        matched_count=reason_counts.get(Reason.MATCHED.value, 0),
        reason_counts=dict(reason_counts),
        wall_time=time.perf_counter() - started,
        diagnostics=diagnostics,
    )
    if truth_path:
        from .evaluation import evaluate

        point = evaluate(out_path, truth_path, source_ids={p.id for p in sources})
        run.precision, run.recall = point.precision, point.recall
    return run


def _format_score(value: float | None) -> str:
    return "" if value is None else repr(value)


def write_matches(path, decisions: Iterable[MatchDecision]) -> None:
    """Write matched pairs only, sorted by source id."""
    rows = sorted((d for d in decisions if d.reason is Reason.MATCHED), key=lambda d: d.source_id)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for d in rows:
            writer.writerow([d.source_id, d.target_id, _format_score(d.score),
                             _format_score(d.runner_up_score), d.reason.value])


def write_decision_log(path, decisions: Iterable[MatchDecision]) -> None:
    """Write one row per source, matches and non-matches alike.

    In non-match rows the target_id column names the best candidate that
    was considered (empty when there were none); this is what lets
    threshold sweeps replay a run without re-scoring.
    """
    rows = sorted(decisions, key=lambda d: d.source_id)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for d in rows:
            writer.writerow([d.source_id, d.best_target_id or "", _format_score(d.score),
                             _format_score(d.runner_up_score), d.reason.value])


def read_decisions(path) -> list[MatchDecision]:
    """Read a match output or decision log back into MatchDecision objects."""
    decisions = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, 1):
            if not row or row == CSV_HEADER:
                continue
            if len(row) != len(CSV_HEADER):
                raise ParseError(f"expected {len(CSV_HEADER)} columns, got {len(row)}", str(path), lineno)
            source_id, target_id, score, runner_up, reason = row
            try:
                decisions.append(MatchDecision(
                    source_id=source_id,
                    best_target_id=target_id or None,
                    score=float(score) if score else None,
                    runner_up_score=float(runner_up) if runner_up else None,
                    reason=Reason(reason),
                ))
            except ValueError as exc:
                raise ParseError(str(exc), str(path), lineno)
    return decisions
