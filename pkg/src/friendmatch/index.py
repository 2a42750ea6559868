"""Fuzzy name index over the target network.

Retrieval contract: for a query (first, last) the index returns exactly the
profiles whose names satisfy the similarity predicate (equal first letters
and edit distance within the bound, on both name fields) without scanning
the whole network.

Layout: profiles are partitioned by the first letter of the last name
(surnames are the more selective field). Within a partition, distinct last
names live in a deletion-neighborhood lexicon that answers "which stored
words are within edit distance d of this query" with a verification step,
so results are exact. Under each last name, first names are bucketed by
their first letter and checked with a bounded edit-distance scan.
"""

from __future__ import annotations

import itertools
import pickle
from typing import Iterable, Iterator

from .editdist import within_distance
from .errors import DuplicateId
from .names import SynonymDictionary
from .profiles import Profile

_MAGIC = b"FMIX1\n"


def names_similar(a: str, b: str, bound: int) -> bool:
    """True iff the names share a first letter and are within edit distance bound."""
    return a[0] == b[0] and within_distance(a, b, bound)


def _deletion_keys(word: str, max_deletions: int) -> set[str]:
    """The word plus every variant obtainable by deleting up to max_deletions chars.

    If lev(a, b) <= d then a and b share at least one key, so colliding
    keys give a candidate superset that a real distance check then filters.
    """
    keys = {word}
    length = len(word)
    for deletions in range(1, min(max_deletions, length) + 1):
        for combo in itertools.combinations(word, length - deletions):
            keys.add("".join(combo))
    return keys


class _FuzzyLexicon:
    """Deletion-neighborhood index over a set of words for one partition."""

    def __init__(self, bound: int):
        self.bound = bound
        self._buckets: dict[str, list[str]] = {}

    def add(self, word: str) -> None:
        for key in _deletion_keys(word, self.bound):
            self._buckets.setdefault(key, []).append(word)

    def lookup(self, word: str) -> list[str]:
        """Stored words within edit distance bound of `word`, verified."""
        if self.bound == 0:
            return [word] if word in self._buckets and word in self._buckets[word] else []
        seen: dict[str, None] = {}
        for key in _deletion_keys(word, self.bound):
            for candidate in self._buckets.get(key, ()):
                seen[candidate] = None
        return [c for c in seen if within_distance(word, c, self.bound)]


class CandidateIndex:
    """First-letter partitioned fuzzy index over target profiles."""

    def __init__(self, bound: int = 1):
        if bound not in (0, 1, 2):
            raise ValueError(f"distance bound must be 0, 1 or 2, got {bound}")
        self.bound = bound
        self._lexicons: dict[str, _FuzzyLexicon] = {}
        # partition letter -> last name -> first letter -> first name -> profiles
        self._groups: dict[str, dict[str, dict[str, dict[str, list[Profile]]]]] = {}
        self._ids: set[str] = set()

    def __len__(self) -> int:
        return len(self._ids)

    def add(self, profile: Profile) -> None:
        if profile.id in self._ids:
            raise DuplicateId(f"target profile id {profile.id!r} seen twice")
        self._ids.add(profile.id)
        letter = profile.last[0]
        partition = self._groups.get(letter)
        if partition is None:
            partition = self._groups[letter] = {}
            self._lexicons[letter] = _FuzzyLexicon(self.bound)
        by_last = partition.get(profile.last)
        if by_last is None:
            by_last = partition[profile.last] = {}
            self._lexicons[letter].add(profile.last)
        by_last.setdefault(profile.first[0], {}).setdefault(profile.first, []).append(profile)

    def lookup(self, first: str, last: str) -> Iterator[Profile]:
        """Profiles whose names are both similar to the query names."""
        partition = self._groups.get(last[0])
        if partition is None:
            return
        for stored_last in self._lexicons[last[0]].lookup(last):
            bucket = partition[stored_last].get(first[0])
            if not bucket:
                continue
            for stored_first, profiles in bucket.items():
                if within_distance(first, stored_first, self.bound):
                    yield from profiles

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            pickle.dump(self, fh, protocol=pickle.HIGHEST_PROTOCOL)

    @classmethod
    def load(cls, path) -> "CandidateIndex":
        with open(path, "rb") as fh:
            magic = fh.read(len(_MAGIC))
            if magic != _MAGIC:
                raise ValueError(f"{path}: not a serialized index (bad magic {magic!r})")
            index = pickle.load(fh)
        if not isinstance(index, cls):
            raise ValueError(f"{path}: payload is not a {cls.__name__}")
        return index


def build_index(profiles: Iterable[Profile], bound: int = 1) -> CandidateIndex:
    """Index every target profile exactly once."""
    index = CandidateIndex(bound)
    for profile in profiles:
        index.add(profile)
    return index


def generate_candidates(
    index: CandidateIndex,
    source: Profile,
    synonyms: SynonymDictionary | None = None,
) -> set[Profile]:
    """All target profiles name-similar to the source profile.

    The source first name is expanded through its synonym class; each
    variant is queried separately and the results are unioned. Last names
    are never expanded.
    """
    variants = synonyms.variants(source.first) if synonyms is not None else (source.first,)
    found: set[Profile] = set()
    for variant in variants:
        found.update(index.lookup(variant, source.last))
    return found
