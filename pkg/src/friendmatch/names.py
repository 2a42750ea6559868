"""Statistical name layer: frequency tables and the first-name synonym dictionary.

Frequencies are counted over the target network and drive the
inverse-frequency weighting of friend matches. The synonym dictionary groups
first-name variants (formal names, nicknames, transliteration alternatives)
into equivalence classes built from profile pairs known to belong to the
same person: frequent co-occurring name pairs form edges of an undirected
graph whose connected components become the classes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import EmptyCorpus, ParseError
from .profiles import Profile


@dataclass
class NameStats:
    """First/last name occurrence counts plus the total profile count."""

    first_freq: Counter = field(default_factory=Counter)
    last_freq: Counter = field(default_factory=Counter)
    total: int = 0

    def first_count(self, name: str) -> int:
        return self.first_freq.get(name, 0)

    def last_count(self, name: str) -> int:
        return self.last_freq.get(name, 0)

    def merge(self, other: "NameStats") -> "NameStats":
        """Combine per-shard partial counts; counts are plain sums."""
        self.first_freq.update(other.first_freq)
        self.last_freq.update(other.last_freq)
        self.total += other.total
        return self


def build_stats(profiles: Iterable[Profile]) -> NameStats:
    """Count every canonical first/last name in a profile stream."""
    stats = NameStats()
    for profile in profiles:
        stats.first_freq[profile.first] += 1
        stats.last_freq[profile.last] += 1
        stats.total += 1
    if stats.total == 0:
        raise EmptyCorpus("profile stream yielded no profiles")
    return stats


def save_stats(stats: NameStats, first_path, last_path) -> None:
    """Write each frequency table as name<TAB>count lines plus a total line."""
    for path, freq in ((first_path, stats.first_freq), (last_path, stats.last_freq)):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{stats.total}\n")
            for name in sorted(freq):
                fh.write(f"{name}\t{freq[name]}\n")


def load_stats(first_path, last_path) -> NameStats:
    stats = NameStats()
    totals = []
    for path, freq in ((first_path, stats.first_freq), (last_path, stats.last_freq)):
        total = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                if "\t" not in line:
                    try:
                        total = int(line.strip())
                    except ValueError:
                        raise ParseError("expected 'name<TAB>count' or a bare total", str(path), lineno)
                    continue
                name, _, count = line.partition("\t")
                try:
                    freq[name] = int(count)
                except ValueError:
                    raise ParseError(f"bad count {count!r}", str(path), lineno)
        if total is None:
            raise ParseError("missing total line", str(path), 0)
        totals.append(total)
    if totals[0] != totals[1]:
        raise ParseError(f"total mismatch between tables: {totals[0]} != {totals[1]}", str(last_path), 0)
    stats.total = totals[0]
    return stats


@dataclass(frozen=True)
class NamePair:
    """An unordered pair of distinct first names with a co-occurrence count."""

    a: str
    b: str
    count: int

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError("NamePair stores names in lexicographic order")


def extract_name_pairs(
    matched_pairs: Iterable[tuple[Profile, Profile]],
    diagnostics: dict | None = None,
) -> list[NamePair]:
    """Aggregate differing first names of known-same-person profile pairs.

    Identical first names yield nothing; records missing a first name are
    skipped and tallied under diagnostics["skipped_pairs"].
    """
    counts: Counter = Counter()
    skipped = 0
    for src, tgt in matched_pairs:
        a = getattr(src, "first", None)
        b = getattr(tgt, "first", None)
        if not a or not b:
            skipped += 1
            continue
        if a == b:
            continue
        counts[(a, b) if a <= b else (b, a)] += 1
    if diagnostics is not None:
        diagnostics["skipped_pairs"] = diagnostics.get("skipped_pairs", 0) + skipped
    return [NamePair(a, b, n) for (a, b), n in sorted(counts.items())]


class _UnionFind:
    """Disjoint sets with path compression; keys are names."""

    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x: str) -> str:
        parent = self.parent
        if x not in parent:
            parent[x] = x
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: str, y: str) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        # Smaller representative wins so components are order-independent.
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx


class SynonymDictionary:
    """Equivalence classes of first-name variants.

    Names not listed anywhere form implicit singleton classes, so
    variants() is total.
    """

    def __init__(self, classes: Iterable[Iterable[str]] = ()):
        self.class_of: dict[str, int] = {}
        self.members: dict[int, frozenset[str]] = {}
        for names in classes:
            group = frozenset(names)
            if len(group) < 2:
                continue
            class_id = len(self.members)
            for name in group:
                if name in self.class_of:
                    raise ValueError(f"name {name!r} appears in two classes")
                self.class_of[name] = class_id
            self.members[class_id] = group

    def variants(self, name: str) -> frozenset[str]:
        """All names treated as interchangeable with `name`, itself included."""
        class_id = self.class_of.get(name)
        if class_id is None:
            return frozenset((name,))
        return self.members[class_id]

    def __len__(self) -> int:
        return len(self.members)

    def classes(self) -> Iterator[frozenset[str]]:
        for class_id in sorted(self.members):
            yield self.members[class_id]

    def export(self, path, flag_size: int = 50) -> None:
        """Write one class per line for manual review and later re-import.

        Classes larger than flag_size get a warning comment so reviewers
        notice suspicious over-merges before accepting the file.
        """
        groups = sorted((sorted(g) for g in self.members.values()), key=lambda g: g[0])
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# one synonym class per line, names space-separated\n")
            for group in groups:
                if len(group) > flag_size:
                    fh.write(f"# review: next class has {len(group)} names (limit {flag_size})\n")
                fh.write(" ".join(group) + "\n")

    @classmethod
    def load(cls, path) -> "SynonymDictionary":
        classes = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                names = line.split()
                if len(names) != len(set(names)):
                    raise ParseError("duplicate name within a class", str(path), lineno)
                classes.append(names)
        try:
            return cls(classes)
        except ValueError as exc:
            raise ParseError(str(exc), str(path), 0)


def build_synonyms(pairs: Iterable[NamePair], min_count: int = 2) -> SynonymDictionary:
    """Connected components of the pair graph, ignoring infrequent pairs.

    Pairs seen fewer than min_count times are treated as noise (people using
    unrelated names across networks) and contribute no edges.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    uf = _UnionFind()
    for pair in pairs:
        if pair.count >= min_count:
            uf.union(pair.a, pair.b)
    components: dict[str, set[str]] = {}
    for name in uf.parent:
        components.setdefault(uf.find(name), set()).add(name)
    groups = [sorted(g) for g in components.values() if len(g) >= 2]
    groups.sort(key=lambda g: g[0])
    return SynonymDictionary(groups)
