"""Name normalization: raw Cyrillic/Latin names to canonical lowercase Latin.

A canonical name contains only [a-z], hyphens, apostrophes, and single
spaces between tokens of multi-token names. Cyrillic letters are converted
through a romanization table shipped with the package (data/bgn_ru.tsv);
Latin letters pass through with diacritics folded to base ASCII; everything
else is stripped. Normalization is idempotent: romanizing an already
canonical name returns it unchanged.
"""

from __future__ import annotations

import unicodedata
from functools import lru_cache
from importlib import resources

from .errors import EmptyName, ParseError

# Letters that make the following е/ё take their glide ("y"-prefixed) form.
_CYRILLIC_VOWELS_AND_SIGNS = set("аеёиоуыэюяйъьіїєў")

_FLAGS = ("initial", "after-vowel")

# Latin letters NFKD cannot reduce to ASCII on its own.
_LATIN_EXTRAS = {
    "ø": "o", "œ": "oe", "æ": "ae", "ß": "ss", "đ": "d", "ð": "d",
    "ł": "l", "þ": "th", "ı": "i",
}

_APOSTROPHES = "'’‘ʼ`´′"
_HYPHENS = "-‐‑‒–—−"


class RomanizationTable:
    """Per-letter replacement rules with optional positional variants."""

    def __init__(self, rules: dict[str, dict[str | None, str]]):
        self._rules = rules

    @classmethod
    def from_file(cls, path) -> "RomanizationTable":
        with open(path, encoding="utf-8") as fh:
            return cls._parse(fh, str(path))

    @classmethod
    def _parse(cls, lines, origin: str) -> "RomanizationTable":
        rules: dict[str, dict[str | None, str]] = {}
        for lineno, line in enumerate(lines, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise ParseError("expected 2 or 3 tab-separated fields", origin, lineno)
            src, dst = fields[0], fields[1]
            flag = fields[2] if len(fields) == 3 else None
            if len(src) != 1:
                raise ParseError(f"source must be a single character, got {src!r}", origin, lineno)
            if flag is not None and flag not in _FLAGS:
                raise ParseError(f"unknown position flag {flag!r}", origin, lineno)
            rules.setdefault(src, {})[flag] = dst
        return cls(rules)

    def lookup(self, char: str, initial: bool, after_vowel: bool) -> str | None:
        """Replacement for char in the given position, None if unmapped."""
        variants = self._rules.get(char)
        if variants is None:
            return None
        if initial and "initial" in variants:
            return variants["initial"]
        if after_vowel and "after-vowel" in variants:
            return variants["after-vowel"]
        return variants.get(None, variants.get("initial"))

    def __contains__(self, char: str) -> bool:
        return char in self._rules


@lru_cache(maxsize=1)
def default_table() -> RomanizationTable:
    text = resources.files("friendmatch.data").joinpath("bgn_ru.tsv").read_text("utf-8")
    return RomanizationTable._parse(text.splitlines(), "friendmatch/data/bgn_ru.tsv")


def _fold_latin(char: str) -> str:
    """Strip diacritics from one Latin character, e.g. é -> e."""
    if char in _LATIN_EXTRAS:
        return _LATIN_EXTRAS[char]
    decomposed = unicodedata.normalize("NFKD", char)
    return "".join(c for c in decomposed if "a" <= c <= "z")


def romanize(name: str, table: RomanizationTable | None = None) -> str:
    """Normalize a raw name to canonical lowercase Latin form.

    Raises EmptyName if nothing is left after stripping characters that are
    neither letters, hyphens, apostrophes, nor spaces.
    """
    if table is None:
        table = default_table()
    text = unicodedata.normalize("NFC", name).lower()

    out: list[str] = []
    prev: str | None = None
    for char in text:
        initial = prev is None or prev.isspace() or prev in _HYPHENS
        after_vowel = prev in _CYRILLIC_VOWELS_AND_SIGNS if prev else False
        if "a" <= char <= "z":
            out.append(char)
        elif char in table:
            out.append(table.lookup(char, initial, after_vowel))
        elif char in _APOSTROPHES:
            out.append("'")
        elif char in _HYPHENS:
            out.append("-")
        elif char.isspace():
            out.append(" ")
        elif char.isalpha():
            out.append(_fold_latin(char))
        # anything else (digits, punctuation, emoji) is dropped
        prev = char

    # Keep only tokens that still contain a letter; collapse space runs.
    tokens = [t for t in "".join(out).split() if any("a" <= c <= "z" for c in t)]
    if not tokens:
        raise EmptyName(f"name {name!r} is empty after normalization")
    return " ".join(tokens)


def first_letter(name: str) -> str:
    """First character of a canonical name, the blocking key for indexing."""
    return name[0]
