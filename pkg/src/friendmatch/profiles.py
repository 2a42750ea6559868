"""The profile record shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True, slots=True)
class Profile:
    """One user record: opaque id, canonical names, friend ids.

    Friend ids resolve within the profile's own network. The loader
    guarantees names are canonical and non-empty, friends hold no
    duplicates, and a profile never lists itself.
    """

    id: str
    first: str
    last: str
    friends: tuple[str, ...] = field(default_factory=tuple)
