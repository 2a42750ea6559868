"""Levenshtein edit distance, plain and bounded.

The plain version is the standard two-row dynamic program. The bounded
version only fills a diagonal band of width 2k+1 and gives up early, which
is what the candidate index uses for verification; it returns the exact
distance whenever that distance is <= k.
"""


def levenshtein(a: str, b: str) -> int:
    """Exact edit distance (insertions, deletions, substitutions)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        append = cur.append
        for j, cb in enumerate(b, 1):
            if ca == cb:
                append(prev[j - 1])
            else:
                append(min(prev[j - 1], prev[j], cur[j - 1]) + 1)
        prev = cur
    return prev[-1]


def levenshtein_bounded(a: str, b: str, bound: int) -> int:
    """Edit distance if it is <= bound, otherwise bound + 1.

    Cheaper than the full DP for small bounds because only cells within
    `bound` of the main diagonal can hold a value <= bound.
    """
    if a == b:
        return 0
    n, m = len(a), len(b)
    if abs(n - m) > bound:
        return bound + 1
    if bound <= 0:
        return bound + 1
    if n < m:
        a, b, n, m = b, a, m, n
    big = bound + 1
    prev = list(range(m + 1))
    for i in range(1, n + 1):
        lo = max(1, i - bound)
        hi = min(m, i + bound)
        cur = [big] * (m + 1)
        if lo == 1:
            cur[0] = i
        ca = a[i - 1]
        best = cur[0] if lo == 1 else big
        for j in range(lo, hi + 1):
            if ca == b[j - 1]:
                v = prev[j - 1]
            else:
                v = min(prev[j - 1], prev[j], cur[j - 1]) + 1
            cur[j] = v
            if v < best:
                best = v
        if best > bound:
            return big
        prev = cur
    return prev[m] if prev[m] <= bound else big


def within_distance(a: str, b: str, bound: int) -> bool:
    """True iff the edit distance between a and b is <= bound."""
    return levenshtein_bounded(a, b, bound) <= bound
