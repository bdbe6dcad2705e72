"""Primitives for finite binary words.

Words are plain Python strings over a two-letter alphabet, either ``{'0','1'}``
or ``{'S','L'}`` (block-level words).  Indexing is 0-based throughout and every
operation returns a fresh string.
"""

from __future__ import annotations


def cyclic_shift(w: str) -> str:
    """Rotate ``w`` one position to the left: ``a0 a1 .. a(n-1) -> a1 .. a(n-1) a0``."""
    if not w:
        raise ValueError("cyclic shift of the empty word is undefined")
    return w[1:] + w[0]


def conjugates(w: str) -> list[str]:
    """All rotations of ``w`` in order, starting with ``w`` itself.

    The list has exactly ``len(w)`` entries and contains repeats when ``w``
    is a proper power.
    """
    if not w:
        raise ValueError("the empty word has no conjugates")
    return [w[i:] + w[:i] for i in range(len(w))]


def prefix_function(w: str) -> list[int]:
    """Knuth-Morris-Pratt failure function of ``w``."""
    pi = [0] * len(w)
    k = 0
    for i in range(1, len(w)):
        while k and w[i] != w[k]:
            k = pi[k - 1]
        if w[i] == w[k]:
            k += 1
        pi[i] = k
    return pi


def minimal_period(w: str) -> int:
    """Smallest ``p`` with ``w[i] == w[i+p]`` for all valid ``i``.

    The period is not required to divide ``len(w)``.
    """
    if not w:
        raise ValueError("the empty word has no period")
    return len(w) - prefix_function(w)[-1]


def is_primitive(w: str) -> bool:
    """True iff ``w`` is not a proper integer power of a shorter word.

    Uses the classic criterion: a primitive word occurs in its square only at
    the two trivial positions.
    """
    if not w:
        raise ValueError("primitivity of the empty word is undefined")
    return (w + w).find(w, 1) == len(w)


def lex_less(u: str, v: str) -> bool:
    """Strict lexicographic order with 0 < 1; a proper prefix is smaller."""
    bad = (set(u) | set(v)) - {"0", "1"}
    if bad:
        raise ValueError(f"lex_less compares words over {{0,1}}, got letters {sorted(bad)}")
    return u < v


def swap_first_two(w: str) -> str:
    """Exchange the first two letters of ``w`` (requires ``len(w) >= 2``)."""
    if len(w) < 2:
        raise ValueError("cannot swap the first two letters of a word shorter than 2")
    return w[1] + w[0] + w[2:]


def drop_suffix(w: str, v: str) -> str:
    """Return ``u`` where ``w == u + v``; ``v`` must be a suffix of ``w``."""
    if v and not w.endswith(v):
        raise ValueError(f"{v!r} is not a suffix of {w!r}")
    return w[: len(w) - len(v)]
