"""Exact continued fractions, standard words and rational rotation codings.

Everything here is exact: slopes and intercepts are :class:`fractions.Fraction`
values and circle points live in ``[0, 1)``.  Irrational-slope words are never
produced by rotation; they come combinatorially from the standard word
recurrence or from substitutions (see :mod:`squareful.omega`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

LEFT_CLOSED = "left"    # I0 = [0, 1-alpha),  I1 = [1-alpha, 1)
RIGHT_CLOSED = "right"  # I0 = (0, 1-alpha],  I1 = (1-alpha, 1]


@dataclass(frozen=True)
class ContinuedFraction:
    """A finite continued fraction ``[a0; a1, a2, ...]``.

    Canonical form: the last quotient of a finite expansion is at least 2
    (an input ending in 1 is folded into the previous quotient), so every
    rational has a unique representation.
    """

    quotients: tuple[int, ...]

    def __post_init__(self):
        q = self.quotients
        if len(q) == 0:
            raise ValueError("need at least one partial quotient")
        if any(a < 1 for a in q[1:]):
            raise ValueError("partial quotients a_k must be >= 1 for k >= 1")
        if len(q) > 1 and q[-1] == 1:
            q = q[:-2] + (q[-2] + 1,)
            object.__setattr__(self, "quotients", q)

    @classmethod
    def parse(cls, text: str) -> "ContinuedFraction":
        """Parse the ``"[a0;a1,a2,...]"`` notation used on the command line."""
        m = re.fullmatch(r"\s*\[\s*(-?\d+)\s*(?:;((?:\s*\d+\s*,)*\s*\d+\s*))?\]\s*", text)
        if not m:
            raise ValueError(f"cannot parse continued fraction {text!r}")
        a0 = int(m.group(1))
        rest = tuple(int(t) for t in m.group(2).split(",")) if m.group(2) else ()
        return cls((a0,) + rest)

    @classmethod
    def of_fraction(cls, x: Fraction) -> "ContinuedFraction":
        quots = []
        num, den = x.numerator, x.denominator
        while den:
            a, r = divmod(num, den)
            quots.append(a)
            num, den = den, r
        return cls(tuple(quots))

    def value(self) -> Fraction:
        val = Fraction(self.quotients[-1])
        for a in reversed(self.quotients[:-1]):
            val = a + 1 / val
        return val

    def convergents(self, k: int | None = None) -> list[Fraction]:
        """Convergents ``p_0/q_0 .. p_k/q_k`` via the standard recurrence."""
        if k is None:
            k = len(self.quotients) - 1
        if k >= len(self.quotients):
            raise ValueError(f"only {len(self.quotients)} partial quotients available")
        out = []
        p_prev, q_prev = 1, 0
        p, q = self.quotients[0], 1
        out.append(Fraction(p, q))
        for a in self.quotients[1 : k + 1]:
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q
            out.append(Fraction(p, q))
        return out

    def semiconvergents(self, k: int) -> list[Fraction]:
        """Intermediate fractions ``(l*p_{k-1} + p_{k-2}) / (l*q_{k-1} + q_{k-2})``
        for ``1 <= l < a_k``; empty when ``a_k == 1``."""
        if k < 2 or k >= len(self.quotients):
            raise ValueError("semiconvergents need 2 <= k < number of quotients")
        convs = self.convergents(k - 1)
        p1, q1 = convs[-1].numerator, convs[-1].denominator
        p0, q0 = convs[-2].numerator, convs[-2].denominator
        a_k = self.quotients[k]
        return [Fraction(l * p1 + p0, l * q1 + q0) for l in range(1, a_k)]


def standard_word(d: tuple[int, ...] | list[int], k: int) -> str:
    """Standard word ``s_k`` from ``s_k = s_{k-1}^{d_k} s_{k-2}``, ``s_-1 = 1``, ``s_0 = 0``.

    ``d`` is the directive sequence ``(d_1, d_2, ...)``; the associated slope is
    ``[0; d_1 + 1, d_2, d_3, ...]``.
    """
    if k < -1:
        raise ValueError("standard words are defined for k >= -1")
    if k >= 0 and len(d) < k:
        raise ValueError(f"need {k} directive entries, got {len(d)}")
    prev, cur = "1", "0"
    for i in range(1, k + 1):
        prev, cur = cur, cur * d[i - 1] + prev
    return cur if k >= 0 else prev


def reversed_standard_word(d: tuple[int, ...] | list[int], k: int) -> str:
    return standard_word(d, k)[::-1]


@dataclass(frozen=True)
class Arc:
    """A half-open circle arc, possibly wrapping through 0.

    ``left`` convention arcs are ``[lo, hi)``; ``right`` convention arcs are
    ``(lo, hi]``.  A wrapped arc is reported in two pieces.
    """

    lo: Fraction
    hi: Fraction
    closed_side: str = LEFT_CLOSED

    @property
    def wraps(self) -> bool:
        return self.hi < self.lo or (self.hi == self.lo)

    @property
    def length(self) -> Fraction:
        return (self.hi - self.lo) % 1

    def pieces(self) -> list[tuple[Fraction, Fraction]]:
        if not self.wraps:
            return [(self.lo, self.hi)]
        return [(self.lo, Fraction(1)), (Fraction(0), self.hi)]

    def representative(self) -> Fraction:
        """A point of the arc respecting the endpoint convention."""
        return self.lo if self.closed_side == LEFT_CLOSED else self.hi

    def contains(self, rho: Fraction) -> bool:
        rho = rho % 1
        if self.closed_side == LEFT_CLOSED:
            if not self.wraps:
                return self.lo <= rho < self.hi
            return rho >= self.lo or rho < self.hi
        if not self.wraps:
            return self.lo < rho <= self.hi
        return rho > self.lo or rho <= self.hi


@dataclass(frozen=True)
class RotationSystem:
    """Rational circle rotation with the two-interval coding.

    The slope must have at least three partial quotients; with fewer the
    codings do not contain the six minimal squares and the square root map
    theorem does not apply.
    """

    slope: Fraction
    convention: str = LEFT_CLOSED
    _cf: ContinuedFraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.slope < 1:
            raise ValueError("slope must lie in (0, 1)")
        if self.convention not in (LEFT_CLOSED, RIGHT_CLOSED):
            raise ValueError(f"unknown endpoint convention {self.convention!r}")
        cf = ContinuedFraction.of_fraction(self.slope)
        if len(cf.quotients) < 4:  # [0; a1, a2, a3] has 4 entries
            raise ValueError(
                f"slope {self.slope} has continued fraction {list(cf.quotients)}; "
                "need at least three partial quotients past a0"
            )
        object.__setattr__(self, "_cf", cf)

    @property
    def cf(self) -> ContinuedFraction:
        return self._cf

    @property
    def q(self) -> int:
        return self.slope.denominator

    def params(self) -> tuple[int, int]:
        """The square-alphabet parameters carried by this slope."""
        a1, a2 = self._cf.quotients[1], self._cf.quotients[2]
        return a1 - 1, a2 - 1

    def letter(self, rho: Fraction) -> str:
        rho = rho % 1
        boundary = 1 - self.slope
        if self.convention == LEFT_CLOSED:
            return "0" if rho < boundary else "1"
        # (0, 1-alpha] is coded 0; the point 0 (= 1) falls in I1
        return "0" if 0 < rho <= boundary else "1"

    def coding(self, rho: Fraction, n: int) -> str:
        """First ``n`` letters of the rotation word of intercept ``rho``."""
        rho = rho % 1
        out = []
        for _ in range(n):
            out.append(self.letter(rho))
            rho = (rho + self.slope) % 1
        return "".join(out)

    def level_arcs(self, n: int) -> list[Arc]:
        """The arcs cut by the points ``{-j*slope}`` for ``0 <= j <= n``, in circle order."""
        pts = sorted({(-j * self.slope) % 1 for j in range(n + 1)})
        arcs = []
        for i, lo in enumerate(pts):
            hi = pts[(i + 1) % len(pts)]
            arcs.append(Arc(lo, hi, self.convention))
        return arcs

    def factor_interval(self, w: str) -> Arc | None:
        """The arc of intercepts whose coding begins with ``w``, or None.

        Requires ``len(w) < q`` so that the arc is a genuine subinterval.
        """
        if not 0 < len(w) <= self.q:
            raise ValueError(f"factor length must be in 1..{self.q}")
        for arc in self.level_arcs(len(w)):
            if self.coding(arc.representative(), len(w)) == w:
                return arc
        return None

    def sqrt_intercept(self, rho: Fraction) -> Fraction:
        """Intercept of the square root of the rotation word of intercept ``rho``.

        Maps ``rho`` halfway toward the point ``1 - slope`` within its coding
        interval; the branch at 0 follows the endpoint convention.
        """
        rho = rho % 1
        if rho == 0:
            if self.convention == LEFT_CLOSED:  # 0 in I0
                return (1 - self.slope) / 2
            return 1 - self.slope / 2
        return (rho + 1 - self.slope) / 2

    def verify_lex_interval_order(self, n: int) -> bool:
        """Self-test: circle order of the level-``n`` arcs matches lexicographic
        order of the associated factors."""
        arcs = self.level_arcs(n)
        start = next(i for i, arc in enumerate(arcs) if arc.lo == 0)
        ordered = arcs[start:] + arcs[:start]
        factors = [self.coding(arc.representative(), n) for arc in ordered]
        return factors == sorted(factors)
