"""Lazy infinite words as memoized prefix oracles.

An :class:`InfiniteWord` wraps a generator of string chunks.  Queries are
monotone and memoized, so repeated ``prefix(n)`` calls agree and never redo
work.  Failures inside lazy evaluation (a square tokenizer hitting a
non-squareful stream) poison the source instead of escaping mid-iteration;
orbit drivers can then report the offending position cleanly.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .squares import SquareAlphabet, TokenizationError, square_matcher


class SourcePoisonedError(RuntimeError):
    """The underlying stream failed; the source serves no letters past the failure."""

    def __init__(self, descriptor: str, position: int):
        self.descriptor = descriptor
        self.position = position
        super().__init__(f"source {descriptor!r} poisoned at letter {position}")


class InfiniteWord:
    """Deterministic prefix oracle ``n -> first n letters``.

    A source is single-consumer: memoization mutates internal state, so a
    single instance must not be queried from several threads at once.
    Distinct sources are independent.

    ``window`` serves short slices without materializing the whole prefix,
    which keeps streaming consumers (the square root tokenizer) linear.
    """

    def __init__(self, chunks: Iterable[str], descriptor: str = "", product=None):
        self._chunks: Iterator[str] = iter(chunks)
        self._parts: list[str] = []
        self._ends: list[int] = []  # cumulative end offsets of the parts
        self._have = 0
        self._text = ""
        self.descriptor = descriptor
        self.product = product  # SLProduct provenance when known
        self.poison: TokenizationError | None = None
        self.max_queried = 0

    def ensure(self, n: int) -> None:
        if n < 0:
            raise ValueError("length must be >= 0")
        if n > self.max_queried:
            self.max_queried = n
        if self.poison is not None and n > self._have:
            raise SourcePoisonedError(self.descriptor, self.poison.position)
        while self._have < n:
            try:
                part = next(self._chunks)
            except StopIteration:
                raise SourcePoisonedError(self.descriptor, self._have) from None
            except TokenizationError as err:
                self.poison = err
                raise SourcePoisonedError(self.descriptor, err.position) from err
            if part:
                self._parts.append(part)
                self._have += len(part)
                self._ends.append(self._have)

    def prefix(self, n: int) -> str:
        self.ensure(n)
        if len(self._text) < n:
            self._text = "".join(self._parts)
        return self._text[:n]

    def window(self, start: int, stop: int) -> str:
        """The slice ``[start:stop]``, touching only the parts it overlaps."""
        if start < 0 or stop < start:
            raise ValueError("bad window bounds")
        self.ensure(stop)
        if stop <= len(self._text):
            return self._text[start:stop]
        lo = bisect.bisect_right(self._ends, start)
        out = []
        pos = self._ends[lo - 1] if lo else 0
        for part in self._parts[lo:]:
            if pos >= stop:
                break
            out.append(part[max(0, start - pos) : stop - pos])
            pos += len(part)
        return "".join(out)

    def letter(self, i: int) -> str:
        return self.window(i, i + 1)

    def as_json(self, prefix_len: int = 64) -> dict:
        return {
            "descriptor": self.descriptor,
            "prefix": self.prefix(prefix_len),
            "prefix_len": prefix_len,
        }

    def __repr__(self):
        shown = self._text[:32] if self._text else ""
        return f"<InfiniteWord {self.descriptor!r} {shown}...>"


def periodic_word(period: str, descriptor: str | None = None) -> InfiniteWord:
    """The purely periodic word ``period^omega``."""
    if not period:
        raise ValueError("period must be nonempty")
    return InfiniteWord(itertools.repeat(period), descriptor or f"({period})^w")


def from_function(f: Callable[[int], str], descriptor: str, chunk: int = 256) -> InfiniteWord:
    """Oracle built from a letter function ``i -> w[i]``."""

    def gen():
        for start in itertools.count(0, chunk):
            yield "".join(f(i) for i in range(start, start + chunk))

    return InfiniteWord(gen(), descriptor)


def shift(src: InfiniteWord, j: int) -> InfiniteWord:
    """The shifted word ``T^j(src)``, sharing the underlying memo."""
    if j < 0:
        raise ValueError("shift must be >= 0")
    if j == 0:
        return src

    def gen():
        pos = j
        step = 64
        while True:
            piece = src.window(pos, pos + step)
            yield piece
            pos += len(piece)
            step = min(2 * step, 1 << 16)

    return InfiniteWord(gen(), f"T^{j}({src.descriptor})")


def sqrt_stream(alph: SquareAlphabet, src: InfiniteWord) -> InfiniteWord:
    """Lazy square root of a squareful stream.

    Producing ``m`` letters queries at most ``2*m + |S6^2|`` letters of the
    input.  A tokenization failure (the caller handed a non-squareful source)
    poisons the output at the offending input offset.
    """
    match = square_matcher(alph)
    lookahead = alph.max_square_len

    def gen():
        pos = 0
        while True:
            view = src.window(pos, pos + lookahead)
            m = match(view)
            if m is None:
                raise TokenizationError(f"sqrt of {src.descriptor!r}", pos)
            square = m.group()
            yield square[: len(square) // 2]
            pos += len(square)

    return InfiniteWord(gen(), f"sqrt({src.descriptor})")


def detect_period(
    src: InfiniteWord, p: int, window: int, conjugate_of: str | None = None
) -> bool:
    """Certify on a window that ``src`` looks ``p``-periodic.

    This is a certified-window heuristic, not a proof: the prefix of length
    ``window`` must be ``p``-periodic and, when ``conjugate_of`` is given, the
    candidate period word must be one of its rotations.  Callers pick windows
    per the structural guarantees they hold (``window >= 3p`` at minimum).
    """
    if window < 3 * p:
        raise ValueError("window must be at least 3 periods long")
    text = src.prefix(window)
    if text[: window - p] != text[p:window]:
        return False
    period = text[:p]
    if conjugate_of is not None:
        if len(conjugate_of) != p:
            return False
        if period not in (conjugate_of[i:] + conjugate_of[:i] for i in range(p)):
            return False
    return True


@dataclass(frozen=True)
class SLProduct:
    """A shifted infinite product of two concrete block words.

    ``blocks`` is an oracle over the letters ``S``/``L`` naming which block
    occupies each position; ``shift`` drops that many letters of the expanded
    product (``0 <= shift < len(s_word)``).
    """

    blocks: InfiniteWord
    shift: int
    s_word: str
    l_word: str

    def __post_init__(self):
        if not 0 <= self.shift < len(self.s_word):
            raise ValueError(f"shift must lie in [0, {len(self.s_word)})")
        if len(self.s_word) != len(self.l_word):
            raise ValueError("block words must have equal length")

    def block(self, t: int) -> str:
        """The ``t``-th block as a concrete word."""
        return self.s_word if self.blocks.letter(t) == "S" else self.l_word

    def descriptor(self) -> str:
        return f"T^{self.shift}[{self.blocks.descriptor}]"


def expand(prod: SLProduct) -> InfiniteWord:
    """Letter-level oracle of the shifted product."""

    def gen():
        first = prod.block(0)[prod.shift :]
        if first:
            yield first
        for t in itertools.count(1):
            yield prod.block(t)

    return InfiniteWord(gen(), prod.descriptor(), product=prod)


def sl_cycle(pattern: str, s_word: str, l_word: str, shift_letters: int = 0) -> SLProduct:
    """Product whose block names repeat ``pattern`` cyclically."""
    if set(pattern) - {"S", "L"}:
        raise ValueError("pattern must be over the letters S and L")
    return SLProduct(periodic_word(pattern), shift_letters, s_word, l_word)


def sl_window(
    window: str,
    tail: Callable[[int], str],
    s_word: str,
    l_word: str,
    shift_letters: int = 0,
    descriptor: str | None = None,
) -> SLProduct:
    """Product with explicit first blocks and a block-name tail function."""

    def name(t: int) -> str:
        return window[t] if t < len(window) else tail(t)

    blocks = from_function(name, descriptor or f"{window}+tail", chunk=64)
    return SLProduct(blocks, shift_letters, s_word, l_word)
