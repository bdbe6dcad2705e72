"""The subshift of optimal squareful words built from reversed standard words.

The construction has two layers.  A block substitution

    tau: S -> L S^(2c),  L -> S^(2c+1)

generates an aperiodic minimal subshift over the letters ``S``/``L``; the
letter substitution sigma sends ``S`` and ``L`` to a reversed standard word
``w`` and its first-two-letters-swapped companion ``L(w)``.  Applying sigma to
the tau subshift yields the aperiodic part; adjoining the shifts of the
periodic word ``S^omega`` closes the system under the square root map.

``gamma(j)`` and ``gamma_bar(j)`` are the level-``j`` building blocks
``sigma(tau^j(S))`` and ``sigma(tau^j(L))``; ``big_gamma(1)`` and
``big_gamma(2)`` are the two aperiodic fixed points of the square root map.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import squares, streams, words
from .sturmian import LEFT_CLOSED, ContinuedFraction, RotationSystem, reversed_standard_word
from .squares import SquareAlphabet
from .streams import InfiniteWord, SLProduct

PLAIN = "plain"
SWAPPED = "swapped"

TYPE_A = "A"
TYPE_B = "B"
TYPE_C = "C"
TYPE_D = "D"

PRODUCT_FORM = "in_omega_a_form"
PERIODIC = "periodic"


@dataclass(frozen=True)
class OmegaParams:
    """Parameters fully determining the subshift.

    ``a``, ``b`` fix the six minimal squares, ``c`` the block substitution,
    ``k`` the index of the reversed standard word used as seed, and ``seed``
    whether the block ``S`` maps to the reversed standard word itself or to
    its swapped companion.  The slope is ``[0; a+1, b+1, tail...]`` with the
    tail defaulting to all ones; only the first ``k`` quotients ever matter.
    """

    a: int = 1
    b: int = 0
    c: int = 1
    k: int = 4
    seed: str = PLAIN
    tail: tuple[int, ...] = ()

    def __post_init__(self):
        if self.a < 1 or self.b < 0 or self.c < 1:
            raise ValueError("need a >= 1, b >= 0, c >= 1")
        if self.seed not in (PLAIN, SWAPPED):
            raise ValueError(f"seed must be {PLAIN!r} or {SWAPPED!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if any(t < 1 for t in self.tail):
            raise ValueError("tail quotients must be >= 1")

    def directive(self, upto: int) -> tuple[int, ...]:
        """Directive sequence (d_1, d_2, ...) for the standard word recurrence."""
        base = (self.a, self.b + 1) + self.tail
        if len(base) < upto:
            base = base + (1,) * (upto - len(base))
        return base[:upto]


def tau(c: int, blockword: str) -> str:
    """Blockwise image under ``S -> L S^(2c)``, ``L -> S^(2c+1)``."""
    if c < 1:
        raise ValueError("c must be >= 1")
    return blockword.translate({ord("S"): "L" + "S" * (2 * c), ord("L"): "S" * (2 * c + 1)})


class OmegaSystem:
    """Derived data and operations for one parameter choice.

    Caches the gamma tower and the tau fixed points; instances are cheap to
    share, but the lazy sources they hand out follow the single-consumer rule
    of :mod:`squareful.streams`.
    """

    def __init__(self, params: OmegaParams):
        self.params = params
        self.alphabet: SquareAlphabet = squares.build_alphabet(params.a, params.b)
        sbar = reversed_standard_word(params.directive(params.k), params.k)
        if len(sbar) <= self.alphabet.max_square_len // 2:
            raise ValueError(
                f"|reversed standard word| = {len(sbar)} must exceed "
                f"|S6| = {self.alphabet.max_square_len // 2}; pick a larger k"
            )
        seed_word = sbar if params.seed == PLAIN else words.swap_first_two(sbar)
        self.s_word = seed_word
        self.l_word = words.swap_first_two(seed_word)
        self._sigma_table = {ord("S"): self.s_word, ord("L"): self.l_word}
        self._gamma_blocks: dict[int, str] = {0: "S"}
        self._gamma_bar_blocks: dict[int, str] = {0: "L"}
        self._gamma_letters: dict[tuple[int, bool], str] = {}
        self._gamma_star: dict[int, InfiniteWord] = {}
        self._conjugate_index = {u: i for i, u in enumerate(words.conjugates(self.s_word))}

    # -- basic words ---------------------------------------------------------

    @property
    def block_len(self) -> int:
        return len(self.s_word)

    def slope(self) -> ContinuedFraction:
        """Truncation of the slope at index k, so that q_k = len(s_word)."""
        d = self.params.directive(self.params.k)
        return ContinuedFraction((0, d[0] + 1) + tuple(d[1:]))

    def rotation_system(self, convention: str = LEFT_CLOSED) -> RotationSystem:
        return RotationSystem(self.slope().value(), convention)

    def sigma(self, blockword: str) -> str:
        return blockword.translate(self._sigma_table)

    def tau_block(self, j: int, bar: bool = False) -> str:
        """``tau^j(S)`` (or ``tau^j(L)``) as a word over the block names."""
        cache = self._gamma_bar_blocks if bar else self._gamma_blocks
        top = max(cache)
        while top < j:
            top += 1
            cache[top] = tau(self.params.c, cache[top - 1])
        return cache[j]

    def gamma(self, j: int) -> str:
        key = (j, False)
        if key not in self._gamma_letters:
            self._gamma_letters[key] = self.sigma(self.tau_block(j))
        return self._gamma_letters[key]

    def gamma_bar(self, j: int) -> str:
        key = (j, True)
        if key not in self._gamma_letters:
            self._gamma_letters[key] = self.sigma(self.tau_block(j, bar=True))
        return self._gamma_letters[key]

    # -- infinite words ------------------------------------------------------

    def gamma_star(self, which: int) -> InfiniteWord:
        """Block-name stream of the tau^2 fixed point (1 starts S..., 2 starts L...)."""
        if which not in (1, 2):
            raise ValueError("which must be 1 or 2")
        if which not in self._gamma_star:
            c = self.params.c
            first = "S" if which == 1 else "L"

            def gen(seed=first):
                cur = seed
                yield cur
                while True:
                    nxt = tau(c, tau(c, cur))
                    yield nxt[len(cur) :]
                    cur = nxt

            self._gamma_star[which] = InfiniteWord(gen(), f"Gamma{which}*")
        return self._gamma_star[which]

    def product(self, blocks: InfiniteWord, shift: int = 0) -> SLProduct:
        return SLProduct(blocks, shift, self.s_word, self.l_word)

    def big_gamma(self, which: int) -> InfiniteWord:
        """The fixed point Gamma_1 (resp. Gamma_2) of the square root map."""
        src = streams.expand(self.product(self.gamma_star(which)))
        src.descriptor = f"Gamma{which}"
        return src

    def s_omega(self) -> InfiniteWord:
        return streams.periodic_word(self.s_word, "S^w")

    def l_omega(self) -> InfiniteWord:
        return streams.periodic_word(self.l_word, "L^w")

    def omega_p_word(self, j: int) -> InfiniteWord:
        """The periodic word ``T^j(S^omega)``; its prefix is the j-th rotation of S."""
        rot = self.s_word[j % self.block_len :] + self.s_word[: j % self.block_len]
        return streams.periodic_word(rot, f"T^{j}(S^w)")

    def conjugate_index(self, u: str) -> int | None:
        """Which rotation of the block word ``u`` is, or None."""
        return self._conjugate_index.get(u)

    # -- type classification and square roots --------------------------------

    def classify_type(self, prod: SLProduct) -> tuple[str, int]:
        """Type (A)-(D) of a shifted product, with the Pi-prefix length used.

        The prefix length is ``|S| - shift`` for type B, ``2|S| - shift``
        for type C, and 0 for types A and D.
        """
        ell = prod.shift
        if ell == 0:
            return TYPE_A, 0
        src = streams.expand(prod)
        n = self.block_len
        if squares.in_pi(self.alphabet, src.prefix(n - ell)):
            return TYPE_B, n - ell
        if squares.in_pi(self.alphabet, src.prefix(2 * n - ell)):
            return TYPE_C, 2 * n - ell
        return TYPE_D, 0

    def _synthetic_block(self, suffix: str) -> str | None:
        """A block name whose word ends with ``suffix``, if any."""
        if self.s_word.endswith(suffix):
            return "S"
        if self.l_word.endswith(suffix):
            return "L"
        return None

    def _decimated_blocks(self, blocks: InfiniteWord, head: str | None, offset: int, descriptor: str) -> InfiniteWord:
        """Block stream ``head, blocks[offset], blocks[offset+2], ...``."""

        def name(t: int) -> str:
            if head is not None:
                return head if t == 0 else blocks.letter(offset + 2 * (t - 1))
            return blocks.letter(offset + 2 * t)

        return streams.from_function(name, descriptor, chunk=64)

    def sqrt_of_product(self, prod: SLProduct) -> tuple[InfiniteWord, str]:
        """Square root of a shifted product, with its structural outcome.

        Types A-C yield another shifted product (the descriptor is recovered
        exactly); type D yields the periodic word certified on a window.
        """
        kind, _ = self.classify_type(prod)
        n = self.block_len
        ell = prod.shift
        if kind == TYPE_A:
            out_blocks = self._decimated_blocks(
                prod.blocks, None, 0, f"sqrt-blocks[{prod.blocks.descriptor}]"
            )
            return streams.expand(self.product(out_blocks)), PRODUCT_FORM

        src = streams.expand(prod)
        if kind in (TYPE_B, TYPE_C):
            if kind == TYPE_B:
                head_root = squares.sqrt_finite(self.alphabet, src.prefix(n - ell))
                offset = 1
            else:
                head_root = squares.sqrt_finite(self.alphabet, src.prefix(2 * n - ell))
                offset = 2
            head = self._synthetic_block(head_root)
            if head is None:
                # the root is not a block suffix; fall back to the raw stream
                return streams.sqrt_stream(self.alphabet, src), PRODUCT_FORM
            out_blocks = self._decimated_blocks(
                prod.blocks, head, offset, f"sqrt-blocks[{prod.blocks.descriptor}]"
            )
            out = streams.expand(self.product(out_blocks, n - len(head_root)))
            return out, PRODUCT_FORM

        # type D: the square root is globally periodic with period conjugate to S
        raw = streams.sqrt_stream(self.alphabet, src)
        period = raw.prefix(n)
        j = self.conjugate_index(period)
        if j is None:
            raise AssertionError(f"type D image period {period!r} is not a rotation of S")
        if not streams.detect_period(raw, n, 3 * n, conjugate_of=self.s_word):
            raise AssertionError("type D image failed the periodicity window check")
        return self.omega_p_word(j), PERIODIC

    # -- synchronization -----------------------------------------------------

    def sync_factorization_start(self, src: InfiniteWord, j: int, window: int | None = None) -> int | None:
        """Start position of the gamma_j-factorization of a word of the
        aperiodic part, or None if the window shows no synchronization point.

        Looks for an occurrence of one of ``gg``, ``g g-bar``, ``g-bar g``;
        any such occurrence pins the factorization grid.
        """
        g, gb = self.gamma(j), self.gamma_bar(j)
        if window is None:
            window = 4 * len(g)
        text = src.prefix(window)
        hits = [text.find(pat) for pat in (g + g, g + gb, gb + g)]
        hits = [h for h in hits if h >= 0]
        if not hits:
            return None
        return min(hits) % len(g)

    def check_factorization_properties(self, block_names: str) -> bool:
        """Both factorization constraints on a window of gamma-level block names.

        Between two ``L`` names there is always ``S^(2c)`` or ``S^(4c+1)``;
        between two occurrences of ``L S^(4c+1) L`` there is always ``S^(2c)``
        or ``(S^(2c) L)^3 S^(2c)``.
        """
        c = self.params.c
        positions = [i for i, ch in enumerate(block_names) if ch == "L"]
        for p, q in zip(positions, positions[1:]):
            if q - p - 1 not in (2 * c, 4 * c + 1):
                return False
        pat = "L" + "S" * (4 * c + 1) + "L"
        occ = []
        start = block_names.find(pat)
        while start >= 0:
            occ.append(start)
            start = block_names.find(pat, start + 1)
        good_infixes = {"S" * (2 * c), ("S" * (2 * c) + "L") * 3 + "S" * (2 * c)}
        for p, q in zip(occ, occ[1:]):
            if block_names[p + len(pat) : q] not in good_infixes:
                return False
        return True

    def invariant_subset_index(self, src: InfiniteWord, jmax: int | None = None,
                               letter_budget: int = 10**6):
        """Largest level whose factorization starts at the beginning.

        Returns the level index, or ``"fixed_point"`` when every level up to
        the budget is aligned (the two fixed points), or ``"not_in_omega_s"``
        when even the level-0 factorization does not start at 0.
        """
        if jmax is None:
            jmax = 0
            while len(self.gamma(jmax + 1)) * 4 <= letter_budget:
                jmax += 1
        prev_aligned = None
        for j in range(jmax + 1):
            start = self.sync_factorization_start(src, j, min(4 * len(self.gamma(j)), letter_budget))
            if start != 0:
                return "not_in_omega_s" if j == 0 else prev_aligned
            prev_aligned = j
        return "fixed_point"

    # -- membership helpers ---------------------------------------------------

    def omega_p_match(self, src: InfiniteWord, extra_period: int | None = None) -> int | None:
        """If ``src`` equals some ``T^j(S^omega)`` on a window long enough to
        pin a periodic word, return ``j``; otherwise None.

        The default window exceeds the longest run of repeated blocks that an
        aperiodic word of the subshift can exhibit (``4c + 1`` consecutive
        ``S`` blocks plus boundary letters), so aperiodic words never match.
        """
        n = self.block_len
        if extra_period is None:
            extra_period = 4 * self.params.c + 5
        window = n * (2 + extra_period)
        text = src.prefix(window)
        if text[: window - n] != text[n:window]:
            return None
        return self.conjugate_index(text[:n])

    def is_optimal_squareful_window(self, src: InfiniteWord, length: int) -> bool:
        """Every position of the window begins with one of the six squares."""
        text = src.prefix(length + self.alphabet.max_square_len)
        match = squares.square_matcher(self.alphabet)
        return all(match(text, i) is not None for i in range(length))
