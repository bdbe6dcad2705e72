"""Orbit dynamics of the square root map: experiments and searches.

The workhorse is :class:`OrbitEngine`, which iterates the square root map on
shifted block products exactly.  A shifted product is kept as a pair
``(y, blocks)``: the word is ``y . B1 B2 B3 ...`` where ``y`` is the proper
remainder of a partially consumed block and the ``B_t`` are whole blocks.
One application of the map either

* consumes ``y`` alone (``y`` is a product of minimal squares), leaving the
  odd-indexed blocks,
* consumes ``y`` plus one block, leaving the even-indexed blocks, or
* certifies that the image is globally periodic with period a rotation of the
  block word, after which the orbit lives in the finite periodic part and is
  followed by exact rotation bookkeeping.

All transitions are memoized per parameter set, so large enumerations reduce
to dictionary lookups.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import squares, streams, words
from .omega import PERIODIC, PRODUCT_FORM, OmegaParams, OmegaSystem
from .sturmian import RotationSystem
from .streams import InfiniteWord, SLProduct

GOLDEN = (1 + math.sqrt(5)) / 2


# ---------------------------------------------------------------------------
# closed-form estimates and exact bounds


def fibonacci_numbers(limit: int) -> list[int]:
    fibs = [1, 1]
    while fibs[-1] < limit:
        fibs.append(fibs[-1] + fibs[-2])
    return fibs


def fibonacci_estimate(s_len: int) -> float:
    """Closed-form estimate of the steps-to-fixed count for reversed Fibonacci
    block words: ``log2((phi - 1) * (phi * F_k + F_{k-1}))`` with ``F_k = s_len``."""
    fibs = fibonacci_numbers(s_len)
    if fibs[-1] != s_len or len(fibs) < 3:
        raise ValueError(f"{s_len} is not a Fibonacci number >= 2")
    f_k, f_km1 = fibs[-1], fibs[-2]
    return math.log2((GOLDEN - 1) * (GOLDEN * f_k + f_km1))


def format_estimate(value: float) -> str:
    """Two decimals, truncated (the reference table truncates, not rounds)."""
    return f"{math.floor(value * 100) / 100:.2f}"


def ceil_log2_ratio(x: Fraction) -> int:
    """Exact ``ceil(log2(x))`` for a positive rational."""
    if x <= 0:
        raise ValueError("ratio must be positive")
    p, q = x.numerator, x.denominator
    t = 0
    while q * (1 << t) < p:
        t += 1
    return t


def steps_bound(rot: RotationSystem, s_word: str, l_word: str) -> int:
    """Upper bound on the rotation-phase step count:
    ``ceil(log2((1 - slope) / min(|[S]|, |[L]|)))``."""
    arc_s = rot.factor_interval(s_word)
    arc_l = rot.factor_interval(l_word)
    if arc_s is None or arc_l is None:
        raise ValueError("block words are not factors of the rotation coding")
    smallest = min(arc_s.length, arc_l.length)
    return ceil_log2_ratio((1 - rot.slope) / smallest)


def psi_steps(rot: RotationSystem, rho: Fraction, s_word: str, l_word: str) -> int:
    """Least ``i`` with ``psi^i(rho)`` inside ``[S] union [L]`` (exact arithmetic)."""
    arc_s = rot.factor_interval(s_word)
    arc_l = rot.factor_interval(l_word)
    if arc_s is None or arc_l is None:
        raise ValueError("block words are not factors of the rotation coding")
    bound = steps_bound(rot, s_word, l_word) + 2
    rho = rho % 1
    for i in range(bound + 1):
        if arc_s.contains(rho) or arc_l.contains(rho):
            return i
        rho = rot.sqrt_intercept(rho)
    raise AssertionError("psi iteration exceeded its proven bound")


# ---------------------------------------------------------------------------
# the exact orbit engine


class OrbitEngine:
    """Memoized exact iteration of the square root map on shifted products."""

    def __init__(self, sys: OmegaSystem):
        self.sys = sys
        self.alph = sys.alphabet
        self.n = sys.block_len
        self._word = {"S": sys.s_word, "L": sys.l_word}
        self._root: dict[str, str | None] = {}
        self._period_image: dict[tuple[str, str], int] = {}
        self._next_rot: list[int] | None = None
        self._phase: list[int] | None = None
        self.l_index = sys.conjugate_index(sys.l_word)

    # -- periodic part -------------------------------------------------------

    def _rotation_tables(self) -> tuple[list[int], list[int]]:
        """Successor and steps-to-fixed tables for the words ``T^j(S^omega)``."""
        if self._phase is not None:
            return self._next_rot, self._phase
        n = self.n
        conj = words.conjugates(self.sys.s_word)
        nxt = []
        for rot_word in conj:
            enough = rot_word * (3 + self.alph.max_square_len // n)
            roots, failure = squares.factor_minimal_squares(
                self.alph, enough[: 2 * n + self.alph.max_square_len]
            )
            del failure  # a truncated tail is expected; we only need n letters
            image = "".join(roots)[:n]
            j = self.sys.conjugate_index(image)
            if j is None:
                raise AssertionError("square root left the periodic part")
            nxt.append(j)
        phase = [-1] * n
        fixed = {0, self.l_index}
        for j in range(n):
            seen, cur = [], j
            while phase[cur] < 0 and cur not in fixed and cur not in seen:
                seen.append(cur)
                cur = nxt[cur]
            base = 0 if (cur in fixed and phase[cur] < 0) else phase[cur]
            if base < 0:
                raise AssertionError("rotation orbit cycled without reaching S^w or L^w")
            if cur in fixed and phase[cur] < 0:
                phase[cur] = 0
            for back in reversed(seen):
                base += 1
                phase[back] = base
        for j in fixed:
            if phase[j] < 0:
                phase[j] = 0
        self._next_rot, self._phase = nxt, phase
        return nxt, phase

    def rotation_successor(self, j: int) -> int:
        return self._rotation_tables()[0][j]

    def rotation_phase(self, j: int) -> int:
        """Steps for ``T^j(S^omega)`` to reach ``S^omega`` or ``L^omega``."""
        return self._rotation_tables()[1][j]

    # -- transitions ---------------------------------------------------------

    def _root_if_pi(self, z: str) -> str | None:
        cached = self._root.get(z)
        if cached is None and z not in self._root:
            roots, failure = squares.factor_minimal_squares(self.alph, z)
            cached = "".join(roots) if failure is None else None
            self._root[z] = cached
        return cached

    def _periodic_image(self, y: str, block_names: str) -> int:
        """Rotation index of the square root of a type-D word ``y . blocks...``."""
        key = (y, block_names)
        hit = self._period_image.get(key)
        if hit is not None:
            return hit
        text = y + "".join(self._word[b] for b in block_names)
        roots, failure = squares.factor_minimal_squares(
            self.alph, text[: 2 * self.n + self.alph.max_square_len]
        )
        del failure
        image = "".join(roots)[: self.n]
        j = self.sys.conjugate_index(image)
        if j is None:
            raise AssertionError(
                f"type-D image period {image!r} is not a rotation of the block word"
            )
        self._period_image[key] = j
        return j

    D_LOOKAHEAD = 5  # blocks of input needed to read |S| letters of the image

    def steps_to_fixed(
        self, shift: int, first: str, fetch: Callable[[int], str], cap: int = 40
    ) -> int | None:
        """Least ``m`` with the m-th square root equal to ``S^omega`` or ``L^omega``.

        ``fetch(i)`` names the i-th block (i >= 1) of the unshifted product;
        ``first`` names block 0, of which the start word keeps the last
        ``|S| - shift`` letters.  Returns None if ``cap`` is exceeded.
        """
        if not 0 < shift < self.n:
            raise ValueError("start word must be a properly shifted product")
        y = self._word[first][shift:]
        stride, base = 1, 0
        steps = 0
        while steps <= cap:
            root = self._root_if_pi(y)
            if root is not None:  # type B
                y = root
                stride, base = 2 * stride, base - stride
                steps += 1
                continue
            b1 = fetch(stride + base)
            root = self._root_if_pi(y + self._word[b1])
            if root is not None:  # type C
                y = root
                stride, base = 2 * stride, base
                steps += 1
                continue
            # type D
            names = b1 + "".join(
                fetch(t * stride + base) for t in range(2, self.D_LOOKAHEAD + 1)
            )
            j = self._periodic_image(y, names)
            steps += 1
            return steps + self.rotation_phase(j)
        return None

    def steps_supremum(self, cap: int = 64) -> int:
        """Exact maximum of :meth:`steps_to_fixed` over every properly shifted
        product, by adversarial play.

        Block values are chosen lazily: the only block ever re-read is the one
        following the remainder (a type-B step keeps it), so a state is the
        remainder plus that optional commitment.  Termination is guaranteed by
        the finite-time theorem; ``cap`` guards against bugs.
        """
        memo: dict[tuple[str, str | None], int] = {}
        on_path: set[tuple[str, str | None]] = set()

        def best(y: str, carry: str | None, depth: int) -> int:
            if depth > cap:
                raise AssertionError("orbit exceeded the safety cap; bug in transitions")
            state = (y, carry)
            if state in memo:
                return memo[state]
            if state in on_path:
                raise AssertionError("orbit cycled; contradicts the finite-time theorem")
            on_path.add(state)
            root = self._root_if_pi(y)
            if root is not None:
                result = 1 + best(root, carry, depth + 1)
            else:
                result = 0
                for b1 in ("S", "L") if carry is None else (carry,):
                    root = self._root_if_pi(y + self._word[b1])
                    if root is not None:
                        result = max(result, 1 + best(root, None, depth + 1))
                    else:
                        tail_best = max(
                            self.rotation_phase(self._periodic_image(y, b1 + "".join(rest)))
                            for rest in itertools.product("SL", repeat=self.D_LOOKAHEAD - 1)
                        )
                        result = max(result, 1 + tail_best)
            on_path.discard(state)
            memo[state] = result
            return result

        starts = {self._word[first][ell:] for ell in range(1, self.n) for first in "SL"}
        return max(best(y, None, 0) for y in starts)


# ---------------------------------------------------------------------------
# orbit records


@dataclass
class OrbitStep:
    fingerprint: str
    outcome: str  # type A-D, "periodic", or "stream"
    versus_start: str  # "less" / "equal" / "greater"


@dataclass
class OrbitRecord:
    start: str
    steps: list[OrbitStep] = field(default_factory=list)
    n_periodic: int | None = None
    n_fixed: int | None = None

    def as_json(self) -> dict:
        return {
            "start": self.start,
            "steps": [vars(s) for s in self.steps],
            "n_periodic": self.n_periodic,
            "n_fixed": self.n_fixed,
        }


def _compare(u: str, v: str) -> str:
    if u == v:
        return "equal"
    return "less" if u < v else "greater"


def iterate_sqrt(sys: OmegaSystem, src: InfiniteWord, m: int) -> OrbitRecord:
    """Record ``m`` square root steps starting from ``src``.

    Uses the structural route when the source carries product provenance and
    the raw lazy tokenizer otherwise.  Periodicity of intermediate words is
    certified structurally (type D) or by the window check for raw streams.
    """
    n = sys.block_len
    record = OrbitRecord(start=src.descriptor)
    cur = src
    rotation: int | None = None
    engine = OrbitEngine(sys)
    start_fp = src.prefix(n)
    for step in range(m + 1):
        fp = cur.prefix(n) if rotation is None else sys.omega_p_word(rotation).prefix(n)
        if rotation is not None:
            outcome = PERIODIC
        elif cur.product is not None:
            outcome, _ = sys.classify_type(cur.product)
        else:
            outcome = "stream"
        if rotation is None and outcome != PERIODIC:
            j = sys.omega_p_match(cur)
            if j is not None:
                rotation = j
                outcome = PERIODIC
        record.steps.append(OrbitStep(fp, outcome, _compare(start_fp, fp)))
        if outcome == PERIODIC and record.n_periodic is None:
            record.n_periodic = step
        if rotation is not None and record.n_fixed is None:
            if rotation == 0 or rotation == engine.l_index:
                record.n_fixed = step
        if step == m:
            break
        if rotation is not None:
            rotation = engine.rotation_successor(rotation)
        elif cur.product is not None:
            nxt, outcome_kind = sys.sqrt_of_product(cur.product)
            if outcome_kind == PERIODIC:
                rotation = sys.conjugate_index(nxt.prefix(n))
            cur = nxt
        else:
            cur = streams.sqrt_stream(sys.alphabet, cur)
    return record


# ---------------------------------------------------------------------------
# Table 1


@dataclass
class SearchBudget:
    depth: int = 12
    cap: int = 40
    random_tails: int = 32
    omega_offsets: int = 512
    seed: int = 0


@dataclass
class Table1Row:
    s_len: int
    steps: int
    witness: str


def _fibonacci_index(s_len: int) -> int:
    d = (1,)
    k, q_prev, q = 1, 1, 2
    while q < s_len:
        q_prev, q = q, q + q_prev
        k += 1
    if q != s_len:
        raise ValueError(f"{s_len} is not a Fibonacci standard word length")
    return k


def fibonacci_system(s_len: int) -> OmegaSystem:
    """System with the reversed Fibonacci word of length ``s_len`` as block word."""
    return OmegaSystem(OmegaParams(a=1, b=0, c=1, k=_fibonacci_index(s_len)))


def _enumerate_starts(
    sys: OmegaSystem, budget: SearchBudget
) -> Iterable[tuple[int, str, Callable[[int], str], str]]:
    """The documented search family: every shift crossed with

    * every block window of ``depth`` blocks, repeated cyclically,
    * windows read off the tau fixed point at many offsets (language-consistent
      tails), and
    * seeded random block sequences.
    """
    n = sys.block_len
    depth = budget.depth
    star = sys.gamma_star(1)
    star_text = star.prefix(budget.omega_offsets + depth + 64)
    rng = random.Random(budget.seed)

    def shifts_and_firsts():
        for ell in range(1, n):
            yield ell, "S"
            if ell < 2:  # block words differ only in their first two letters
                yield ell, "L"

    for pattern_bits in itertools.product("SL", repeat=depth):
        pattern = "".join(pattern_bits)

        def cyc(i: int, pat=pattern) -> str:
            return pat[(i - 1) % depth]

        for ell, first in shifts_and_firsts():
            yield ell, first, cyc, f"cycle:{pattern}"

    for off in range(budget.omega_offsets):

        def from_star(i: int, off=off) -> str:
            return star_text[off + i - 1] if off + i - 1 < len(star_text) else star.letter(off + i - 1)

        for ell, first in shifts_and_firsts():
            yield ell, first, from_star, f"star:{off}"

    for r in range(budget.random_tails):
        seq = [rng.choice("SL") for _ in range(4096)]

        def rnd(i: int, seq=seq) -> str:
            while i - 1 >= len(seq):
                seq.append(rng.choice("SL"))
            return seq[i - 1]

        for ell, first in shifts_and_firsts():
            yield ell, first, rnd, f"random:{r}"


def table1_experiment(
    s_lengths: Iterable[int], budget: SearchBudget | None = None
) -> list[Table1Row]:
    """Maximal steps-to-fixed over the enumerated family, per block word length."""
    budget = budget or SearchBudget()
    rows = []
    for s_len in s_lengths:
        sys = fibonacci_system(s_len)
        engine = OrbitEngine(sys)
        best, witness = 0, ""
        for ell, first, fetch, label in _enumerate_starts(sys, budget):
            steps = engine.steps_to_fixed(ell, first, fetch, budget.cap)
            if steps is not None and steps > best:
                best, witness = steps, f"T^{ell}({first}|{label})"
        rows.append(Table1Row(s_len, best, witness))
    return rows


TABLE1_REFERENCE = {8: 3, 13: 4, 21: 4, 34: 5, 55: 6, 89: 6, 144: 7, 233: 8, 377: 8,
                    610: 9, 987: 10, 1597: 10, 2584: 11, 4181: 12, 6765: 13}

TABLE2_REFERENCE = {8: "3.47", 13: "4.16", 21: "4.85", 34: "5.55", 55: "6.24",
                    89: "6.94", 144: "7.63", 233: "8.33", 377: "9.02", 610: "9.71",
                    987: "10.41", 1597: "11.11", 2584: "11.80", 4181: "12.50",
                    6765: "13.19"}


# ---------------------------------------------------------------------------
# embedding and monotonicity checks


@dataclass
class OrderingVerdict:
    relation: str  # "less" / "equal" / "greater" between u1 and u2
    violation: bool


def embedding_check(sys: OmegaSystem, prod: SLProduct) -> OrderingVerdict:
    """Compare the length-|S| prefixes of a word and of its square root.

    For words starting with 0 the prefix may only grow lexicographically
    (strictly when distinct); dually for words starting with 1.
    """
    n = sys.block_len
    src = streams.expand(prod)
    u1 = src.prefix(n)
    u2 = streams.sqrt_stream(sys.alphabet, src).prefix(n)
    relation = _compare(u1, u2)
    if relation == "equal":
        return OrderingVerdict(relation, False)
    expected = "less" if u1[0] == "0" else "greater"
    return OrderingVerdict(relation, relation != expected)


def monotone_or_periodic_check(sys: OmegaSystem, prod: SLProduct) -> str:
    """Which branch of the two-step monotonicity disjunction holds.

    Returns ``"u2"`` when the first root's prefix already moved strictly,
    ``"u3"`` when the second one did, and ``"periodic"`` when the second
    square root is periodic.  Raises if none holds (it must).
    """
    if prod.shift == 0:
        raise ValueError("the check applies to properly shifted products only")
    n = sys.block_len
    src = streams.expand(prod)
    u1 = src.prefix(n)
    first_sqrt, kind1 = sys.sqrt_of_product(prod)
    if kind1 == PERIODIC:
        return "periodic"
    u2 = first_sqrt.prefix(n)
    up = u1[0] == "0"
    if (u2 > u1) if up else (u2 < u1):
        return "u2"
    second_sqrt, kind2 = (
        sys.sqrt_of_product(first_sqrt.product)
        if first_sqrt.product is not None
        else (streams.sqrt_stream(sys.alphabet, first_sqrt), PRODUCT_FORM)
    )
    if kind2 == PERIODIC:
        return "periodic"
    u3 = second_sqrt.prefix(n)
    if (u3 > u1) if up else (u3 < u1):
        return "u3"
    raise AssertionError("monotonicity disjunction failed; bug or theorem violation")


# ---------------------------------------------------------------------------
# preimages


@dataclass
class PreimageHit:
    """One preimage candidate: the preimage prefix at the identification
    resolution plus one witnessing descriptor (shift and block window)."""

    preimage_prefix: str
    shift: int
    window: str


class PreimageIndex:
    """Index of square roots of every shifted factor window of the subshift.

    Candidate windows are genuine factors of the tau fixed point, so every
    candidate extends to a word of the subshift.  Two depths are involved:

    * ``match_len`` root letters of every candidate are compared against the
      target, and
    * candidates are identified (deduplicated and reported) by their first
      ``2 * resolution`` letters.

    The match depth must comfortably exceed the resolution: candidates
    differing within the resolution but mapping to the same word forever are
    exactly the junction pairs of the injectivity theorem, while look-alikes
    whose roots diverge later are pruned because the divergence of a variant
    at scale ``resolution`` shows up within a small multiple of it.
    """

    def __init__(
        self,
        sys: OmegaSystem,
        resolution: int | None = None,
        match_len: int | None = None,
        corpus_blocks: int = 60_000,
    ):
        n = sys.block_len
        self.sys = sys
        self.resolution = resolution if resolution is not None else 4 * n
        self.match_len = match_len if match_len is not None else 4 * self.resolution
        if self.match_len < 3 * self.resolution:
            raise ValueError("match depth must be at least three times the resolution")
        need_letters = 2 * self.match_len + sys.alphabet.max_square_len + n
        self.window_blocks = need_letters // n + 2
        corpus = sys.gamma_star(1).prefix(corpus_blocks + self.window_blocks)
        windows = sorted({corpus[i : i + self.window_blocks] for i in range(corpus_blocks)})
        self.table: dict[str, dict[str, PreimageHit]] = {}
        for window in windows:
            text = sys.sigma(window)
            for ell in range(n):
                candidate = text[ell:]
                roots, failure = squares.factor_minimal_squares(sys.alphabet, candidate)
                del failure  # the tail legitimately stops mid-square
                out = "".join(roots)
                if len(out) < self.match_len:
                    raise AssertionError("window too short for the requested match depth")
                key = candidate[: 2 * self.resolution]
                bucket = self.table.setdefault(out[: self.match_len], {})
                if key not in bucket:
                    bucket[key] = PreimageHit(key, ell, window)

    def find(self, target_prefix: str) -> list[PreimageHit]:
        if len(target_prefix) != self.match_len:
            raise ValueError(f"index matches targets of length {self.match_len}")
        bucket = self.table.get(target_prefix, {})
        return sorted(bucket.values(), key=lambda h: h.preimage_prefix)


def find_preimages(
    sys: OmegaSystem, target_prefix: str, corpus_blocks: int = 60_000,
    resolution: int | None = None, index: PreimageIndex | None = None,
) -> list[PreimageHit]:
    """Brute-force preimage search for a factor of the aperiodic part.

    ``target_prefix`` is matched in full; hits are reported at the index's
    identification resolution (a quarter of the match length by default).
    """
    if index is None:
        index = PreimageIndex(sys, resolution=resolution,
                              match_len=len(target_prefix), corpus_blocks=corpus_blocks)
    return index.find(target_prefix)


def junction_signature(sys: OmegaSystem, hits: list[PreimageHit]) -> bool:
    """Whether a two-preimage answer has the left-extension shape.

    The two preimage prefixes must differ in exactly one adjacent transposed
    pair: the swapped first two letters of one block on the candidates' block
    grid.  Everything before the swapped block must be a product of minimal
    squares followed by one whole block (when that much is visible), i.e. the
    ``zS`` part of the left extensions of the two fixed points.
    """
    if len(hits) != 2:
        return False
    if hits[0].shift != hits[1].shift:
        return False
    a, b = hits[0].preimage_prefix, hits[1].preimage_prefix
    diffs = [i for i in range(min(len(a), len(b))) if a[i] != b[i]]
    if len(diffs) != 2 or diffs[1] != diffs[0] + 1:
        return False
    p = diffs[0]
    if a[p : p + 2] != b[p + 1] + b[p]:
        return False
    n = sys.block_len
    head_len = (n - hits[0].shift) % n
    if (p - head_len) % n:
        return False
    if p >= n:
        if a[p - n : p] not in (sys.s_word, sys.l_word):
            return False
        before = a[: p - n]
        if before and not squares.in_pi(sys.alphabet, before):
            return False
    return True


# ---------------------------------------------------------------------------
# preimage chains (limit set witnesses)


@dataclass
class ChainLink:
    level: int           # the aligned hierarchy level this link jumped past
    prefix_len: int      # |u_n| in letters
    preimage: str        # v_n, with sqrt(v_n) == u_n
    verified: bool


@dataclass
class PreimageChain:
    links: list[ChainLink]
    status: str  # "ok", "budget", or "fixed_point"


_DESUB = {ord("S"): "L", ord("L"): "S"}


class AlignmentTower:
    """Lazy start offsets of the level-j factorization grids of a block product.

    Level ``j + 1`` is pinned by desubstituting the level-``j`` name sequence:
    the marked letter ``L`` occurs only at image boundaries, so its first
    occurrence fixes the parse offset.  ``start(j)`` is the absolute start
    position of the level-``j`` grid in level-0 blocks.

    The window of block names grows on demand (each level divides the usable
    window by the substitution length), capped at ``block_budget``.
    """

    def __init__(self, sys: OmegaSystem, names: InfiniteWord, block_budget: int):
        self.m = 2 * sys.params.c + 1
        self._names = names
        self._cap = block_budget
        self._window = min(4096, block_budget)
        self._seq = names.prefix(self._window)
        self._starts = [0]
        self._scale = 1

    def start(self, j: int) -> int | None:
        while j >= len(self._starts):
            if not self._extend():
                return None
        return self._starts[j]

    def _extend_once(self) -> bool:
        seq, m = self._seq, self.m
        pos = seq.find("L")
        if pos < 0 or len(seq) < 6 * m:
            return False
        r = pos % m
        firsts = seq[r::m]
        if seq.count("L", r) != firsts.count("L"):
            raise AssertionError("block names do not parse as substitution images")
        self._starts.append(self._starts[-1] + r * self._scale)
        self._scale *= m
        self._seq = firsts.translate(_DESUB)
        return True

    def _extend(self) -> bool:
        if self._extend_once():
            return True
        while self._window < self._cap:
            self._window = min(self._window * self.m, self._cap)
            depth = len(self._starts) - 1
            self._seq = self._names.prefix(self._window)
            replayed, self._starts, self._scale = self._starts, [0], 1
            for _ in range(depth):
                if not self._extend_once():
                    raise AssertionError("tower replay failed at a larger window")
            if self._starts != replayed:
                raise AssertionError("tower replay produced different grid starts")
            if self._extend_once():
                return True
        return False


def preimage_chain(
    sys: OmegaSystem,
    names: InfiniteWord,
    depth: int,
    block_budget: int = 4_000_000,
    letter_verify_cap: int | None = None,
) -> PreimageChain:
    """Constructive preimage-prefix chain for a product word.

    Link ``n`` pins the prefix ``u_n`` of the word up to the start of the
    level-``(k_n + 1)`` factorization and exhibits ``v_n``, a suffix of the
    squared level-``(k_n + 1)`` building block, with ``sqrt(v_n) == u_n``.
    Each link is verified by retokenizing ``v_n``; ``letter_verify_cap`` can
    cap the letter-level work for very deep links (the blockwise route used
    beyond the cap is exact as well).
    """
    m = 2 * sys.params.c + 1
    tower = AlignmentTower(sys, names, block_budget)
    links: list[ChainLink] = []
    pos = 0
    for _ in range(depth):
        k = 0
        while True:
            nxt_start = tower.start(k + 1)
            if nxt_start is None:
                # aligned at every level the budget reaches: either one of the
                # two fixed points (all grids start at 0) or out of budget
                if not links and pos == 0 and all(s == 0 for s in tower._starts):
                    return PreimageChain(links, "fixed_point")
                return PreimageChain(links, "budget")
            if (pos - nxt_start) % (m ** (k + 1)) != 0:
                break
            k += 1
        nxt = pos + ((nxt_start - pos) % (m ** (k + 1)))
        u = sys.sigma(names.prefix(nxt))
        gamma_next = sys.gamma(k + 1)
        if not gamma_next.endswith(u):
            raise AssertionError("chain prefix is not a suffix of the next building block")
        v = (gamma_next + gamma_next)[-2 * len(u):]
        if letter_verify_cap is None or len(v) <= letter_verify_cap:
            ok = squares.sqrt_finite(sys.alphabet, v) == u
        else:
            ok = _sqrt_block_product(sys, v) == u
        links.append(ChainLink(k, len(u), v, ok))
        pos = nxt
    return PreimageChain(links, "ok")


def _sqrt_block_product(sys: OmegaSystem, text: str) -> str:
    """Square root of a product of an even number of blocks, blockwise.

    Exact because the greedy factorization of a concatenation of square
    products is the concatenation of the factorizations, and each of the four
    block pairs is a square product whose root is its first block; those four
    tokenizations are verified once and reused.
    """
    n = sys.block_len
    if len(text) % (2 * n):
        raise ValueError("not an even block product")
    pair_map = getattr(sys, "_pair_roots", None)
    if pair_map is None:
        pair_map = {}
        for x in (sys.s_word, sys.l_word):
            for y in (sys.s_word, sys.l_word):
                root = squares.sqrt_finite(sys.alphabet, x + y)
                if root != x:
                    raise AssertionError("block pair root is not its first block")
                pair_map[x + y] = root
        sys._pair_roots = pair_map
    out = []
    for i in range(0, len(text), 2 * n):
        out.append(pair_map[text[i : i + 2 * n]])
    return "".join(out)


def gamma_suffix_preimage(sys: OmegaSystem, z_names: str, k: int) -> tuple[str, str]:
    """Preimage construction for words with the fixed point as a suffix.

    For ``w = z . Gamma`` returns ``(z_letters, z')`` where ``z'`` is the
    suffix of the level-``k`` building block of length ``2 |z|`` and
    ``sqrt(z') == z`` letterwise, so ``z' . Gamma`` is a preimage of ``w``.
    """
    z = sys.sigma(z_names)
    g = sys.gamma(k)
    if len(g) < 2 * len(z):
        raise ValueError("level too small for the requested suffix length")
    z_prime = g[-2 * len(z):]
    if squares.sqrt_finite(sys.alphabet, z_prime) != z:
        raise AssertionError("suffix preimage construction failed verification")
    return z, z_prime


# ---------------------------------------------------------------------------
# periodic points


@dataclass
class PeriodicCandidate:
    label: str
    status: str          # "periodic_point" or "refuted"
    reason: str          # period info or the refutation witness
    period: int | None = None


def periodic_point_search(
    sys: OmegaSystem, max_blocks: int = 8, cap: int = 16, gamma_depth: int = 20_000
) -> list[PeriodicCandidate]:
    """Refutation search for periodic points among cyclic block products.

    Every block pattern of length up to ``max_blocks`` is extended
    periodically and tested for an exact return of the square root iteration
    (block decimation is exact on these words).  Returning candidates are then
    screened for membership: an ultimately periodic word belongs to the
    subshift only if it is a shift of ``S^omega``.  The two fixed points are
    appended as named candidates and checked on a prefix window.
    """
    results: list[PeriodicCandidate] = []
    n = sys.block_len
    seen_words: set[str] = set()
    for m in range(1, max_blocks + 1):
        for bits in itertools.product("SL", repeat=m):
            pattern = "".join(bits)
            ret = None
            for steps in range(1, cap + 1):
                if all(pattern[(t << steps) % m] == pattern[t] for t in range(m)):
                    ret = steps
                    break
            label = f"({pattern})^w"
            if ret is None:
                results.append(
                    PeriodicCandidate(label, "refuted", f"no block-level return within {cap} steps")
                )
                continue
            word = sys.sigma(pattern)
            # two cyclic candidates are the same infinite word exactly when
            # their periods share the primitive root
            root = word[: words.minimal_period(word)]
            canon = root if len(word) % len(root) == 0 else word
            if canon in seen_words:
                continue
            seen_words.add(canon)
            src = streams.periodic_word(word, label)
            j = sys.omega_p_match(src, extra_period=m + 1)
            if j is None:
                results.append(
                    PeriodicCandidate(
                        label, "refuted",
                        "block-level return but the word is ultimately periodic "
                        "and not a shift of S^w, hence outside the subshift",
                    )
                )
            else:
                name = "S^w" if j == 0 else ("L^w" if word == sys.l_word * (len(word) // n) else f"T^{j}(S^w)")
                results.append(PeriodicCandidate(name, "periodic_point", f"return after {ret} step(s)", ret))
    for which in (1, 2):
        gamma_word = sys.big_gamma(which)
        image = streams.sqrt_stream(sys.alphabet, sys.big_gamma(which))
        ok = gamma_word.prefix(gamma_depth) == image.prefix(gamma_depth)
        results.append(
            PeriodicCandidate(
                f"Gamma{which}",
                "periodic_point" if ok else "refuted",
                f"fixed to depth {gamma_depth}" if ok else "prefix diverged",
                1 if ok else None,
            )
        )
    return results


_ORD2_CACHE: dict[int, int] = {}


def doubling_period(k_i: int, modulus: int) -> int:
    """Minimal period of ``t -> (2^t - 1) * k_i mod modulus`` (odd modulus).

    Equals the first ``p >= 1`` with ``(2^p - 1) k_i`` divisible by the
    modulus; the sequence is purely periodic because 2 is invertible.  That
    first return depends only on ``modulus / gcd(k_i, modulus)``, which keeps
    exhaustive chain checks cheap.
    """
    if modulus % 2 == 0:
        raise ValueError("modulus must be odd")
    if not 0 < k_i < modulus:
        raise ValueError("need 0 < k_i < modulus")
    reduced = modulus // math.gcd(k_i, modulus)
    if reduced not in _ORD2_CACHE:
        x = 2 % reduced
        p = 1
        while x != 1 % reduced:
            x = 2 * x % reduced
            p += 1
            if p > reduced:
                raise AssertionError("period search exceeded the modulus; impossible")
        _ORD2_CACHE[reduced] = p
    return _ORD2_CACHE[reduced]


def doubling_period_increasing(c: int, imax: int) -> bool:
    """Exhaustively verify that periods grow strictly along every chain
    ``k_{i+1} = k_i + r * (2c+1)^i`` with ``k_1 != 0``."""
    m = 2 * c + 1
    frontier = [(1, k) for k in range(1, m)]
    while frontier:
        i, k = frontier.pop()
        if i == imax:
            continue
        p_here = doubling_period(k, m**i)
        for r in range(m):
            k_next = k + r * m**i
            if doubling_period(k_next, m ** (i + 1)) <= p_here:
                return False
            frontier.append((i + 1, k_next))
    return True


# ---------------------------------------------------------------------------
# asymptotics and the image of the periodic part


def asymptotic_class(
    sys: OmegaSystem, prod: SLProduct, cap: int = 64, jmax: int | None = None
) -> str:
    """One of ``periodic_point``, ``to_S_or_L``, ``aperiodic_nonasymptotic``."""
    src = streams.expand(prod)
    j = sys.omega_p_match(src)
    if j is not None:
        engine = OrbitEngine(sys)
        return "periodic_point" if j in (0, engine.l_index) else "to_S_or_L"
    if prod.shift != 0:
        return "to_S_or_L"
    verdict = sys.invariant_subset_index(src, jmax=jmax)
    return "periodic_point" if verdict == "fixed_point" else "aperiodic_nonasymptotic"


def count_sqrt_omega_minus_omega_a(
    sys: OmegaSystem, window_blocks: int = 12, corpus_blocks: int = 4096
) -> int:
    """Empirical count of distinct periodic words reached from type-D words.

    Scans shifted factor windows of the subshift, collects the rotation index
    of the square root of every type-D one, and counts distinct indices.
    Reported, never asserted: characterizing this set is open.
    """
    if corpus_blocks <= 0:
        return 0
    n = sys.block_len
    engine = OrbitEngine(sys)
    corpus = sys.gamma_star(1).prefix(corpus_blocks + window_blocks)
    reached: set[int] = set()
    seen: set[tuple[str, int]] = set()
    for i in range(corpus_blocks):
        window = corpus[i : i + window_blocks]
        for ell in range(1, n):
            key = (window, ell)
            if key in seen:
                continue
            seen.add(key)
            y = sys.sigma(window[0])[ell:]
            rest = window[1:]
            root = engine._root_if_pi(y)
            if root is not None:
                continue
            if engine._root_if_pi(y + sys.sigma(rest[0])) is not None:
                continue
            reached.add(engine._periodic_image(y, rest[: OrbitEngine.D_LOOKAHEAD]))
    return len(reached)
