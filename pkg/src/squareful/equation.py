"""Solutions to the word equation ``X1^2 X2^2 ... Xn^2 == (X1 X2 ... Xn)^2``.

A word ``w`` solves the equation when it factors into minimal square roots
whose squares tile ``w^2``.  Because products of minimal squares are unique,
this holds exactly when ``w^2`` tokenizes completely and the roots of that
tokenization concatenate back to ``w``; a depth-first check over all root
factorizations of ``w`` is kept in the test suite as an independent oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import squares, streams, words
from .omega import OmegaSystem, tau
from .squares import SquareAlphabet


@dataclass(frozen=True)
class SolutionCertificate:
    word: str
    roots: tuple[str, ...]

    def as_json(self) -> dict:
        return {"word": self.word, "roots": list(self.roots), "verified": True}


def is_solution(alph: SquareAlphabet, w: str) -> SolutionCertificate | None:
    """Certificate that ``w`` solves the square word equation, or None.

    The tokenization of ``w^2`` is the unique factorization into minimal
    squares, so ``w`` is a solution iff it exists and its roots rebuild ``w``.
    """
    if not w:
        return None
    roots, failure = squares.factor_minimal_squares(alph, w + w)
    if failure is not None:
        return None
    if "".join(roots) != w:
        return None
    return SolutionCertificate(w, tuple(roots))


def verify_standard_solutions(d: tuple[int, ...], kmax: int, alph: SquareAlphabet) -> bool:
    """Every reversed standard word up to index ``kmax`` and its swapped
    companion must be a primitive solution."""
    from .sturmian import reversed_standard_word

    for k in range(1, kmax + 1):
        sbar = reversed_standard_word(d, k)
        for u in (sbar, words.swap_first_two(sbar)):
            if not words.is_primitive(u) or is_solution(alph, u) is None:
                return False
    return True


def harvest_square_factors(text: str, max_root_len: int) -> set[str]:
    """Distinct primitive-or-not roots ``u`` with ``u^2`` a factor of ``text``."""
    found: set[str] = set()
    for half in range(1, max_root_len + 1):
        step = 2 * half
        for i in range(len(text) - step + 1):
            if text[i : i + half] == text[i + half : i + step]:
                found.add(text[i : i + half])
    return found


def enumerate_solutions(
    sys: OmegaSystem, bmax: int, corpus_len: int | None = None
) -> list[SolutionCertificate]:
    """All solution certificates among factors of the subshift with root
    length up to ``bmax``.

    The factor corpus is a long prefix of the aperiodic fixed point plus the
    periodic part (powers of the block word rotations); long prefixes are
    factor-complete at these lengths because the subshift is minimal.
    """
    if corpus_len is None:
        corpus_len = max(100 * 2 * bmax, 10**5)
    corpus = sys.big_gamma(1).prefix(corpus_len)
    candidates = harvest_square_factors(corpus, bmax)
    reps = 2 * bmax // sys.block_len + 2
    for rot in words.conjugates(sys.s_word):
        candidates |= harvest_square_factors(rot * reps, bmax)
    out = []
    for u in sorted(candidates, key=lambda u: (len(u), u)):
        cert = is_solution(sys.alphabet, u)
        if cert is not None:
            out.append(cert)
    return out


@dataclass
class ConjugateAuditReport:
    word: str
    solution_conjugates: list[str]

    @property
    def clean(self) -> bool:
        return not self.solution_conjugates


def conjugate_solution_audit(alph: SquareAlphabet, u: str) -> ConjugateAuditReport:
    """Run the solution check on every proper conjugate of a primitive solution.

    For a solution that is a product of the block words, no proper conjugate
    may be a solution, except that the block word's swapped companion shows up
    when auditing the block word itself.
    """
    if not words.is_primitive(u):
        raise ValueError("conjugate audit expects a primitive word")
    if is_solution(alph, u) is None:
        raise ValueError("conjugate audit expects a solution")
    hits = []
    for v in words.conjugates(u)[1:]:
        if v != u and is_solution(alph, v) is not None:
            hits.append(v)
    return ConjugateAuditReport(u, hits)


def squares_in_omega_star(c: int, bmax: int, corpus_blocks: int = 200_000) -> tuple[bool, list[str]]:
    """Primitive roots of squares occurring in the tau subshift's language.

    Returns ``(ok, roots)`` where ``ok`` asserts that every root found is a
    rotation of some ``tau^k(S)`` and that each ``tau^k(S)`` short enough to
    fit appears.
    """
    blocks = "S"
    while len(blocks) < corpus_blocks:
        blocks = tau(c, tau(c, blocks))
    blocks = blocks[:corpus_blocks]
    roots = sorted(harvest_square_factors(blocks, bmax), key=len)
    primitive_roots = [u for u in roots if words.is_primitive(u)]
    tau_words = ["S"]
    while len(tau(c, tau_words[-1])) <= bmax:
        tau_words.append(tau(c, tau_words[-1]))
    ok = True
    for u in primitive_roots:
        if not any(len(u) == len(t) and u in t + t for t in tau_words):
            ok = False
    for t in tau_words:
        if 2 * len(t) <= bmax and t not in primitive_roots:
            ok = False
    return ok, primitive_roots


# ---------------------------------------------------------------------------
# the doubling-orbit generator of new fixed points


@dataclass(frozen=True)
class DoublingPattern:
    n: int
    orbits: tuple[tuple[int, ...], ...]

    def assignment_to_word(self, assignment: dict[tuple[int, ...], str]) -> str:
        letters = [""] * self.n
        for orbit in self.orbits:
            letter = assignment[orbit]
            for i in orbit:
                letters[i] = letter
        return "".join(letters)


def doubling_orbits(n: int) -> DoublingPattern:
    """Partition of ``Z_n`` into orbits of ``i -> 2i mod n`` (``n`` odd)."""
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be an odd positive integer")
    seen: set[int] = set()
    orbits = []
    for i in range(n):
        if i in seen:
            continue
        orbit = []
        j = i
        while j not in seen:
            seen.add(j)
            orbit.append(j)
            j = 2 * j % n
        orbits.append(tuple(sorted(orbit)))
    return DoublingPattern(n, tuple(orbits))


def pattern_to_substitution(
    pattern: DoublingPattern, assignment: dict[tuple[int, ...], str]
) -> tuple[str, str]:
    """The pair of block images induced by an orbit assignment.

    Positions ``1 .. n-1`` follow the assignment; position 0 is the free slot
    and is set to ``L`` in the image of ``S`` and to ``S`` in the image of
    ``L`` (matching the basic substitution ``S -> L S S``, ``L -> S S S``).
    """
    fixed = {orb: letter for orb, letter in assignment.items() if orb != (0,)}
    for orb in pattern.orbits:
        if orb != (0,) and orb not in fixed:
            raise ValueError(f"assignment missing orbit {orb}")
    body = pattern.assignment_to_word({**fixed, (0,): "?"})
    s_image = "L" + body[1:]
    l_image = "S" + body[1:]
    for u in (s_image, l_image):
        for i in range(1, pattern.n):
            if u[i] != u[2 * i % pattern.n]:
                raise AssertionError("induced image violates the doubling property")
    return s_image, l_image


def check_self_sqrt(sys: OmegaSystem, blockword: str, depth: int | None = None) -> bool:
    """Expand ``sigma(blockword^omega)`` and verify the square root fixes it.

    ``blockword`` must have odd length and satisfy ``u[i] == u[2i mod n]``
    for ``i >= 1``; the check compares prefixes to ``depth`` letters
    (default three images deep).
    """
    if len(blockword) % 2 == 0:
        raise ValueError("block word must have odd length")
    if depth is None:
        depth = 3 * len(blockword) * sys.block_len
    src = streams.periodic_word(sys.sigma(blockword), f"sigma(({blockword})^w)")
    image = streams.sqrt_stream(sys.alphabet, src)
    return image.prefix(depth) == src.prefix(depth)


def all_doubling_checks(sys: OmegaSystem, n: int) -> list[tuple[str, bool]]:
    """Fixed-point check for every orbit assignment of ``Z_n`` under doubling."""
    pattern = doubling_orbits(n)
    free_orbits = [orb for orb in pattern.orbits if orb != (0,)]
    results = []
    for bits in itertools.product("SL", repeat=len(free_orbits) + 1):
        assignment = {orb: bits[i + 1] for i, orb in enumerate(free_orbits)}
        assignment[(0,)] = bits[0]
        word = pattern.assignment_to_word(assignment)
        results.append((word, check_self_sqrt(sys, word)))
    return results
