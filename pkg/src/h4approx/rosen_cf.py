"""Rosen and dual-Rosen continued fractions: digit maps, convergents, the
selector matrices picking the smaller-denominator interval endpoint, and the
purely combinatorial regrouping of a digit expansion into either kind.

Two independent digit pipelines exist on purpose: exact Gauss-map iteration
(surd inputs) and block regrouping of the expansion word (any input).  They
must agree wherever both apply.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact_field import ONE, SQRT2, ZERO, Surd, ZRt2
from .hecke_group import H4Fraction, J, Mat2, canonicalize_pair
from .h4_expansion import Expansion, Source

SQRT2_SURD = Surd.sqrt2()


class DomainError(ValueError):
    """Continued-fraction maps are undefined on √2·Q."""


@dataclass(frozen=True, slots=True)
class RosenDigit:
    """One partial quotient: the pair (ε_i, a_i) under the fraction bar."""

    eps: int
    a: int

    def __post_init__(self) -> None:
        if self.eps not in (-1, 1):
            raise ValueError("eps must be ±1")
        if self.a < 1:
            raise ValueError("partial quotients are positive")


@dataclass(frozen=True, slots=True)
class ConvergentPair:
    r: ZRt2
    s: ZRt2
    index: int
    kind: str
    frac: H4Fraction


@dataclass(frozen=True)
class CFExpansion:
    """⟦a0; ε_1/a_1, ε_2/a_2, ...⟧ truncated to finitely many terms."""

    kind: str  # "rosen" | "dual-rosen"
    a0: int
    terms: tuple[RosenDigit, ...]

    def __post_init__(self) -> None:
        for i, t in enumerate(self.terms):
            if self.kind == "rosen":
                # a_i = 1 forces ε_{i+1} = +1 (i ≥ 1).
                if i + 1 < len(self.terms) and t.a == 1:
                    if self.terms[i + 1].eps != 1:
                        raise ValueError(f"uniqueness violated after term {i + 1}")
            else:
                # ε̃_i = −1 forces ã_i ≥ 2.
                if t.eps == -1 and t.a < 2:
                    raise ValueError(f"dual uniqueness violated at term {i + 1}")

    def convergents(self) -> list[ConvergentPair]:
        """r_i/s_i by the standard recurrence; denominators must increase."""
        out: list[ConvergentPair] = []
        r_prev, s_prev = ONE, ZERO
        r, s = ZRt2(0, self.a0), ONE
        out.append(ConvergentPair(r, s, 0, self.kind, canonicalize_pair(r, s)))
        for i, t in enumerate(self.terms, start=1):
            coeff = ZRt2(0, t.a)
            r, r_prev = coeff * r + t.eps * r_prev, r
            s, s_prev = coeff * s + t.eps * s_prev, s
            if s.cmp(s_prev) <= 0:
                raise AssertionError(f"denominators not increasing at i={i}")
            out.append(ConvergentPair(r, s, i, self.kind, canonicalize_pair(r, s)))
        return out

    def value(self) -> Surd:
        """Exact value of the truncation (the last convergent)."""
        last = self.convergents()[-1]
        return Surd.from_ratio(last.r, last.s)


def _rosen_window(x: Surd) -> int:
    # a√2 − 1/√2 < x < a√2 + 1/√2  ⟺  a = ⌊(√2·x + 1)/2⌋
    return ((x * SQRT2_SURD + 1) / 2).floor()


def _dual_window(x: Surd) -> int:
    # (a−1)√2 + 1 ≤ x < a√2 + 1  ⟺  a = ⌊(x − 1)/√2⌋ + 1
    return ((x - 1) / SQRT2_SURD).floor() + 1


def rosen_digits(alpha: Surd, n_terms: int) -> CFExpansion:
    """Rosen expansion by exact iteration of f(x) = 1/|x − a√2| on the
    nearest-√2-multiple window."""
    if alpha.is_sqrt2_rational():
        raise DomainError("value lies in √2·Q")
    a0 = _rosen_window(alpha)
    x = alpha - ZRt2(0, a0)
    eps = x.sign()
    x = ONE / abs(x)
    terms: list[RosenDigit] = []
    for _ in range(n_terms):
        assert x.cmp(SQRT2) > 0
        a = _rosen_window(x)
        terms.append(RosenDigit(eps, a))
        x = x - ZRt2(0, a)
        eps = x.sign()
        x = ONE / abs(x)
    return CFExpansion("rosen", a0, tuple(terms))


def dual_rosen_digits(alpha: Surd, n_terms: int) -> CFExpansion:
    """Dual expansion: window (ã−1)√2 + 1 ≤ x < ã√2 + 1, closed left end."""
    if alpha.is_sqrt2_rational():
        raise DomainError("value lies in √2·Q")
    a0 = _dual_window(alpha)
    x = alpha - ZRt2(0, a0)
    eps = x.sign()
    x = ONE / abs(x)
    terms: list[RosenDigit] = []
    for _ in range(n_terms):
        assert x.cmp(1) > 0
        a = _dual_window(x)
        terms.append(RosenDigit(eps, a))
        x = x - ZRt2(0, a)
        eps = x.sign()
        x = ONE / abs(x)
    return CFExpansion("dual-rosen", a0, tuple(terms))


def select_M(exp: Expansion, n: int) -> Mat2:
    """G_n when the reversal exceeds 1, else G_n·J; M_n·∞ is the interval
    endpoint with the smaller denominator."""
    star = exp.star_cmp_one(n)
    assert star != 0, "reversal value 1 cannot occur"
    g = exp.matrix(n)
    return g if star > 0 else g * J


def select_N(exp: Expansion, n: int) -> Mat2:
    """G_n when the tail exceeds 1 (ties broken by the reversal), else G_n·J."""
    t = exp.tail_cmp_one(n)
    flip = t < 0 or (t == 0 and exp.star_cmp_one(n) < 0)
    g = exp.matrix(n)
    return g * J if flip else g


def selector_fractions(exp: Expansion, kind: str, n_max: int) -> list[H4Fraction]:
    """Deduplicated M_n·∞ (kind 'rosen') or N_n·∞ (kind 'dual-rosen') for
    n from m(α)+1 to n_max."""
    select = select_M if kind == "rosen" else select_N
    out: list[H4Fraction] = []
    for n in range(exp.leading_threes() + 1, n_max + 1):
        m = select(exp, n)
        frac = canonicalize_pair(m.t, m.u)
        if not out or out[-1] != frac:
            out.append(frac)
    return out


_ROSEN_LETTERS = ("A1J", "A2", "A3")


def _h4_letters_rosen(exp: Expansion, n_letters: int) -> list[str]:
    """Letters of M_n as a word in {A1J, A2, A3}, driven by the flip state
    σ_n = [reversal < 1]; A1J toggles σ after its digit."""
    letters = []
    sigma = False  # σ_0: the empty reversal counts as ∞ > 1
    for n in range(1, n_letters + 1):
        d = exp.digit(n)
        if d == 2:
            letters.append("A2")
        elif (d == 1) != sigma:  # d=1 with σ=0, or d=3 with σ=1
            letters.append("A1J")
            sigma = not sigma
        else:
            letters.append("A3")
        assert sigma == (exp.star_cmp_one(n) < 0)
    return letters


def _h4_letters_dual(exp: Expansion, n_letters: int) -> tuple[bool, list[str]]:
    """Letters of N_n in {JA1, A2, A3} plus the initial flip σ̃_0 (true iff
    the value itself is below 1); JA1 toggles σ̃ before its digit."""

    def flip_state(n: int) -> bool:
        t = exp.tail_cmp_one(n)
        return t < 0 or (t == 0 and exp.star_cmp_one(n) < 0)

    letters = []
    sigma = flip_state(0)
    sigma0 = sigma
    for n in range(1, n_letters + 1):
        d = exp.digit(n)
        nxt = flip_state(n)
        if sigma == nxt:
            assert d != (3 if sigma else 1)
            letters.append("A2" if d == 2 else "A3")
        else:
            assert d == (1 if sigma else 3)
            letters.append("JA1")
        sigma = nxt
    return sigma0, letters


def rosen_from_h4(source: Source | Expansion, n_terms: int, max_letters: int = 4000) -> CFExpansion:
    """Rosen digits read off the expansion word by block regrouping: runs of
    A3 letters closed by A1J (ε = +1) or A2 (ε = −1); the value's own block
    carries one extra unit from the shift into the map's domain."""
    exp = source if isinstance(source, Expansion) else Expansion(source)
    letters = _h4_letters_rosen(exp, max_letters)
    blocks = _parse_blocks(letters, terminators={"A1J": 1, "A2": -1})
    if not blocks:
        raise ValueError("not enough letters for one complete block")
    run0, eps1 = blocks[0]
    # Block 0 regroups the shifted value, so it encodes a0 + 1.
    a0 = run0 if eps1 == 1 else run0 + 1
    terms: list[RosenDigit] = []
    eps = eps1
    for run, nxt_eps in blocks[1 : n_terms + 1]:
        a = run + 1 if nxt_eps == 1 else run + 2
        terms.append(RosenDigit(eps, a))
        eps = nxt_eps
    return CFExpansion("rosen", a0, tuple(terms))


def dual_from_h4(source: Source | Expansion, n_terms: int, max_letters: int = 4000) -> CFExpansion:
    """Dual digits from the expansion word: runs of A3 closed by JA1
    (ε̃ = +1) or A2 (ε̃ = −1); a −1 sign borrows one unit from the following
    block.  A value below 1 contributes ã_0 = 0 and a phantom +1 terminator."""
    exp = source if isinstance(source, Expansion) else Expansion(source)
    sigma0, letters = _h4_letters_dual(exp, max_letters)
    blocks = _parse_blocks(letters, terminators={"JA1": 1, "A2": -1})
    if sigma0:
        blocks = [(-1, 1)] + blocks  # phantom block: ã_0 = 0, ε̃_1 = +1
    if not blocks:
        raise ValueError("not enough letters for one complete block")
    a0 = blocks[0][0] + 1
    terms: list[RosenDigit] = []
    eps = blocks[0][1]
    for run, nxt_eps in blocks[1 : n_terms + 1]:
        a = run + 2 if eps == -1 else run + 1
        terms.append(RosenDigit(eps, a))
        eps = nxt_eps
    return CFExpansion("dual-rosen", a0, tuple(terms))


def rosen_convergents(alpha: Surd, i_max: int) -> list[ConvergentPair]:
    """r_0..r_{i_max} by digit recurrence, cross-checked exactly against the
    selector pipeline M_n·∞ over the same stretch of the expansion."""
    cf = rosen_digits(alpha, i_max)
    convs = cf.convergents()
    exp = Expansion(alpha)
    budget = cf.a0 + sum(t.a for t in cf.terms) + 4
    selected = selector_fractions(exp, "rosen", budget)
    overlap = min(len(selected), len(convs))
    assert overlap >= i_max, "selector walk too short"
    assert [c.frac for c in convs[:overlap]] == selected[:overlap], (
        "digit recurrence and selector pipeline disagree"
    )
    return convs


def dual_rosen_convergents(alpha: Surd, i_max: int) -> list[ConvergentPair]:
    """r̃_0..r̃_{i_max} by digit recurrence, cross-checked against N_n·∞.

    The selector enumeration starts at r̃_0 or r̃_1 depending on whether the
    first digits of the two expansions coincide; both starts are accepted."""
    cf = dual_rosen_digits(alpha, i_max)
    convs = cf.convergents()
    exp = Expansion(alpha)
    budget = abs(cf.a0) + sum(t.a for t in cf.terms) + 4
    selected = selector_fractions(exp, "dual-rosen", budget)
    fracs = [c.frac for c in convs]
    offset = 0 if selected[:1] == fracs[:1] else 1
    overlap = min(len(selected), len(fracs) - offset)
    assert overlap >= i_max - offset, "selector walk too short"
    assert fracs[offset : offset + overlap] == selected[:overlap], (
        "digit recurrence and selector pipeline disagree"
    )
    return convs


def _parse_blocks(letters: list[str], terminators: dict[str, int]) -> list[tuple[int, int]]:
    """Split a letter word into (A3-run length, terminator sign) blocks,
    dropping a trailing unterminated run."""
    blocks: list[tuple[int, int]] = []
    run = 0
    for letter in letters:
        if letter == "A3":
            run += 1
        else:
            blocks.append((run, terminators[letter]))
            run = 0
    return blocks
