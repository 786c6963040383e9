"""Digit expansion of a positive real over the group: the digit stream
d_n in {1,2,3}, the convergent matrix chain G_n, exact tails, reversals,
and periodicity detection.

Two interchangeable backends drive everything downstream: an exact surd
(digits found by comparisons against 1/√2 and √2, tails kept exactly) and a
symbolic digit stream (digits prescribed by a rule; tail questions answered
combinatorially).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

from .exact_field import ONE, SQRT2, QRt2, Surd, ZRt2
from .hecke_group import (
    DIGIT_MATRICES,
    DIGIT_MATRICES_INV,
    H4Fraction,
    Mat2,
    T,
    canonicalize_pair,
)

SQRT2_SURD = Surd.sqrt2()
INV_SQRT2_SURD = Surd.from_ratio(ONE, SQRT2)

DEFAULT_PERIOD_CAP = 10_000
DEFAULT_SCAN_CAP = 100_000


class Terminated(Exception):
    """The expansion reached a boundary value: the input is in √2·Q."""

    def __init__(self, boundary: str, length: int | None = None):
        super().__init__(f"expansion terminated at boundary {boundary}")
        self.boundary = boundary
        self.length = length


class CapExceeded(RuntimeError):
    pass


class Undecidable(RuntimeError):
    """A stream rule could not certify a digit question within the cap."""


class InputInQH4(ValueError):
    """Operation requires a value outside √2·Q."""


class DigitStream:
    """Abstract digit source; digits are 1-indexed."""

    kind = "abstract"

    def digit(self, n: int) -> int:
        raise NotImplementedError

    def next_non_two(self, n: int, cap: int = DEFAULT_SCAN_CAP) -> int | None:
        """Smallest index > n whose digit differs from 2, or None when the
        tail past n is certified all twos."""
        for k in range(n + 1, n + cap + 1):
            if self.digit(k) != 2:
                return k
        raise Undecidable(f"no non-2 digit found within {cap} positions after {n}")


def _primitive_root(word: tuple[int, ...]) -> tuple[int, ...]:
    n = len(word)
    for length in range(1, n + 1):
        if n % length == 0 and word == word[:length] * (n // length):
            return word[:length]
    return word


@dataclass(frozen=True)
class PeriodicStream(DigitStream):
    """Eventually periodic digits; stored with primitive period and minimal
    preperiod."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    kind = "eventually-periodic"

    def __post_init__(self) -> None:
        if not self.period:
            raise ValueError("period must be nonempty")
        pre = tuple(self.preperiod)
        per = _primitive_root(tuple(self.period))
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def digit(self, n: int) -> int:
        if n <= len(self.preperiod):
            return self.preperiod[n - 1]
        return self.period[(n - 1 - len(self.preperiod)) % len(self.period)]

    def next_non_two(self, n: int, cap: int = DEFAULT_SCAN_CAP) -> int | None:
        horizon = max(n + 1, len(self.preperiod) + 1) + len(self.period)
        for k in range(n + 1, horizon + 1):
            if self.digit(k) != 2:
                return k
        return None


@dataclass(frozen=True)
class FiniteWord(DigitStream):
    """Terminating expansion of a value in √2·Q, with the boundary reached."""

    digits: tuple[int, ...]
    boundary: str  # "inv_sqrt2" | "sqrt2" | "zero"
    kind = "finite"

    def digit(self, n: int) -> int:
        if n <= len(self.digits):
            return self.digits[n - 1]
        raise Terminated(self.boundary, len(self.digits))

    def completions(self) -> tuple[PeriodicStream, PeriodicStream]:
        """The two infinite digit sequences representing the same value."""
        heads = {"inv_sqrt2": (1, 2), "sqrt2": (2, 3), "zero": (0, 1)}
        lo_head, hi_head = heads[self.boundary]
        if self.boundary == "zero":
            return (
                PeriodicStream(self.digits, (1,)),
                PeriodicStream(self.digits, (1,)),
            )
        return (
            PeriodicStream(self.digits + (lo_head,), (3,)),
            PeriodicStream(self.digits + (hi_head,), (1,)),
        )


@dataclass(frozen=True)
class RuleStream(DigitStream):
    """Digits generated by a closed-form rule."""

    name: str
    digit_fn: Callable[[int], int] = field(repr=False)
    non_two_fn: Callable[[int], int] | None = field(default=None, repr=False)
    kind = "generated"

    def digit(self, n: int) -> int:
        return self.digit_fn(n)

    def next_non_two(self, n: int, cap: int = DEFAULT_SCAN_CAP) -> int | None:
        if self.non_two_fn is not None:
            return self.non_two_fn(n)
        return super().next_non_two(n, cap)


def _four_blocks_digit(n: int) -> int:
    i = (n.bit_length() - 1) // 2
    t = 1 << (2 * i)
    if n < 2 * t:
        return 3
    if n < 3 * t:
        return 2
    return 1


def _four_blocks_next_non_two(n: int) -> int:
    k = n + 1
    if _four_blocks_digit(k) != 2:
        return k
    i = (k.bit_length() - 1) // 2
    return 3 << (2 * i)


def _is_power_of_three(n: int) -> bool:
    while n % 3 == 0:
        n //= 3
    return n == 1


def _three_powers_digit(n: int) -> int:
    return 3 if _is_power_of_three(n) else 2


def _three_powers_next_non_two(n: int) -> int:
    p = 1
    while p <= n:
        p *= 3
    return p


def four_blocks_stream() -> RuleStream:
    """Digits 3/2/1 on consecutive powers-of-4 blocks; drives the sharpness
    checks of the two-sided approximation band."""
    return RuleStream("four-blocks", _four_blocks_digit, _four_blocks_next_non_two)


def three_powers_stream() -> RuleStream:
    """Digit 3 exactly at powers of three, 2 elsewhere; drives the sharpness
    check of the 1/2 sufficiency constant."""
    return RuleStream("three-powers", _three_powers_digit, _three_powers_next_non_two)


STREAM_RULES = {
    "four-blocks": four_blocks_stream,
    "three-powers": three_powers_stream,
}


def next_digit(x: Surd) -> tuple[int, Surd]:
    """Digit selecting the interval of x in (0,∞) and the exact tail.

    Raises Terminated when x is 0 or a boundary point (both in √2·Q).
    """
    s = x.sign()
    if s < 0:
        raise ValueError("expansion is defined for positive values")
    if s == 0:
        raise Terminated("zero")
    c1 = x.cmp(INV_SQRT2_SURD)
    if c1 == 0:
        raise Terminated("inv_sqrt2")
    if c1 < 0:
        return 1, DIGIT_MATRICES_INV[1].act(x)
    c2 = x.cmp(SQRT2_SURD)
    if c2 == 0:
        raise Terminated("sqrt2")
    if c2 < 0:
        return 2, DIGIT_MATRICES_INV[2].act(x)
    return 3, x - SQRT2_SURD


@dataclass(frozen=True)
class ConvergentState:
    """Index n, the matrix G_n = [[t, v], [u, w]], and the exact tail when
    the expansion is surd-backed."""

    n: int
    mat: Mat2
    tail: Surd | None = None

    @property
    def t(self) -> ZRt2:
        return self.mat.t

    @property
    def v(self) -> ZRt2:
        return self.mat.v

    @property
    def u(self) -> ZRt2:
        return self.mat.u

    @property
    def w(self) -> ZRt2:
        return self.mat.w

    def tu_fraction(self) -> H4Fraction:
        return canonicalize_pair(self.t, self.u)

    def vw_fraction(self) -> H4Fraction:
        return canonicalize_pair(self.v, self.w)

    def alpha_star(self) -> Surd | None:
        """w_n/u_n, the reversal value; None when u_n = 0 (projective ∞)."""
        if self.u.is_zero():
            return None
        return Surd.from_ratio(self.w, self.u)

    def star_cmp_one(self) -> int:
        """Sign of α*_n − 1; u_n = 0 counts as ∞ > 1."""
        return (self.w - self.u).sign()


Source = Union[Surd, DigitStream]


class Expansion:
    """Lazy digit/convergent engine over either backend.

    Matrices, digits, and (for surd inputs) exact tails are cached as the
    walk advances; emitted values are immutable and safe to share.
    """

    def __init__(self, source: Source, cap: int = DEFAULT_SCAN_CAP):
        self.cap = cap
        self._digits: list[int] = []
        self._mats: list[Mat2] = [Mat2.identity()]
        self._boundary: str | None = None
        if isinstance(source, Surd):
            if source.sign() <= 0:
                raise ValueError("expansion requires a positive value")
            self.alpha: Surd | None = source
            self.stream: DigitStream | None = None
            self._tails: list[Surd] | None = [source]
        elif isinstance(source, DigitStream):
            self.alpha = None
            self.stream = source
            self._tails = None
        else:
            raise TypeError(f"cannot expand {source!r}")

    @property
    def terminated_length(self) -> int | None:
        return len(self._digits) if self._boundary is not None else None

    @property
    def boundary(self) -> str | None:
        return self._boundary

    def _extend(self, n: int) -> None:
        while len(self._digits) < n:
            if self._boundary is not None:
                raise Terminated(self._boundary, len(self._digits))
            if self.stream is not None:
                try:
                    d = self.stream.digit(len(self._digits) + 1)
                except Terminated as exc:
                    self._boundary = exc.boundary
                    continue
            else:
                assert self._tails is not None
                try:
                    d, tail = next_digit(self._tails[-1])
                except Terminated as exc:
                    self._boundary = exc.boundary
                    continue
                self._tails.append(tail)
            self._digits.append(d)
            self._mats.append(self._mats[-1] * DIGIT_MATRICES[d])

    def digit(self, n: int) -> int:
        self._extend(n)
        return self._digits[n - 1]

    def word(self, n: int) -> tuple[int, ...]:
        self._extend(n)
        return tuple(self._digits[:n])

    def matrix(self, n: int) -> Mat2:
        self._extend(n)
        return self._mats[n]

    def state(self, n: int) -> ConvergentState:
        return ConvergentState(n, self.matrix(n), self.tail(n))

    def tail(self, n: int) -> Surd | None:
        if self._tails is None:
            return None
        self._extend(n)
        return self._tails[n]

    def tail_cmp_one(self, n: int) -> int:
        """Exact sign of α_n − 1, combinatorial on stream backends: digit
        maps are increasing, so the first non-2 digit after n decides."""
        if self._tails is not None:
            self._extend(n)
            return self._tails[n].cmp(1)
        assert self.stream is not None
        k = self.stream.next_non_two(n, self.cap)
        if k is None:
            return 0
        return 1 if self.stream.digit(k) == 3 else -1

    def star_cmp_one(self, n: int) -> int:
        return self.state(n).star_cmp_one()

    def leading_threes(self) -> int:
        m = 0
        while self.digit(m + 1) == 3:
            m += 1
            if m > self.cap:
                raise CapExceeded("unbounded run of leading 3 digits")
        return m

    def tail_bounds(self, n: int, tol_digits: int = 30) -> tuple[QRt2, QRt2]:
        """Exact rational-in-Q(√2) enclosure of α_n from a lookahead window.

        Surd backends answer exactly; stream backends nest the interval
        G-window image of (0, ∞) until its width is below 10^-tol_digits.
        """
        if self._tails is not None:
            self._extend(n)
            t = self._tails[n]
            if t.is_degenerate():
                q = t.as_qrt2()
                return q, q
        tol = QRt2(ONE, 10**tol_digits)
        w = Mat2.identity()
        k = n
        while True:
            k += 1
            if k - n > self.cap:
                raise CapExceeded("tail enclosure did not converge")
            w = w * DIGIT_MATRICES[self.digit(k)]
            if w.u.is_zero():
                continue
            lo = QRt2.from_ratio(w.v, w.w)
            hi = QRt2.from_ratio(w.t, w.u)
            if (hi - lo).cmp(tol) < 0:
                return lo, hi


def convergents(source: Source, n_max: int) -> list[ConvergentState]:
    """G_1..G_{n_max} with exact tails where available; Terminated when the
    expansion of a √2-rational ends before n_max."""
    exp = Expansion(source)
    return [exp.state(i) for i in range(1, n_max + 1)]


def detect_period(alpha: Surd, cap: int = DEFAULT_PERIOD_CAP) -> DigitStream:
    """Expansion of alpha as a stream: FiniteWord for values in √2·Q,
    the eventually periodic stream when an exact tail repeats within cap,
    CapExceeded otherwise.

    States are compared by exact canonical surd equality, so a reported
    period is never spurious.
    """
    if alpha.sign() <= 0:
        raise ValueError("period detection requires a positive value")
    exp = Expansion(alpha)
    seen: dict[tuple[int, ...], int] = {alpha.key(): 0}
    digits: list[int] = []
    for i in range(1, cap + 1):
        try:
            digits.append(exp.digit(i))
        except Terminated as exc:
            return FiniteWord(tuple(digits), exc.boundary)
        tail = exp.tail(i)
        assert tail is not None
        key = tail.key()
        if key in seen:
            start = seen[key]
            return PeriodicStream(tuple(digits[:start]), tuple(digits[start:i]))
        seen[key] = i
    raise CapExceeded(f"no repeated tail within {cap} steps")


def compare_tail_to_one(stream: DigitStream, n: int, cap: int = DEFAULT_SCAN_CAP) -> int:
    """Sign of α_n − 1 for a stream-defined value, without surd arithmetic."""
    k = stream.next_non_two(n, cap)
    if k is None:
        return 0
    return 1 if stream.digit(k) == 3 else -1


@dataclass(frozen=True)
class NormalizedAlpha:
    shift_power: int
    shift: Mat2
    value: Surd
    in_qh4: bool


def normalize_alpha(alpha: Surd) -> NormalizedAlpha:
    """Translate alpha by k√2 into [0, √2); |qα − p| is invariant because the
    translation fixes q and moves p by k√2·q.

    The representative is 0 exactly when alpha is a √2-integer; in_qh4 marks
    every √2-rational input (their expansions terminate).
    """
    k = -(alpha / SQRT2_SURD).floor()
    value = alpha + ZRt2(0, k)
    return NormalizedAlpha(k, T**k, value, value.is_sqrt2_rational())
