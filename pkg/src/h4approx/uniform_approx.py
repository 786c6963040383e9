"""Uniform approximation: the record sequence q_{i+1}|q_i α − p_i|, the exact
uniform constant for eventually periodic expansions, witnesses for the
uniform (Dirichlet-type) theorem, and the two sharpness digit streams.

Every record is pinned two ways for exact inputs: by the closed-form case
expression in (α_n, α*_n) and by direct multiplication; the two must agree
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact_field import ONE, SQRT2, QRt2, Surd, ZRt2, quad_root
from .hecke_group import DIGIT_MATRICES, H4Fraction, Mat2
from .h4_expansion import (
    DigitStream,
    Expansion,
    PeriodicStream,
    Source,
    detect_period,
    four_blocks_stream,
    three_powers_stream,
)
from .best_approx import best_approximations, classify_transition, successor_case

HALF = Surd.from_ratio(ONE, ZRt2(2, 0))
UPPER = Surd.from_ratio(ZRt2(1, 1), ZRt2(2, 0))  # (√2+1)/2


class NonPeriodicInput(ValueError):
    """Exact uniform constants exist only for eventually periodic expansions."""


@dataclass(frozen=True)
class UniformRecord:
    """One record q_{i+1}|q_i α − p_i| between consecutive best approximations."""

    i: int
    case: str
    n: int
    value: Surd | None  # exact for surd backends
    lo: QRt2 | None = None  # enclosure for stream backends
    hi: QRt2 | None = None

    def midpoint(self) -> float:
        if self.value is not None:
            return self.value.to_float()
        assert self.lo is not None and self.hi is not None
        blo, bhi = self.lo.enclosure(30), self.hi.enclosure(30)
        return float((blo[0] + bhi[1]) / 2)


def case_value(case: str, an, astar):
    """Record value by transition case, in terms of the tail and the
    reversal (limit); works over surds and over Q(√2) alike."""
    den = an + astar
    if case == "b1":
        num = astar
    elif case == "b2":
        num = astar + SQRT2
    elif case == "b3":
        num = astar * SQRT2 + 1
    elif case == "m1":
        num = an
    elif case == "m2":
        num = an * (astar * SQRT2 + 1)
    elif case == "m3":
        num = an * (astar + SQRT2)
    else:
        raise ValueError(f"unknown case {case}")
    return num / den


_CASE_DECREASING_IN_TAIL = {"b1", "b2", "b3"}


def uniform_sequence(source: Source | Expansion, count: int) -> list[UniformRecord]:
    """First `count` records.  For exact inputs each value is computed both
    by case expression and directly from the fractions, asserted equal, and
    asserted to lie strictly in (1/2, (√2+1)/2)."""
    exp = source if isinstance(source, Expansion) else Expansion(source)
    best = best_approximations(exp, max_count=count + 1)
    out: list[UniformRecord] = []
    for i, (cur, nxt) in enumerate(zip(best, best[1:]), start=1):
        case, nside, nn = successor_case(exp, cur.side, cur.n_last)
        st = exp.state(nn)
        expected = st.tu_fraction() if nside == "tu" else st.vw_fraction()
        assert expected == nxt.frac, "successor table disagrees with enumeration"
        n = cur.n_last
        an = exp.tail(n)
        if an is not None:
            star = exp.state(n).alpha_star()
            assert star is not None
            value = case_value(case, an, star)
            assert cur.err is not None
            direct = cur.err * nxt.frac.q
            assert value.cmp(direct) == 0, "case expression must match direct product"
            assert HALF.cmp(value) < 0 < UPPER.cmp(value), "record out of range"
            out.append(UniformRecord(i, case, n, value))
        else:
            lo, hi = exp.tail_bounds(n, tol_digits=12)
            star_q = QRt2.from_ratio(exp.state(n).w, exp.state(n).u)
            v1 = case_value(case, lo, star_q)
            v2 = case_value(case, hi, star_q)
            if case in _CASE_DECREASING_IN_TAIL:
                v1, v2 = v2, v1
            out.append(UniformRecord(i, case, n, None, v1, v2))
    return out


@dataclass(frozen=True)
class PhaseLimit:
    phase: int
    side: str
    case: str
    value: Surd


@dataclass(frozen=True)
class KResult:
    """Uniform approximation constant: exact surd for periodic expansions,
    windowed numeric estimate otherwise (never certified)."""

    method: str  # "exact-periodic" | "numeric-limsup"
    certified: bool
    value: Surd | None
    estimate: float
    phases: tuple[PhaseLimit, ...] = ()

    def decimal(self, digits: int = 30) -> str:
        return self.value.decimal(digits) if self.value is not None else repr(self.estimate)


def _word_matrix(word: tuple[int, ...]) -> Mat2:
    m = Mat2.identity()
    for d in word:
        m = m * DIGIT_MATRICES[d]
    return m


def _attracting_fixed_point(word: tuple[int, ...]) -> Surd:
    """Positive fixed point of the word matrix: the value of [word^∞]."""
    m = _word_matrix(word)
    return quad_root(m.u, m.w - m.t, -m.v, "+")


def _eventual_star_sign(pi: tuple[int, ...], j: int, rho: tuple[int, ...]) -> int:
    """Sign of α*_n − 1 for large n in phase j: first non-2 digit reading the
    expansion word backwards from position n (period, then preperiod, then
    the implicit 3-tail)."""
    P = len(pi)
    for k in range(1, P + 1):
        d = pi[(j - k) % P]
        if d != 2:
            return 1 if d == 3 else -1
    for d in reversed(rho):
        if d != 2:
            return 1 if d == 3 else -1
    return 1


def k_exact(alpha: Surd, cap: int = 10_000) -> KResult:
    """Exact uniform constant via per-phase limits of the record values.

    Over one period, each qualifying transition's record value converges to
    its case expression evaluated at the exact phase tail and the attracting
    fixed point of the reversed period word; the constant is the maximum."""
    stream = detect_period(alpha, cap)
    if not isinstance(stream, PeriodicStream):
        raise NonPeriodicInput("expansion terminates; no uniform constant")
    rho, pi = stream.preperiod, stream.period
    P = len(pi)
    phases: list[PhaseLimit] = []
    for j in range(P):
        forward = tuple(pi[(j + k) % P] for k in range(P))
        backward = tuple(pi[(j - 1 - k) % P] for k in range(P))
        an = _attracting_fixed_point(forward)
        astar = _attracting_fixed_point(backward)
        star = _eventual_star_sign(pi, j, rho)
        tail = an.cmp(1)
        d_next = pi[j]
        if d_next != 3 and (tail > 0 or star > 0):
            case, _, _ = classify_transition("tu", star, tail, d_next)
            phases.append(PhaseLimit(j, "tu", case, case_value(case, an, astar)))
        if d_next != 1 and (tail < 0 or star < 0):
            case, _, _ = classify_transition("vw", star, tail, d_next)
            phases.append(PhaseLimit(j, "vw", case, case_value(case, an, astar)))
    assert phases, "a periodic expansion has infinitely many best approximations"
    k = phases[0].value
    for ph in phases[1:]:
        if ph.value.cmp(k) > 0:
            k = ph.value
    assert HALF.cmp(k) <= 0 and k.cmp(UPPER) <= 0
    return KResult("exact-periodic", True, k, k.to_float(), tuple(phases))


def k_numeric(source: Source | Expansion, records: int = 1000, window: int = 200) -> KResult:
    """Windowed sup of the record values: an uncertified limsup estimate."""
    seq = uniform_sequence(source, records)
    tail = seq[-window:] if window < len(seq) else seq
    return KResult("numeric-limsup", False, None, max(r.midpoint() for r in tail))


@dataclass(frozen=True)
class DirichletWitness:
    n_bound: int
    frac: H4Fraction
    err: Surd

    def verify(self) -> bool:
        """|qα − p|·N < (√2+1)/2, checked exactly."""
        return (self.err * ZRt2(2 * self.n_bound, 0)).cmp(ZRt2(1, 1)) < 0


def dirichlet_witness(alpha: Surd, n_bound: int) -> DirichletWitness:
    """The largest-denominator best approximation with q ≤ N witnesses the
    uniform theorem at threshold N."""
    if n_bound < 1:
        raise ValueError("threshold must be at least 1")
    best = best_approximations(alpha, max_q=n_bound)
    last = best[-1]
    assert last.err is not None
    wit = DirichletWitness(n_bound, last.frac, last.err)
    assert wit.verify(), "uniform bound must hold exactly"
    return wit


def dirichlet_sweep(alpha: Surd, n_max: int) -> list[DirichletWitness]:
    """Witnesses for every integer threshold 1..n_max, verified exactly."""
    best = best_approximations(alpha, max_q=n_max)
    out: list[DirichletWitness] = []
    idx = 0
    for n in range(1, n_max + 1):
        while idx + 1 < len(best) and best[idx + 1].q.cmp(n) <= 0:
            idx += 1
        last = best[idx]
        assert last.q.cmp(n) <= 0 and last.err is not None
        wit = DirichletWitness(n, last.frac, last.err)
        assert wit.verify()
        out.append(wit)
    return out


@dataclass(frozen=True)
class OptimalityPoint:
    i: int
    n: int
    lo: QRt2
    hi: QRt2
    target: QRt2

    def max_distance(self) -> QRt2:
        d1, d2 = abs(self.lo - self.target), abs(self.hi - self.target)
        return d1 if d1.cmp(d2) >= 0 else d2


STREAM_A_TARGET_MAIN = QRt2(ZRt2(-1, 1), 1)  # 1/(√2+1) = √2 − 1
STREAM_A_TARGET_AUX = QRt2(ONE, 1)
STREAM_B_TARGET = QRt2(ONE, 2)


def optimality_streams() -> dict[str, DigitStream]:
    return {"A": four_blocks_stream(), "B": three_powers_stream()}


def _vw_record_bounds(exp: Expansion, n: int, tol_digits: int = 9) -> tuple[QRt2, QRt2]:
    # w_n|w_n α − v_n| = w·x/(u·x + w) at x = α_n, increasing in x.
    st = exp.state(n)
    lo, hi = exp.tail_bounds(n, tol_digits)
    f = lambda x: x * st.w / (x * st.u + st.w)
    return f(lo), f(hi)


def optimality_check(which: str, i_max: int = 5, tol_digits: int = 9) -> list[OptimalityPoint]:
    """Evaluate the sharpness indices of stream A (targets 1/(√2+1) and 1)
    or stream B (target 1/2) with exact rational enclosures."""
    points: list[OptimalityPoint] = []
    if which == "A":
        exp = Expansion(four_blocks_stream())
        for i in range(1, i_max + 1):
            n = 3 * 4**i - 2
            lo, hi = _vw_record_bounds(exp, n, tol_digits)
            points.append(OptimalityPoint(i, n, lo, hi, STREAM_A_TARGET_MAIN))
            n = 2 * 4**i - 1
            lo, hi = _vw_record_bounds(exp, n, tol_digits)
            points.append(OptimalityPoint(i, n, lo, hi, STREAM_A_TARGET_AUX))
    elif which == "B":
        exp = Expansion(three_powers_stream())
        for i in range(1, i_max + 1):
            n = 2 * 3**i
            lo, hi = _vw_record_bounds(exp, n, tol_digits)
            points.append(OptimalityPoint(i, n, lo, hi, STREAM_B_TARGET))
    else:
        raise ValueError("stream must be 'A' or 'B'")
    return points
