"""Best-approximation machinery: the ordered enumeration driven by the
interval-endpoint characterization, the literal brute-force oracle over the
denominator ladder, successor-case classification, and the two-constant
(1/(2q²) sufficient, 1/q² necessary) classifier.

The enumerator and the oracle are deliberately independent routes to the
same sequence; the acceptance suite requires them to agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

from .exact_field import Surd, ZRt2
from .hecke_group import (
    H4Fraction,
    canonicalize,
    canonicalize_pair,
    denominator_ladder,
    numerators_near,
)
from .h4_expansion import CapExceeded, Expansion, Source
from .rosen_cf import select_M, select_N

BEST_BY_SUFFICIENT = "best-by-sufficient"
BEST_NOT_SUFFICIENT = "best-but-not-sufficient"
NOT_BEST = "not-best"

DEFAULT_WALK_CAP = 100_000


@dataclass(frozen=True)
class BestApprox:
    """One element of the ordered best-approximation sequence, with the
    index range of matrices realizing it and its membership flags.

    common_witness marks fractions whose membership in BOTH families is
    realized at a single index n (tail and reversal on the qualifying side
    of 1 simultaneously); membership can also arise from two different
    indices of the range, and those mixed fractions obey weaker bounds."""

    frac: H4Fraction
    side: str  # "tu" | "vw"
    n_first: int
    n_last: int
    is_rosen: bool
    is_dual: bool
    common_witness: bool = False
    err: Surd | None = None  # |q·α − p| when the backend is exact

    @property
    def q(self) -> ZRt2:
        return self.frac.q

    @property
    def p(self) -> ZRt2:
        return self.frac.p


def _rosen_a0(exp: Expansion) -> int:
    m = exp.leading_threes()
    return m if exp.digit(m + 1) == 1 else m + 1


def _dual_a0(exp: Expansion) -> int:
    m = exp.leading_threes()
    return m + 1 if exp.tail_cmp_one(m) >= 0 else m


def best_approximations(
    source: Source | Expansion,
    *,
    max_q: int | ZRt2 | None = None,
    max_count: int | None = None,
    cap: int = DEFAULT_WALK_CAP,
) -> list[BestApprox]:
    """The best approximations of a positive value outside √2·Q, ordered by
    strictly increasing denominator.

    A fraction is kept when, at the last index of its matrix range, the tail
    or the reversal is on the qualifying side of 1.  Flags mark membership
    in the two continued-fraction convergent families.
    """
    if max_q is None and max_count is None:
        raise ValueError("need a denominator bound or a count")
    exp = source if isinstance(source, Expansion) else Expansion(source)
    stop_q = None if max_q is None else ZRt2.of(max_q)
    m = exp.leading_threes()

    emissions: list[tuple[str, int, int, H4Fraction]] = []
    rosen_set: set[H4Fraction] = set()
    dual_set: set[H4Fraction] = set()
    tu_start = vw_start = m + 1
    n_final = m + 1
    for n in range(m + 1, cap + 1):
        n_final = n
        st = exp.state(n)
        rosen_set.add(_inf_fraction(select_M(exp, n)))
        dual_set.add(_inf_fraction(select_N(exp, n)))
        d_next = exp.digit(n + 1)
        if d_next != 3:
            if exp.tail_cmp_one(n) > 0 or exp.star_cmp_one(n) > 0:
                emissions.append(("tu", tu_start, n, st.tu_fraction()))
            tu_start = n + 1
        if d_next != 1:
            if exp.tail_cmp_one(n) < 0 or exp.star_cmp_one(n) < 0:
                emissions.append(("vw", vw_start, n, st.vw_fraction()))
            vw_start = n + 1
        low = st.u if (st.u - st.w).sign() < 0 else st.w
        if stop_q is not None:
            if low.cmp(stop_q) > 0:
                break
        elif len(emissions) >= max_count:
            kth = sorted(
                (e[3].q for e in emissions), key=cmp_to_key(ZRt2.cmp)
            )[max_count - 1]
            if low.cmp(kth) > 0:
                break
    else:
        raise CapExceeded(f"enumeration did not finish within {cap} steps")

    # Dual-family correction: {N_n·∞} can contain the 0-th Rosen convergent,
    # which is a dual convergent only when the two first digits coincide.
    a0, dual0 = _rosen_a0(exp), _dual_a0(exp)
    if a0 != dual0:
        dual_set.discard(canonicalize(a0, 1))
    dual_set.add(canonicalize(dual0, 1))

    emissions.sort(key=cmp_to_key(lambda x, y: x[3].q.cmp(y[3].q)))
    out: list[BestApprox] = []
    prev_q: ZRt2 | None = None
    prev_err: Surd | None = None
    alpha = exp.tail(0)
    for side, n1, n2, frac in emissions:
        if stop_q is not None and frac.q.cmp(stop_q) > 0:
            continue
        assert prev_q is None or prev_q.cmp(frac.q) < 0, "denominators must increase"
        err = None
        if alpha is not None:
            err = abs(alpha * frac.q - frac.p)
            assert prev_err is None or err.cmp(prev_err) < 0, "errors must decrease"
            prev_err = err
        prev_q = frac.q
        is_rosen = frac in rosen_set
        is_dual = frac in dual_set
        common = is_rosen and is_dual and _has_common_witness(exp, side, n1, n2)
        out.append(BestApprox(frac, side, n1, n2, is_rosen, is_dual, common, err))
    if max_count is not None:
        out = out[:max_count]
    return out


def _has_common_witness(exp: Expansion, side: str, n1: int, n2: int) -> bool:
    """Whether some single index of the range has the tail and the reversal
    on the qualifying side of 1 simultaneously.

    Interior indices of a length-3 range qualify automatically (the digit
    entering is 3 resp. 1 on both sides of them), so only short ranges need
    explicit sign checks."""
    sgn = 1 if side == "tu" else -1

    def rosen_at(n: int) -> bool:
        return exp.star_cmp_one(n) * sgn > 0

    def dual_at(n: int) -> bool:
        t = exp.tail_cmp_one(n) * sgn
        return t > 0 or (t == 0 and exp.star_cmp_one(n) * sgn > 0)

    if n2 - n1 >= 2:
        return True
    if n2 - n1 == 1:
        # n1's tail and n2's reversal qualify automatically.
        return rosen_at(n1) or dual_at(n2)
    return rosen_at(n1) and dual_at(n1)


def _inf_fraction(m) -> H4Fraction:
    return canonicalize_pair(m.t, m.u)


def classify_transition(side: str, star: int, tail: int, d_next: int) -> tuple[str, str, int]:
    """Successor case from the signs at the last index n of a qualifying
    fraction's range: (case, next side, next-n offset 0 or 1).

    The six cases are exhaustive for qualifying fractions."""
    if side == "tu":
        assert d_next != 3, "range must end at n"
        if star > 0 and tail < 0:
            return "b1", "vw", 0
        if star > 0:
            assert d_next == 2
            return "b2", "tu", 1
        assert star < 0 and tail > 0 and d_next == 2
        return "b3", "vw", 1
    assert d_next != 1, "range must end at n"
    if star < 0 and tail > 0:
        return "m1", "tu", 0
    if star < 0:
        assert d_next == 2
        return "m2", "vw", 1
    assert star > 0 and tail < 0 and d_next == 2
    return "m3", "tu", 1


def successor_case(exp: Expansion, side: str, n: int) -> tuple[str, str, int]:
    """classify_transition evaluated on an expansion at index n."""
    case, nside, off = classify_transition(
        side, exp.star_cmp_one(n), exp.tail_cmp_one(n), exp.digit(n + 1)
    )
    return case, nside, n + off


def oracle_best_approximations(alpha: Surd, q_max: int | ZRt2) -> list[H4Fraction]:
    """Definitional scan: ascend the denominator ladder, keep every fraction
    whose error strictly beats everything at smaller or equal denominator.

    At each denominator only the nearest admissible numerator on each side
    can set a record; a tie inside one denominator would force the value
    into √2·Q and cannot occur."""
    if alpha.sign() <= 0 or alpha.is_sqrt2_rational():
        raise ValueError("oracle requires a positive value outside √2·Q")
    records: list[H4Fraction] = []
    best_err: Surd | None = None
    for q in denominator_ladder(q_max):
        lo, hi = numerators_near(alpha, q)
        err_lo = abs(alpha * q - lo)
        err_hi = abs(alpha * q - hi)
        c = err_lo.cmp(err_hi)
        assert c != 0, "numerator tie would put the value in √2·Q"
        p, err = (lo, err_lo) if c < 0 else (hi, err_hi)
        if best_err is None or err.cmp(best_err) < 0:
            records.append(canonicalize_pair(p, q))
            best_err = err
    return records


def legendre_classify(alpha: Surd, frac: H4Fraction) -> str:
    """Three-way classification of a canonical fraction against alpha:
    within 1/(2q²) (sufficient), a best approximation anyway, or neither.

    Consistency is asserted: sufficient implies membership, and membership
    implies the 1/q² bound."""
    delta = abs(alpha - frac.value())
    q2 = frac.q_squared()
    member = frac in {b.frac for b in best_approximations(alpha, max_q=frac.q)}
    if (delta * q2 * 2).cmp(1) < 0:
        assert member, "sufficient condition must imply membership"
        return BEST_BY_SUFFICIENT
    if member:
        assert (delta * q2).cmp(1) < 0, "members satisfy the 1/q² bound"
        return BEST_NOT_SUFFICIENT
    return NOT_BEST
