"""H4 group matrices, membership, canonical fractions of √2·Q, Ford tangency.

The group is generated by translation by √2 and inversion.  Its boundary
orbit of ∞ is √2·Q; every element has exactly one canonical fraction form
p/q with (p odd integer, q = √2·c) or (p = √2·a, q odd integer).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator

from .exact_field import ONE, SQRT2, QRt2, Surd, ZRt2, surd_mobius


class NotInQH4(ValueError):
    """The value does not lie in √2·Q, the boundary orbit of ∞."""


@dataclass(frozen=True, slots=True)
class Mat2:
    """2x2 matrix [[t, v], [u, w]] over Z[√2]; columns give the boundary
    images t/u = M·∞ and v/w = M·0."""

    t: ZRt2
    v: ZRt2
    u: ZRt2
    w: ZRt2

    @classmethod
    def of(cls, t, v, u, w) -> Mat2:
        return cls(ZRt2.of(t), ZRt2.of(v), ZRt2.of(u), ZRt2.of(w))

    @classmethod
    def identity(cls) -> Mat2:
        return cls.of(1, 0, 0, 1)

    def det(self) -> ZRt2:
        return self.t * self.w - self.v * self.u

    def __mul__(self, other: Mat2) -> Mat2:
        return Mat2(
            self.t * other.t + self.v * other.u,
            self.t * other.v + self.v * other.w,
            self.u * other.t + self.w * other.u,
            self.u * other.v + self.w * other.w,
        )

    def __neg__(self) -> Mat2:
        return Mat2(-self.t, -self.v, -self.u, -self.w)

    def __pow__(self, n: int) -> Mat2:
        if n < 0:
            return self.inverse() ** (-n)
        out = Mat2.identity()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> Mat2:
        d = self.det()
        adj = Mat2(self.w, -self.v, -self.u, self.t)
        if d == ONE:
            return adj
        if d == -ONE:
            return -adj
        raise ValueError(f"matrix with det {d} has no inverse over Z[sqrt2]")

    def proj_eq(self, other: Mat2) -> bool:
        """Equality in PSL2: up to overall sign."""
        return self == other or self == -other

    def act(self, x: Surd) -> Surd:
        return surd_mobius(self, x)

    def act_inf(self) -> tuple[ZRt2, ZRt2]:
        """Image of ∞ as the projective pair (t, u)."""
        return self.t, self.u

    def act_zero(self) -> tuple[ZRt2, ZRt2]:
        return self.v, self.w

    def __str__(self) -> str:
        return f"[[{self.t}, {self.v}], [{self.u}, {self.w}]]"


T = Mat2.of(1, SQRT2, 0, 1)
S = Mat2.of(0, -1, 1, 0)
R = Mat2.of(0, 1, -1, SQRT2)
A1 = Mat2.of(1, 0, SQRT2, 1)
A2 = Mat2.of(SQRT2, 1, 1, SQRT2)
A3 = Mat2.of(1, SQRT2, 0, 1)
H = Mat2.of(-1, 0, 0, 1)
J = Mat2.of(0, 1, 1, 0)

DIGIT_MATRICES = {1: A1, 2: A2, 3: A3}
DIGIT_MATRICES_INV = {d: m.inverse() for d, m in DIGIT_MATRICES.items()}

# Digit involution: conjugation by J swaps the outer digits, JA_dJ = A_{d∨}.
DIGIT_DUAL = {1: 3, 2: 2, 3: 1}


def generators() -> dict[str, Mat2]:
    """The exact generator and helper matrices.  H and J are involutions
    used for conjugation identities only; they are not group members."""
    return {"T": T, "S": S, "R": R, "A1": A1, "A2": A2, "A3": A3, "H": H, "J": J}


def membership(m: Mat2) -> bool:
    """True iff m lies in the group: det 1 and one of the two parity forms
    (odd diagonal with √2-multiple off-diagonal, or the transpose pattern)."""
    if m.det() != ONE:
        return False
    odd_diag = (
        m.t.b == 0
        and m.w.b == 0
        and m.t.a % 2 == 1
        and m.w.a % 2 == 1
        and m.v.a == 0
        and m.u.a == 0
    )
    odd_off = (
        m.t.a == 0
        and m.w.a == 0
        and m.v.b == 0
        and m.u.b == 0
        and m.v.a % 2 == 1
        and m.u.a % 2 == 1
    )
    return odd_diag or odd_off


FAMILY_ODD_OVER_SQRT2 = "OddOverSqrt2"
FAMILY_SQRT2_OVER_ODD = "Sqrt2OverOdd"


@dataclass(frozen=True, slots=True)
class H4Fraction:
    """Canonical fraction p/q of a value in √2·Q with q > 0.

    OddOverSqrt2: p odd, q = √2·c with gcd(p, 2c) = 1.
    Sqrt2OverOdd: p = √2·a, q = c odd with gcd(a, c) = 1.
    """

    p: ZRt2
    q: ZRt2
    family: str

    def value(self) -> Surd:
        return Surd.from_ratio(self.p, self.q)

    def value_qrt2(self) -> QRt2:
        return QRt2.from_ratio(self.p, self.q)

    def q_squared(self) -> ZRt2:
        return self.q * self.q

    def to_json(self) -> dict:
        return {"p": list(self.p.pair()), "q": list(self.q.pair()), "family": self.family}

    @classmethod
    def from_json(cls, obj: dict) -> H4Fraction:
        frac = canonicalize_pair(ZRt2(*obj["p"]), ZRt2(*obj["q"]))
        if frac.family != obj["family"]:
            raise ValueError(f"family mismatch for {obj}")
        return frac

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def canonicalize(m: int, n: int) -> H4Fraction:
    """Canonical form of the value √2·(m/n), n > 0."""
    if n == 0:
        raise NotInQH4("infinite value has no fraction form")
    if n < 0:
        m, n = -m, -n
    g = gcd(m, n)
    if g > 1:
        m, n = m // g, n // g
    if n % 2 == 1:
        return H4Fraction(ZRt2(0, m), ZRt2(n, 0), FAMILY_SQRT2_OVER_ODD)
    # n even: √2·m/n = m/(√2·(n/2)); coprimality forces m odd.
    return H4Fraction(ZRt2(m, 0), ZRt2(0, n // 2), FAMILY_ODD_OVER_SQRT2)


def canonicalize_pair(p: ZRt2, q: ZRt2) -> H4Fraction:
    """Canonical form of p/q for p, q in Z[√2], q ≠ 0; NotInQH4 when the
    value lies outside √2·Q."""
    if q.is_zero():
        raise NotInQH4("zero denominator")
    x = p * q.conj()
    n = q.norm()
    if x.a != 0:
        raise NotInQH4(f"{p}/{q} is not a √2-rational")
    return canonicalize(x.b if n > 0 else -x.b, abs(n))


def fraction_of_surd(x: Surd) -> H4Fraction:
    if not x.is_degenerate():
        raise NotInQH4(f"{x} is irrational")
    return canonicalize_pair(x.P, x.S)


def ford_tangent(x: H4Fraction, y: H4Fraction) -> bool:
    """Tangency of the two horocycles based at x and y: |p·s − r·q| = 1."""
    if x == y:
        raise ValueError("tangency is defined for distinct base points")
    d = x.p * y.q - y.p * x.q
    return d == ONE or d == -ONE


def ford_radius(x: H4Fraction) -> QRt2:
    """Euclidean radius 1/(2q²) of the horocycle based at x."""
    return QRt2.from_ratio(ONE, ZRt2(2, 0) * x.q_squared())


def denominator_ladder(max_value: int | ZRt2) -> Iterator[ZRt2]:
    """All canonical denominators with value ≤ max_value, ascending:
    1, √2, 2√2, 3, 3√2, 5, ...  (odd integers and √2-multiples)."""
    bound = ZRt2.of(max_value)
    odd_c = 1
    rt2_c = 1
    while True:
        odd = ZRt2(odd_c, 0)
        rt2 = ZRt2(0, rt2_c)
        pick_odd = odd.cmp(rt2) < 0
        nxt = odd if pick_odd else rt2
        if nxt.cmp(bound) > 0:
            break
        yield nxt
        if pick_odd:
            odd_c += 2
        else:
            rt2_c += 1


def numerators_near(alpha: Surd, q: ZRt2) -> list[ZRt2]:
    """Nearest admissible numerators on each side of q·α for the canonical
    denominator q: at most one coprime candidate below and one above."""
    target = alpha * q
    out: list[ZRt2] = []
    if q.a != 0:
        # q odd: numerators √2·a with gcd(a, q) = 1.
        c = q.a
        a0 = (target / Surd.sqrt2()).floor()
        for a, step in ((a0, -1), (a0 + 1, +1)):
            while gcd(a, c) != 1:
                a += step
            out.append(ZRt2(0, a))
    else:
        # q = √2·c: numerators odd a with gcd(a, 2c) = 1.
        c = q.b
        f = target.floor()
        a0 = f if f % 2 else f - 1
        for a, step in ((a0, -2), (a0 + 2, +2)):
            while gcd(a, 2 * c) != 1:
                a += step
            out.append(ZRt2(a, 0))
    return out
