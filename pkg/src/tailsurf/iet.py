"""The circle rotation and the gapped piecewise translations on the section.

Taking the section x = 0 of the slope-q/(2q-1) flow on the unit-ratio tail
gives an infinite interval exchange; chains confined to squares 1..k+1 only
ever see finitely many branches of it, collected here as the map ``T_k`` on
``[0,1) \\ U`` with ``U`` the open window of section heights whose first
return leaves the modeled squares, and range gap ``V = (0, 1/q**k)``.
Branch endpoints are transcribed with their exact open/closed flags: at a
closed endpoint the flow itself dies at the singularity and the branch value
is the one-sided limit of first returns, which is precisely what the chain
constructions in :mod:`tailsurf.cylinders` consume.  Consequently the map is
injective on branch interiors but the two one-sided limits collide at the
values 1/q**j (j < k): one ascending and one descending branch each send a
closed endpoint there.

The plain circle rotation x -> x + q/(2q-1) (mod 1) is the same section map
restricted to trajectories that stay in square 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import format_rational, mod_one
from .surface import BadParametersError


class InGapError(Exception):
    """The point fell in the domain gap U: the flow leaves the modeled
    squares.  A meaningful terminal signal, not a fault."""

    def __init__(self, x: Fraction):
        super().__init__(f"{format_rational(x)} lies in the domain gap")
        self.x = x


class TargetNotReachedError(Exception):
    """Orbit iteration budget ran out before reaching the target."""


@dataclass(frozen=True)
class CircleRotation:
    """Rotation by q/(2q-1); every orbit has exact period 2q-1."""

    angle: Fraction

    @classmethod
    def for_q(cls, q: int) -> "CircleRotation":
        if q < 2:
            raise BadParametersError(f"q must be >= 2, got {q}")
        return cls(Fraction(q, 2 * q - 1))

    def rotate(self, x: Fraction) -> Fraction:
        return mod_one(x + self.angle)

    def period(self) -> int:
        return self.angle.denominator


def rotate(rotation: CircleRotation, x: Fraction) -> Fraction:
    return rotation.rotate(x)


@dataclass(frozen=True)
class Branch:
    lo: Fraction
    hi: Fraction
    closed_lo: bool
    closed_hi: bool
    shift: Fraction

    def contains(self, x: Fraction) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo:
            return self.closed_lo
        if x == self.hi:
            return self.closed_hi
        return True

    def image(self) -> tuple[Fraction, Fraction, bool, bool]:
        return (self.lo + self.shift, self.hi + self.shift, self.closed_lo, self.closed_hi)


@dataclass(frozen=True)
class PiecewiseTranslation:
    """A finite piecewise translation with one open domain gap.

    ``branches`` are ordered left to right and, together with the special
    points and the gap, partition [0,1).  ``special`` maps isolated inputs to
    their images (the single point (q-1)/(2q-1) -> 0 for the maps built
    here).
    """

    q: int
    k: int
    branches: tuple[Branch, ...]
    special: tuple[tuple[Fraction, Fraction], ...]
    domain_gap: tuple[Fraction, Fraction]
    range_gap: tuple[Fraction, Fraction]

    def in_gap(self, x: Fraction) -> bool:
        lo, hi = self.domain_gap
        return lo < x < hi

    def apply(self, x: Fraction) -> Fraction:
        if not (0 <= x < 1):
            raise BadParametersError(f"point {x} outside [0,1)")
        for sx, sy in self.special:
            if x == sx:
                return sy
        if self.in_gap(x):
            raise InGapError(x)
        for br in self.branches:
            if br.contains(x):
                return x + br.shift
        raise BadParametersError(f"point {x} not covered by any branch")

    def orbit(self, x0: Fraction, steps: int) -> list[Fraction]:
        """[x0, T(x0), ..., T**steps(x0)]; InGapError propagates."""
        xs = [Fraction(x0)]
        for _ in range(steps):
            xs.append(self.apply(xs[-1]))
        return xs


def apply(T: PiecewiseTranslation, x: Fraction) -> Fraction:
    return T.apply(x)


def build_tk(q: int, k: int) -> PiecewiseTranslation:
    """The 2k-branch section map for chains living in squares 1..k+1.

    Requires q >= 2 and k >= 3; k = 3 gives the smallest printed instance.
    Ascending branches (heights that climb by the rotation) are open-left
    closed-right, descending ones closed-left open-right.
    """
    if q < 2 or k < 3:
        raise BadParametersError(f"need q >= 2 and k >= 3, got q={q}, k={k}")
    N = 2 * q - 1
    branches = [Branch(Fraction(0), Fraction(q - 1, N), True, False, Fraction(q, N))]
    for j in range(1, k):
        branches.append(
            Branch(
                Fraction(q**j - 1, q ** (j - 1) * N),
                Fraction(q ** (j + 1) - 1, q**j * N),
                False,
                True,
                Fraction(2 - q**j, q ** (j - 1) * N),
            )
        )
    gap = (
        Fraction(q**k - 1, q ** (k - 1) * N),
        Fraction(q ** (k + 1) + q - 1, q**k * N),
    )
    for i in range(k, 0, -1):
        branches.append(
            Branch(
                Fraction(q ** (i + 1) + q - 1, q**i * N),
                Fraction(q**i + q - 1, q ** (i - 1) * N),
                True,
                False,
                Fraction(1 - q**i, q ** (i - 1) * N),
            )
        )
    return PiecewiseTranslation(
        q=q,
        k=k,
        branches=tuple(branches),
        special=((Fraction(q - 1, N), Fraction(0)),),
        domain_gap=gap,
        range_gap=(Fraction(0), Fraction(1, q**k)),
    )


def orbit_until(
    T: PiecewiseTranslation,
    x0: Fraction,
    target: Fraction,
    max_iter: int = 10_000,
) -> list[Fraction]:
    """Iterate T from x0 until the first passage at ``target``.

    Returns the full iterate list [x0, ..., target].  Raises InGapError if
    the orbit leaves the modeled squares and TargetNotReachedError if the
    budget runs out.
    """
    xs = [Fraction(x0)]
    if xs[0] == target:
        return xs
    for _ in range(max_iter):
        xs.append(T.apply(xs[-1]))
        if xs[-1] == target:
            return xs
    raise TargetNotReachedError(
        f"no passage at {format_rational(target)} within {max_iter} iterates"
    )


def fusion_orbit_length(q: int, k: int) -> int:
    """Iterate count connecting the shifted chain's loose end to its new
    singular value: (k-3)(2q-2) + 2q - 3."""
    return (k - 3) * (2 * q - 2) + 2 * q - 3


def fusion_ladder_base(q: int) -> bool:
    """Even-iterate identity of T_3 on the fused chain's section values.

    Checks T_3**(2n-4) of (2q**2-1)/(q**2(2q-1)) against (n q**2-1)/(q**2(2q-1))
    for 2 <= n <= q, plus the closing step to 1/q**2.
    """
    N = 2 * q - 1
    T = build_tk(q, 3)
    den = q**2 * N
    x = Fraction(2 * q**2 - 1, den)
    for n in range(2, q + 1):
        want = Fraction(n * q**2 - 1, den)
        if x != want:
            return False
        if n < q:
            x = T.apply(T.apply(x))
    final = T.apply(Fraction(q**3 - 1, den))
    return final == Fraction(1, q**2)


def fusion_ladder(q: int, k: int) -> bool:
    """The general even-iterate identity for T_k plus the assembled
    first-passage identity at exponent (k-3)(2q-2) + 2q - 3."""
    N = 2 * q - 1
    T = build_tk(q, k)
    den = q ** (k - 1) * N
    for j in range(1, k + 1):
        x = Fraction(2 * q ** (j - 1) - 1, den)
        for n in range(2, q + 1):
            if x != Fraction(n * q ** (j - 1) - 1, den):
                return False
            if n < q:
                x = T.apply(T.apply(x))
    start = Fraction(2 * q**2 - 1, den)
    target = Fraction(1, q ** (k - 1))
    try:
        orbit = orbit_until(T, start, target, max_iter=fusion_orbit_length(q, k) + 8)
    except (InGapError, TargetNotReachedError):
        return False
    return len(orbit) - 1 == fusion_orbit_length(q, k)
