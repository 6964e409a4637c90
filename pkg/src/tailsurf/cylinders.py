"""Saddle-connection chains, cylinders, and decompositions on unit-ratio tails.

All constructions here live on the tail with r = 1/q and flow in the
direction of slope q/(2q-1).  The bottom chain of the k-th cylinder is built
inductively: shift the previous chain up by its skew-width and retrace it
from the one point where the shifted curve meets the singularity (the pieces
of the old chain fuse into a single closed saddle connection), then adjoin
the new connection launched from (s_k, 0).  Every measurement is computed
twice, once from the traced waist and once from a closed form, and the two
must agree exactly.

A cylinder's identity is carried by its y-axis interval system
{(y, y + skew) : y a section hit of its bottom chain}; membership,
disjointness and the fill-in bookkeeping all reduce to the section x = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Point, format_rational
from .flow import CLOSED, SINGULAR_HIT, Trajectory, trace
from .iet import CircleRotation
from .surface import BadParametersError, GeometryError, Tail


class ConstructionError(GeometryError):
    """Base class for chain/cylinder construction failures."""


class ShiftHitsSingularityError(ConstructionError):
    """A vertically shifted chain met the singularity where it must not."""


class FusionError(ConstructionError):
    """The shifted chain did not retrace to a single saddle connection."""


class FoliationError(ConstructionError):
    """A waist trace failed to close up."""


class SingularInsideIntervalError(ConstructionError):
    """A singular section value lies strictly inside a cylinder interval."""


class FillInError(ConstructionError):
    """The circle-rotation fill-in failed to match the loose ends."""


class TableMismatchError(ConstructionError):
    """Traced per-square crossing counts disagree with the closed form."""


# ----------------------------------------------------------------------
# closed forms
# ----------------------------------------------------------------------


def flow_slope(q: int) -> Fraction:
    """Slope of the special direction, q/(2q-1)."""
    return Fraction(q, 2 * q - 1)


def direction_norm_squared(q: int) -> Fraction:
    """Squared length of the direction vector (2q-1, q)."""
    return Fraction(q**2 + (2 * q - 1) ** 2)


def skew_width(q: int, k: int) -> Fraction:
    """Vertical gap between cylinder k's two boundary chains."""
    return Fraction(q - 1, q**k * (2 * q - 1))


def cylinder_width_squared(q: int, k: int) -> Fraction:
    """Squared perpendicular width: the skew projected across the flow."""
    return skew_width(q, k) ** 2 * (2 * q - 1) ** 2 / direction_norm_squared(q)


def waist_displacement(q: int, k: int) -> Fraction:
    """Horizontal displacement of cylinder k's waist curve."""
    return (2 * q - 1) * (k - Fraction(q**k - 1, q**k * (q - 1)))


def circumference_squared(q: int, k: int) -> Fraction:
    d = waist_displacement(q, k)
    return d**2 * direction_norm_squared(q) / (2 * q - 1) ** 2


def cylinder_modulus(q: int, k: int) -> Fraction:
    """Circumference over width; rational because the radicals cancel."""
    return (
        direction_norm_squared(q)
        / Fraction((q - 1) ** 2)
        * (k * q ** (k + 1) - (k + 1) * q**k + 1)
    )


def cylinder_area(q: int, k: int) -> Fraction:
    return (k - Fraction(q**k - 1, q**k * (q - 1))) * Fraction(q - 1, q**k)


def crossing_table(q: int, k: int) -> dict[int, int]:
    """How many times the waist of cylinder k traverses each square."""
    table = {1: k * (2 * q - 2) - 1}
    for i in range(2, k + 1):
        table[i] = (k - i + 1) * (q - 1)
    table[k + 1] = 1
    return table


def section_hit_count(q: int, k: int) -> int:
    """Number of y-axis crossings of cylinder k's bottom chain."""
    return 2 * k * q - (2 * k + 1)


def bsc1_section_values(q: int) -> set[Fraction]:
    N = 2 * q - 1
    return {Fraction(i, N) for i in range(1, N) if i != q}


def bsc_prime_section_values(q: int, k: int) -> set[Fraction]:
    den = q ** (k - 1) * (2 * q - 1)
    lows = {Fraction(i, den) for i in range(1, q)}
    highs = {Fraction(i + q**k, den) for i in range(1, q)}
    return lows | highs


def chain_section_values(q: int, k: int) -> set[Fraction]:
    """All y-axis crossings of the k-th bottom chain: the shifted copies of
    the earlier connections' crossings plus the new connection's own."""

    def shift_tail(j: int) -> Fraction:
        return sum((skew_width(q, i) for i in range(j, k)), Fraction(0))

    values = {y + shift_tail(1) for y in bsc1_section_values(q)}
    for j in range(2, k):
        values |= {y + shift_tail(j) for y in bsc_prime_section_values(q, j)}
    if k >= 2:
        values |= bsc_prime_section_values(q, k)
    return values


def skew_sum_tail(q: int, from_k_exclusive: int) -> Fraction:
    """Exact tail sum over k > K of (section hits of cyl_k) * skew_k."""
    K = from_k_exclusive
    x = Fraction(1, q)
    # sum_{k>K} k x**k and sum_{k>K} x**k
    s1 = x ** (K + 1) * ((K + 1) - K * x) / (1 - x) ** 2
    s0 = x ** (K + 1) / (1 - x)
    return Fraction(q - 1, 2 * q - 1) * (2 * (q - 1) * s1 - s0)


def area_sum_tail(q: int, from_k_exclusive: int) -> Fraction:
    """Exact tail sum over k > K of cylinder areas."""
    K = from_k_exclusive
    x = Fraction(1, q)
    s1 = x ** (K + 1) * ((K + 1) - K * x) / (1 - x) ** 2
    s0 = x ** (K + 1) / (1 - x)
    s0_sq = x ** (2 * (K + 1)) / (1 - x**2)
    return (q - 1) * s1 - s0 + s0_sq


def spine_displacement(r: Fraction) -> Fraction:
    """Total horizontal displacement of the spine, (2-r)/(1-r)."""
    return (2 - r) / (1 - r)


def spine_length_squared(r: Fraction) -> Fraction:
    """Squared length of the spine, ((2-r)**2 + 1)/(1-r)**2."""
    return ((2 - r) ** 2 + 1) / (1 - r) ** 2


# ----------------------------------------------------------------------
# chains
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SaddleChain:
    """A concatenation of saddle connections in the special direction.

    ``pieces`` are the traced maximal singularity-free segments; bottom
    chains have one piece for k = 1 and exactly two for k >= 2.  ``y_hits``
    is the sorted tuple of all section crossings.  The spine's single piece
    is a partial trace (its far end reaches the singularity only in the
    limit) and its displacement fields hold the exact closed-form totals.
    """

    label: str
    k: int
    slope: Fraction
    pieces: tuple
    y_hits: tuple
    displacement: Fraction

    def length_squared(self) -> Fraction:
        m = self.slope
        return self.displacement**2 * (1 + m * m)

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "k": self.k,
            "y_hits": [format_rational(y) for y in self.y_hits],
            "displacement": format_rational(self.displacement),
            "length_squared": format_rational(self.length_squared()),
        }


def _traced_chain(label: str, k: int, pieces: list[Trajectory]) -> SaddleChain:
    hits: set[Fraction] = set()
    for p in pieces:
        hits |= set(p.section_hits)
    disp = sum((p.horizontal_displacement for p in pieces), Fraction(0))
    return SaddleChain(
        label=label,
        k=k,
        slope=pieces[0].slope,
        pieces=tuple(pieces),
        y_hits=tuple(sorted(hits)),
        displacement=disp,
    )


def build_bsc1(q: int) -> SaddleChain:
    """Bottom chain of the first cylinder: the connection from (1,0) to (1,1)
    that wraps square 1 exactly 2q-3 times."""
    tail = Tail.from_q(q)
    t = trace(tail, (Fraction(1), Fraction(0)), flow_slope(q))
    if t.status != SINGULAR_HIT or t.end != (Fraction(1), Fraction(1)):
        raise ConstructionError(f"bsc_1 for q={q} ended at {t.end} ({t.status})")
    if set(t.section_hits) != bsc1_section_values(q):
        raise ConstructionError(f"bsc_1 section hits wrong for q={q}")
    wraps = t.displacement_by_square().get(1, Fraction(0))
    if wraps != 2 * q - 3:
        raise ConstructionError(f"bsc_1 wraps square 1 {wraps} times, expected {2*q-3}")
    return _traced_chain("bsc", 1, [t])


def _shifted_loop(q: int, k: int, prev: SaddleChain) -> Trajectory:
    """Retrace the previous chain shifted up by its skew-width.

    The shifted curve meets the singularity at exactly one point,
    (s_k, 1/q**(k-1)) ~ (0, 1/q**(k-1)); launching there, the flow must come
    back around to that same vertex, and its section crossings must be the
    previous chain's crossings shifted by the skew.
    """
    tail = Tail.from_q(q)
    delta = skew_width(q, k - 1)
    junction_y = Fraction(1, q ** (k - 1))
    t = trace(tail, (Fraction(0), junction_y), flow_slope(q))
    expected_end = (tail.offset(k), junction_y)
    if t.status != SINGULAR_HIT or t.end != expected_end:
        raise FusionError(
            f"shifted chain for q={q}, k={k} ended at {t.end} ({t.status}), "
            f"expected {expected_end}"
        )
    if set(t.section_hits) != {y + delta for y in prev.y_hits}:
        raise ShiftHitsSingularityError(
            f"shifted chain hits for q={q}, k={k} are not the previous hits + skew"
        )
    return t


def build_top1(q: int) -> SaddleChain:
    """Top boundary of the first cylinder: the first chain shifted up by
    (q-1)/(q(2q-1)), a closed connection through (0, 1/q) ending at
    (1 + 1/q, 1/q)."""
    bsc1 = build_bsc1(q)
    t = _shifted_loop(q, 2, bsc1)
    # Elementwise order check: the shifted itinerary replays the original.
    delta = skew_width(q, 1)
    shifted = tuple(y + delta for y in bsc1.pieces[0].section_hits)
    if t.section_hits != shifted:
        raise ShiftHitsSingularityError(f"top chain order broken for q={q}")
    return _traced_chain("top", 1, [t])


def build_bsc_prime(q: int, k: int) -> SaddleChain:
    """The new piece of the k-th bottom chain, launched from (s_k, 0) and
    ending at the upper-left vertex of square k."""
    if k < 2:
        raise BadParametersError("bsc' is defined for k >= 2")
    tail = Tail.from_q(q)
    t = trace(tail, (tail.offset(k), Fraction(0)), flow_slope(q))
    expected_end = (tail.offset(k - 1), tail.side(k))
    if t.status != SINGULAR_HIT or t.end != expected_end:
        raise ConstructionError(
            f"bsc'_{k} for q={q} ended at {t.end} ({t.status}), expected {expected_end}"
        )
    if set(t.section_hits) != bsc_prime_section_values(q, k):
        raise ConstructionError(f"bsc'_{k} section hits wrong for q={q}")
    return _traced_chain("bsc_prime", k, [t])


def _chain_sequence(q: int, k_max: int) -> list[SaddleChain]:
    """Bottom chains 1..k_max, built inductively and fully validated."""
    chains = [build_bsc1(q)]
    for k in range(2, k_max + 1):
        loop = _shifted_loop(q, k, chains[-1])
        prime = build_bsc_prime(q, k)
        chain = _traced_chain("bsc", k, [loop, prime.pieces[0]])
        if set(chain.y_hits) != chain_section_values(q, k):
            raise ConstructionError(f"bsc_{k} section set wrong for q={q}")
        if len(chain.y_hits) != section_hit_count(q, k):
            raise ConstructionError(f"bsc_{k} section count wrong for q={q}")
        chains.append(chain)
    return chains


def build_bsc(q: int, k: int) -> SaddleChain:
    """The k-th bottom chain; one piece for k = 1, two pieces for k >= 2."""
    return _chain_sequence(q, k)[k - 1]


def spine_chain(q_or_r, n_squares: int = 10) -> SaddleChain:
    """The rigid spine: the connection from the origin that crosses the roof
    of every square at the constant offset ratio 1 - r.

    The trace is necessarily partial (the spine enters every square); the
    traced displacement through squares 1..n is checked against its closed
    form and the chain stores the exact full-length values.
    """
    tail = q_or_r if isinstance(q_or_r, Tail) else (
        Tail.from_q(q_or_r) if isinstance(q_or_r, int) else Tail(q_or_r)
    )
    r = tail.r
    slope = 1 / (2 - r)
    budget = 3 * n_squares + 10
    t = trace(tail, (Fraction(0), Fraction(0)), slope, max_events=budget)
    roofs = [e for e in t.events if e.kind == "roof"]
    seen = set()
    for e in roofs:
        ratio = (e.point[0] - tail.offset(e.square - 1)) / tail.side(e.square)
        if ratio != 1 - r:
            raise ConstructionError(f"spine roof ratio {ratio} != {1 - r} in square {e.square}")
        seen.add(e.square)
    if not set(range(1, n_squares + 1)) <= seen:
        raise ConstructionError(f"spine trace did not reach square {n_squares}")
    # partial displacement through square n, plus the geometric tail
    cum = Fraction(0)
    for seg, ev in zip(t.segments, t.events):
        cum += seg[1][0] - seg[0][0]
        if ev.kind == "interior_pass":
            n = ev.square
            if cum != 2 + (r - r**n) / (1 - r):
                raise ConstructionError(f"spine partial displacement wrong at square {n}")
            if cum + r**n / (1 - r) != spine_displacement(r):
                raise ConstructionError("spine displacement tail identity failed")
    return SaddleChain(
        label="spine",
        k=0,
        slope=slope,
        pieces=(t,),
        y_hits=tuple(sorted(set(t.section_hits))),
        displacement=spine_displacement(r),
    )


# ----------------------------------------------------------------------
# cylinders
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Cylinder:
    k: int
    q: int
    bottom: SaddleChain
    waist: Trajectory
    skew_width: Fraction
    width_squared: Fraction
    horizontal_displacement: Fraction
    circumference_squared: Fraction
    modulus: Fraction
    area: Fraction
    crossings: dict

    def intervals(self) -> list[tuple[Fraction, Fraction]]:
        """The y-axis interval system carrying the cylinder's identity."""
        return [(y, y + self.skew_width) for y in self.bottom.y_hits]

    def contains_section_value(self, y: Fraction) -> bool:
        return any(lo < y < hi for lo, hi in self.intervals())

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "skew_width": format_rational(self.skew_width),
            "modulus": format_rational(self.modulus),
            "area": format_rational(self.area),
            "displacement": format_rational(self.horizontal_displacement),
            "y_hits": [format_rational(y) for y in self.bottom.y_hits],
            "crossings": {str(sq): n for sq, n in sorted(self.crossings.items())},
        }


def _singular_section_values_near(q: int, lo: Fraction) -> list[Fraction]:
    """Singular y-values 1/q**j (and 1) down to the scale of lo."""
    values = [Fraction(1)]
    j = 1
    while Fraction(1, q**j) > lo:
        values.append(Fraction(1, q**j))
        j += 1
    return values


def _measure_cylinder(q: int, k: int, chain: SaddleChain) -> Cylinder:
    tail = Tail.from_q(q)
    skew = skew_width(q, k)
    lows = chain.y_hits
    # no singular value may sit strictly inside any interval
    for y in lows:
        for s in _singular_section_values_near(q, lows[0]):
            if y < s < y + skew:
                raise SingularInsideIntervalError(
                    f"singular value {s} inside ({y}, {y + skew}) for cyl_{k}, q={q}"
                )
    midline = lows[0] + skew / 2
    waist = trace(tail, (Fraction(0), midline), flow_slope(q))
    if waist.status != CLOSED:
        raise FoliationError(f"midline trace of cyl_{k} (q={q}) did not close: {waist.status}")
    if set(waist.section_hits) != {y + skew / 2 for y in lows}:
        raise FoliationError(f"waist of cyl_{k} (q={q}) missed the shifted section set")
    displacement = waist.horizontal_displacement
    if displacement != waist_displacement(q, k):
        raise ConstructionError(
            f"cyl_{k} (q={q}): traced displacement {displacement} != closed form"
        )
    # crossings: per-square displacement must be an exact multiple of the side
    crossings = {}
    for sq, dx in sorted(waist.displacement_by_square().items()):
        count = dx / tail.side(sq)
        if count.denominator != 1:
            raise TableMismatchError(f"cyl_{k} (q={q}): fractional crossing of square {sq}")
        crossings[sq] = int(count)
    if crossings != crossing_table(q, k):
        raise TableMismatchError(
            f"cyl_{k} (q={q}): crossings {crossings} != table {crossing_table(q, k)}"
        )
    # measurements, each consistent with the traced displacement
    area = cylinder_area(q, k)
    if area != displacement * skew:
        raise ConstructionError(f"cyl_{k} (q={q}): area routes disagree")
    modulus = cylinder_modulus(q, k)
    norm_sq = direction_norm_squared(q)
    if modulus != displacement * norm_sq / ((2 * q - 1) ** 2 * skew):
        raise ConstructionError(f"cyl_{k} (q={q}): modulus routes disagree")
    return Cylinder(
        k=k,
        q=q,
        bottom=chain,
        waist=waist,
        skew_width=skew,
        width_squared=cylinder_width_squared(q, k),
        horizontal_displacement=displacement,
        circumference_squared=circumference_squared(q, k),
        modulus=modulus,
        area=area,
        crossings=crossings,
    )


def build_cyl(q: int, k: int) -> Cylinder:
    """Cylinder k with its verified foliation and exact measurements."""
    return _measure_cylinder(q, k, build_bsc(q, k))


def crossing_counts(cyl: Cylinder) -> dict[int, int]:
    return dict(cyl.crossings)


# ----------------------------------------------------------------------
# the pushing map and the rotation fill-in
# ----------------------------------------------------------------------


def f_r(tail: Tail, p: Point) -> Point:
    """The similarity (x, y) -> (r x + 1, r y) carrying square k onto k+1."""
    return (tail.r * p[0] + 1, tail.r * p[1])


def generation_zone_contains(tail: Tail, p: Point) -> bool:
    """Strict membership in the band that feeds the next cylinder: the
    preimage under the pushing map of the first cylinder's interior part in
    square 2."""
    x, y = p
    if not (0 <= x <= 1):
        return False
    m = 1 / (2 - tail.r)
    return m * x < y < m * x + (1 - tail.r) / (2 - tail.r)


def build_S1_S2(q: int, k: int) -> tuple[list[Fraction], list[Fraction]]:
    """Pushed endpoint sets of the k-th chain's section crossings.

    S1 holds the images y/q of crossings below q/(2q-1): the heights where
    pushed pieces end and a connecting segment must leave the section.  S2
    holds the images of crossings at or above (q-1)/(2q-1): the heights on
    x = 1 where pushed pieces start again.  Both have k(q-1) elements and
    the closed forms below must agree with the flow-derived sets exactly.
    """
    N = 2 * q - 1
    hits = chain_section_values(q, k)
    s1 = sorted(y / q for y in hits if y < Fraction(q, N))
    s2 = sorted(y / q for y in hits if y >= Fraction(q - 1, N))
    den = q**k * N
    s1_closed = {Fraction(i, den) for i in range(1, q)}
    for j in range(1, k):
        s1_closed |= {
            Fraction((i + 1) * q ** (k - j) - 1, den) for i in range(1, q)
        }
    s2_closed = {
        Fraction((i + 1) * q ** (k - 1) + q**k - 1, den)
        for i in range(-1, q - 1)
        if i != 0
    }
    for j in range(2, k):
        s2_closed |= {
            Fraction((i + 1) * q ** (k - j) + q**k - 1, den) for i in range(1, q)
        }
    if k >= 2:
        s2_closed |= {Fraction(i + q**k, den) for i in range(1, q)}
    if set(s1) != s1_closed or set(s2) != s2_closed:
        raise ConstructionError(f"S1/S2 closed forms disagree with the flow for q={q}, k={k}")
    if len(s1) != k * (q - 1) or len(s2) != k * (q - 1):
        raise ConstructionError(f"S1/S2 sizes wrong for q={q}, k={k}")
    return s1, s2


def fill_in_orbits(
    q: int, k: int
) -> list[tuple[Fraction, tuple[Fraction, ...], Fraction]]:
    """Connect each loose end in S1 to a loose start in S2 by iterating the
    circle rotation.

    An iterate at or above 1/q is a portal hit and becomes a new section
    crossing of the next waist (the waist runs skew/2 above these values, so
    an iterate exactly at a singular height passes strictly above it); the
    first iterate below 1/q exits into square 2 and must land on an element
    of S2, matched bijectively.  The union of S1 and all intermediates must
    be exactly the next chain's section set.
    """
    s1, s2 = build_S1_S2(q, k)
    rot = CircleRotation.for_q(q)
    unmatched = set(s2)
    cut = Fraction(1, q)
    results = []
    intermediates_all: set[Fraction] = set()
    for start in s1:
        cur = start
        inter: list[Fraction] = []
        for _ in range(2 * q + 2):
            cur = rot.rotate(cur)
            if cur < cut:
                break
            if not (cut <= cur < 1):
                raise FillInError(f"iterate {cur} of {start} escapes [1/q, 1)")
            inter.append(cur)
        else:
            raise FillInError(f"orbit of {start} never exits below 1/q (q={q}, k={k})")
        if cur not in unmatched:
            raise FillInError(f"orbit of {start} exits at {cur}, not a free S2 element")
        unmatched.discard(cur)
        intermediates_all |= set(inter)
        results.append((start, tuple(inter), cur))
    if unmatched:
        raise FillInError(f"unmatched S2 elements {sorted(unmatched)} for q={q}, k={k}")
    if set(s1) | intermediates_all != chain_section_values(q, k + 1):
        raise FillInError(
            f"fill-in of cyl_{k} (q={q}) does not produce the next chain's section set"
        )
    return results


def fill_in(q: int, k: int) -> bool:
    """True when the rotation fill-in connects S1 to S2 as required."""
    fill_in_orbits(q, k)
    return True


# ----------------------------------------------------------------------
# decompositions
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    q: int
    slope: Fraction
    cylinders: tuple
    spine: SaddleChain
    covered_area: Fraction
    kind: str = "special"

    def moduli(self) -> list[Fraction]:
        return [c.modulus for c in self.cylinders]

    def to_json_dict(self) -> dict:
        ok, moduli = no_parabolic(self)
        return {
            "q": self.q,
            "direction": format_rational(self.slope),
            "spine": {
                "displacement": format_rational(self.spine.displacement),
                "length_squared": format_rational(self.spine.length_squared()),
                "y_hits": [format_rational(y) for y in self.spine.y_hits],
            },
            "cylinders": [c.to_json_dict() for c in self.cylinders],
            "covered_area": format_rational(self.covered_area),
            "no_parabolic": ok,
        }


def _check_disjoint(cylinders) -> None:
    intervals = []
    for c in cylinders:
        intervals.extend(c.intervals())
    intervals.sort()
    for (lo1, hi1), (lo2, hi2) in zip(intervals, intervals[1:]):
        if hi1 > lo2:
            raise ConstructionError(
                f"cylinder intervals ({lo1},{hi1}) and ({lo2},{hi2}) overlap"
            )


def _check_telescoping(q: int, k_max: int) -> None:
    """Stacked skew-widths above each lower crossing telescope exactly to the
    next crossing of the same chain (finite partial sum plus closed tail)."""
    N = 2 * q - 1
    for i in range(1, q):
        partial = sum((skew_width(q, j) for j in range(1, k_max + 1)), Fraction(0))
        lhs = Fraction(i, N) + partial + Fraction(1, q**k_max * N)
        if lhs != Fraction(i + 1, N):
            raise ConstructionError(f"telescoping failed at level 1, i={i}, q={q}")
    for k in range(2, k_max + 1):
        den = q ** (k - 1) * N
        for i in range(1, q):
            partial = sum(
                (skew_width(q, j) for j in range(k, k_max + 1)), Fraction(0)
            )
            lhs = Fraction(i, den) + partial + Fraction(1, q**k_max * N)
            if lhs != Fraction(i + 1, den):
                raise ConstructionError(f"telescoping failed at level {k}, i={i}, q={q}")


def decompose(q: int, k_max: int) -> Decomposition:
    """Cylinders 1..k_max plus the rigid spine, with the convergence
    bookkeeping verified exactly."""
    if k_max < 1:
        raise BadParametersError("k_max must be >= 1")
    chains = _chain_sequence(q, k_max)
    cylinders = tuple(
        _measure_cylinder(q, k, chains[k - 1]) for k in range(1, k_max + 1)
    )
    _check_disjoint(cylinders)
    _check_telescoping(q, k_max)
    covered = sum((c.area for c in cylinders), Fraction(0))
    total = Fraction(q**2, q**2 - 1)
    if covered + area_sum_tail(q, k_max) != total:
        raise ConstructionError(f"area tail identity failed for q={q}, K={k_max}")
    measured_skew_sum = sum(
        (len(c.bottom.y_hits) * c.skew_width for c in cylinders), Fraction(0)
    )
    if measured_skew_sum + skew_sum_tail(q, k_max) != 1:
        raise ConstructionError(f"skew-width sum identity failed for q={q}, K={k_max}")
    spine = spine_chain(q, n_squares=max(4, k_max + 2))
    return Decomposition(
        q=q,
        slope=flow_slope(q),
        cylinders=cylinders,
        spine=spine,
        covered_area=covered,
    )


def no_parabolic(decomposition_or_moduli) -> tuple[bool, list[Fraction]]:
    """Whether the moduli witness the absence of a parabolic map preserving
    the decomposition: strictly increasing with unbounded growth.  Equal
    (or any non-increasing) moduli return False."""
    if hasattr(decomposition_or_moduli, "moduli"):
        moduli = list(decomposition_or_moduli.moduli())
    else:
        moduli = list(decomposition_or_moduli)
    if len(moduli) < 3:
        raise BadParametersError("need at least 3 cylinders to judge the moduli trend")
    increasing = all(b > a for a, b in zip(moduli, moduli[1:]))
    growing = moduli[-1] >= 2 * moduli[0]
    return (increasing and growing, moduli)


# ----------------------------------------------------------------------
# the two axis decompositions
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class AxisCylinder:
    k: int
    circumference: Fraction
    width: Fraction
    modulus: Fraction
    area: Fraction


@dataclass(frozen=True)
class AxisDecomposition:
    kind: str
    r: Fraction
    cylinders: tuple
    covered_area: Fraction

    def moduli(self) -> list[Fraction]:
        return [c.modulus for c in self.cylinders]


def horizontal_decomposition(q_or_r, k_max: int) -> AxisDecomposition:
    """Horizontal cylinders: band k is the strip between heights l_{k+1} and
    l_k, running through squares 1..k, so its circumference is s_k and its
    width l_k - l_{k+1}; the moduli grow without bound."""
    tail = q_or_r if isinstance(q_or_r, Tail) else (
        Tail.from_q(q_or_r) if isinstance(q_or_r, int) else Tail(q_or_r)
    )
    r = tail.r
    cyls = []
    for k in range(1, k_max + 1):
        circ = tail.offset(k)
        width = tail.side(k) - tail.side(k + 1)
        cyls.append(
            AxisCylinder(
                k=k,
                circumference=circ,
                width=width,
                modulus=circ / width,
                area=circ * width,
            )
        )
    covered = sum((c.area for c in cyls), Fraction(0))
    # exact tail: sum_{k>K} s_k (l_k - l_{k+1})
    tail_area = r**k_max / (1 - r) - r ** (2 * k_max + 1) / (1 - r**2)
    if covered + tail_area != tail.total_area():
        raise ConstructionError("horizontal decomposition area tail identity failed")
    return AxisDecomposition("horizontal", r, tuple(cyls), covered)


def vertical_decomposition(q_or_r, k_max: int) -> AxisDecomposition:
    """Vertical cylinders: each square is a cylinder of modulus exactly 1."""
    tail = q_or_r if isinstance(q_or_r, Tail) else (
        Tail.from_q(q_or_r) if isinstance(q_or_r, int) else Tail(q_or_r)
    )
    r = tail.r
    cyls = []
    for k in range(1, k_max + 1):
        side = tail.side(k)
        cyls.append(
            AxisCylinder(k=k, circumference=side, width=side, modulus=Fraction(1), area=side**2)
        )
    covered = sum((c.area for c in cyls), Fraction(0))
    if covered + r ** (2 * k_max) / (1 - r**2) != tail.total_area():
        raise ConstructionError("vertical decomposition area tail identity failed")
    horiz = horizontal_decomposition(tail, k_max)
    # the cross relations between the two axis decompositions
    if cyls[0].width != horiz.cylinders[0].circumference:
        raise ConstructionError("width of the first vertical cylinder must equal the "
                                "circumference of the first horizontal cylinder")
    for j in range(1, k_max + 1):
        # circumference of vertical cylinder j == sum of horizontal widths from j on
        partial = sum(
            (c.width for c in horiz.cylinders if c.k >= j), Fraction(0)
        )
        if partial + tail.side(k_max + 1) != cyls[j - 1].circumference:
            raise ConstructionError(f"axis width/circumference relation failed at {j}")
    return AxisDecomposition("vertical", r, tuple(cyls), covered)


def build_axis_decompositions(q_or_r, k_max: int) -> tuple[AxisDecomposition, AxisDecomposition]:
    """Both axis decompositions, with their cross relations verified."""
    return horizontal_decomposition(q_or_r, k_max), vertical_decomposition(q_or_r, k_max)


# ----------------------------------------------------------------------
# the failed orthogonal construction
# ----------------------------------------------------------------------


def orthogonal_obstruction(q: int) -> dict:
    """Compare the squared spine length with the squared length of the first
    bottom chain; the spine is the longer one exactly for q = 2, which is
    what blocks running the cylinder construction orthogonally."""
    spine = spine_chain(q)
    bsc1 = build_bsc1(q)
    spine_sq = spine.length_squared()
    if spine_sq != spine_length_squared(Fraction(1, q)):
        raise ConstructionError(f"spine length closed form failed for q={q}")
    bsc1_sq = bsc1.length_squared()
    return {
        "q": q,
        "spine_length_squared": spine_sq,
        "bsc1_length_squared": bsc1_sq,
        "spine_longer": spine_sq > bsc1_sq,
    }
