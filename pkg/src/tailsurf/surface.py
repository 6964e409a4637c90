"""The tail surface: a row of shrinking squares with roof and portal gluings.

Square k (k = 1, 2, ...) has side ``l_k = r**(k-1)`` for a rational ratio
0 < r < 1 and sits on the x-axis over ``[s_{k-1}, s_k]`` where
``s_k = l_1 + ... + l_k``.  Horizontal edges glue by vertical translation
(each roof to the base below it) and vertical edges glue by horizontal
translation: the exposed part of square k's right edge, the *portal*
``{s_k} x (l_{k+1}, l_k)``, glues to the matching band of the y-axis.  All
polygon vertices are a single identified point, the surface's unique
singularity.

A *truncated* tail keeps squares 1..n and additionally glues the whole right
edge of square n to the bottom segment ``{0} x (0, l_n)`` of the y-axis,
giving a finite translation surface.  On a truncated tail every polygon
vertex is treated as singular (a modeling choice at the corner created by the
extra gluing).

The unit-ratio case r = 1/q, q an integer >= 2, is the one all cylinder
constructions in :mod:`tailsurf.cylinders` require; generic rational r is
supported for flow tracing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Point, rat


class GeometryError(Exception):
    """Base class for surface-model errors."""


class BadParametersError(GeometryError):
    """Constructor arguments outside the model's domain."""


class OutOfRangeError(GeometryError):
    """A coordinate falls outside the polygon."""


class NotIdentifiableError(GeometryError):
    """The event carries no edge identification."""


# Boundary-event kinds.
ROOF = "roof"
PORTAL = "portal"
INTERIOR_PASS = "interior_pass"
SINGULAR = "singular_vertex"


@dataclass(frozen=True)
class Event:
    """A boundary contact of a flow ray.

    kind     one of ROOF, PORTAL, INTERIOR_PASS, SINGULAR
    square   the square index the contact belongs to (for INTERIOR_PASS the
             square being left, i.e. the pass is from ``square`` into
             ``square + 1``)
    point    the contact point in polygon coordinates
    """

    kind: str
    square: int
    point: Point


class Tail:
    """Immutable model of one tail surface; all queries are pure."""

    __slots__ = ("r", "q", "truncation")

    def __init__(self, r, truncation: int | None = None):
        r = rat(r)
        if not (0 < r < 1):
            raise BadParametersError(f"ratio must satisfy 0 < r < 1, got {r}")
        if truncation is not None and truncation < 1:
            raise BadParametersError(f"truncation must be >= 1, got {truncation}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "q", r.denominator if r.numerator == 1 else None)
        object.__setattr__(self, "truncation", truncation)

    def __setattr__(self, *a):  # immutability guard
        raise AttributeError("Tail is immutable")

    @classmethod
    def from_q(cls, q: int, truncation: int | None = None) -> "Tail":
        """The unit-ratio tail r = 1/q, q an integer >= 2."""
        if not isinstance(q, int) or q < 2:
            raise BadParametersError(f"q must be an integer >= 2, got {q!r}")
        return cls(Fraction(1, q), truncation)

    def __repr__(self):
        trunc = f", truncation={self.truncation}" if self.truncation else ""
        return f"Tail(r={self.r}{trunc})"

    def __eq__(self, other):
        return (
            isinstance(other, Tail)
            and self.r == other.r
            and self.truncation == other.truncation
        )

    def __hash__(self):
        return hash((self.r, self.truncation))

    # ------------------------------------------------------------------
    # geometry queries
    # ------------------------------------------------------------------

    def side(self, k: int) -> Fraction:
        """Side length l_k = r**(k-1) of square k."""
        if k < 1:
            raise OutOfRangeError(f"square index must be >= 1, got {k}")
        if self.truncation is not None and k > self.truncation:
            raise OutOfRangeError(f"square {k} beyond truncation {self.truncation}")
        return self.r ** (k - 1)

    def offset(self, k: int) -> Fraction:
        """Right edge abscissa s_k = (1 - r**k)/(1 - r); s_0 = 0."""
        if k == 0:
            return Fraction(0)
        if self.truncation is not None and k > self.truncation:
            raise OutOfRangeError(f"square {k} beyond truncation {self.truncation}")
        return (1 - self.r**k) / (1 - self.r)

    def extent(self) -> Fraction:
        """Supremum of x over the polygon (s_n if truncated, 1/(1-r) if not)."""
        if self.truncation is not None:
            return self.offset(self.truncation)
        return 1 / (1 - self.r)

    def is_last_square(self, k: int) -> bool:
        return self.truncation is not None and k == self.truncation

    def area_partial(self, n_squares: int) -> Fraction:
        """Exact area of squares 1..n: (1 - r**(2n)) / (1 - r**2)."""
        return (1 - self.r ** (2 * n_squares)) / (1 - self.r**2)

    def total_area(self) -> Fraction:
        """Exact area of the whole surface."""
        if self.truncation is not None:
            return self.area_partial(self.truncation)
        return 1 / (1 - self.r**2)

    def square_index(self, x: Fraction) -> int:
        """The k with s_{k-1} <= x < s_k (half-open cells).

        A point with x exactly on a shared edge s_k belongs to square k+1;
        boundary classification of such points is the flow tracer's job, not
        this function's.
        """
        if x < 0:
            raise OutOfRangeError(f"x = {x} is left of the surface")
        if x >= self.extent():
            raise OutOfRangeError(f"x = {x} is beyond the tail")
        k = 1
        s = self.side(1)
        while s <= x:
            k += 1
            s += self.side(k)
        return k

    def _geometric_index(self, value: Fraction) -> int | None:
        """k >= 1 with value == r**(k-1), or None (truncation-capped)."""
        if value <= 0 or value > 1:
            return None
        cur = Fraction(1)
        k = 1
        while cur > value:
            cur *= self.r
            k += 1
            if self.truncation is not None and k > self.truncation + 1:
                return None
        return k if cur == value else None

    def _offset_index(self, x: Fraction) -> int | None:
        """k >= 1 with x == s_k, or None."""
        if x <= 0:
            return None
        k = 1
        s = self.side(1)
        last = self.truncation
        while s < x:
            if last is not None and k >= last:
                return None
            k += 1
            s += self.side(k)
        return k if s == x else None

    # ------------------------------------------------------------------
    # the singularity
    # ------------------------------------------------------------------

    def is_singular(self, p: Point) -> bool:
        """Whether p is a polygon vertex (all of which are the one singular
        point of the surface).

        On the y-axis the vertices are y in {0, 1} union {l_k : k >= 2};
        at a shared abscissa s_k they are y in {0, l_k, l_{k+1}} (and just
        {0, l_n} at the truncated right edge).
        """
        x, y = p
        if x == 0:
            if y == 0 or y == 1:
                return True
            k = self._geometric_index(y)
            if k is None or k < 2:
                return False
            return self.truncation is None or k <= self.truncation
        k = self._offset_index(x)
        if k is None:
            return False
        if y == 0 or y == self.side(k):
            return True
        if self.is_last_square(k):
            return False
        return y == self.side(k + 1)

    # ------------------------------------------------------------------
    # identifications
    # ------------------------------------------------------------------

    def identify(self, event: Event) -> Point:
        """Where the flow re-enters after crossing a glued edge.

        Roofs translate vertically onto the base, portals horizontally onto
        the y-axis; the band of portal(n) on a truncated tail is the whole
        open right edge (0, l_n).  Interior passes and singular contacts are
        not identifications.
        """
        x, y = event.point
        k = event.square
        if event.kind == ROOF:
            if y != self.side(k) or not (self.offset(k - 1) < x < self.offset(k)):
                raise NotIdentifiableError(f"{event} is not on the roof of square {k}")
            return (x, Fraction(0))
        if event.kind == PORTAL:
            if x != self.offset(k):
                raise NotIdentifiableError(f"{event} is not on the right edge of square {k}")
            low = Fraction(0) if self.is_last_square(k) else self.side(k + 1)
            if not (low < y < self.side(k)):
                raise NotIdentifiableError(f"{event} is outside the portal band of square {k}")
            return (Fraction(0), y)
        raise NotIdentifiableError(f"no identification for event kind {event.kind!r}")

    def truncated_identify(self, p: Point) -> Point:
        """The extra gluing of a truncated tail: (s_n, y) -> (0, y), 0 < y < l_n."""
        if self.truncation is None:
            raise NotIdentifiableError("tail is not truncated")
        n = self.truncation
        x, y = p
        if x != self.offset(n) or not (0 < y < self.side(n)):
            raise NotIdentifiableError(f"{p} is not interior to the truncated right edge")
        return (Fraction(0), y)

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"q": self.q, "truncation": self.truncation}


def harmonic_area_partial(n_squares: int) -> Fraction:
    """Exact area of the first n squares of the harmonic tail (l_k = 1/k)."""
    return sum((Fraction(1, k) ** 2 for k in range(1, n_squares + 1)), Fraction(0))
