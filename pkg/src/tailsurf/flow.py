"""Exact linear-flow tracing through the tail's edge identifications.

A ray of positive rational slope is stepped from boundary contact to boundary
contact.  Within the current square the first contact is either the roof or
the right edge; a right-edge contact splits three ways by exact comparison of
its height against the next square's side: above it is a portal (teleport to
the y-axis), below it is an interior pass (the ray continues into the next
square), and exactly at it, at the roof, or at the base corner it is a vertex
of the polygon, i.e. the singularity.  There is no epsilon anywhere: every
classification is a comparison of two rationals.

Launching *from* the singularity is permitted whenever the ray immediately
enters the open polygon; that is how every saddle connection in this package
starts.  A trajectory terminates by hitting the singularity, by returning
exactly to its start point at an event (a closed geodesic), or by exhausting
its event budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Point, format_point, format_rational
from .surface import (
    INTERIOR_PASS,
    PORTAL,
    ROOF,
    SINGULAR,
    Event,
    GeometryError,
    Tail,
)


class FlowError(GeometryError):
    """Base class for flow-tracing errors."""


class DegenerateSlopeError(FlowError):
    """Slope must have positive rise and run."""


class SingularStartError(FlowError):
    """The ray cannot enter the surface interior from this start point."""


# Trajectory termination statuses.
SINGULAR_HIT = "singular_hit"
CLOSED = "closed"
BUDGET_EXHAUSTED = "budget_exhausted"

DEFAULT_MAX_EVENTS = 10_000


@dataclass(frozen=True)
class Trajectory:
    """An exactly traced flow path.

    ``segments`` are (start, end) pairs in polygon coordinates, one per
    boundary event, all parallel to ``slope``.  ``events`` holds the contact
    classifications in order.  ``section_hits`` lists the y-coordinates of
    every point of the path on the section x = 0, in flow order, starting
    with the launch point when it lies on the section; for a closed
    trajectory the final return coincides with the start and is not listed
    twice.
    """

    tail: Tail
    start: Point
    slope: Fraction
    segments: tuple
    events: tuple
    status: str
    end: Point
    horizontal_displacement: Fraction
    section_hits: tuple

    def displacement_by_square(self) -> dict[int, Fraction]:
        """Total horizontal displacement inside each square."""
        sums: dict[int, Fraction] = {}
        for (x0, _), (x1, _) in self.segments:
            k = self.tail.square_index(x0)
            sums[k] = sums.get(k, Fraction(0)) + (x1 - x0)
        return sums

    def to_json_dict(self) -> dict:
        return {
            "start": format_point(self.start),
            "slope": format_rational(self.slope),
            "status": self.status,
            "segments": [[format_point(a), format_point(b)] for a, b in self.segments],
            "section_hits": [format_rational(y) for y in self.section_hits],
            "horizontal_displacement": format_rational(self.horizontal_displacement),
        }


def _first_contact(tail: Tail, p: Point, slope: Fraction) -> Event:
    """First boundary contact of the ray from p, classified exactly."""
    x, y = p
    k = tail.square_index(x)
    side_k = tail.side(k)
    right = tail.offset(k)
    if not (0 <= y < side_k):
        raise SingularStartError(
            f"ray from {p} does not enter the interior of square {k}"
        )
    x_roof = x + (side_k - y) / slope
    if x_roof < right:
        return Event(ROOF, k, (x_roof, side_k))
    if x_roof == right:
        return Event(SINGULAR, k, (right, side_k))
    y_right = y + slope * (right - x)
    if tail.is_last_square(k):
        # Truncated tail: the whole open right edge teleports to the y-axis.
        return Event(PORTAL, k, (right, y_right))
    side_next = tail.side(k + 1)
    if y_right > side_next:
        return Event(PORTAL, k, (right, y_right))
    if y_right == side_next:
        return Event(SINGULAR, k, (right, side_next))
    return Event(INTERIOR_PASS, k, (right, y_right))


def next_event(tail: Tail, p: Point, slope: Fraction) -> Event:
    """Public single-step wrapper around the contact classifier."""
    if slope <= 0:
        raise DegenerateSlopeError(f"slope must be positive, got {slope}")
    return _first_contact(tail, p, slope)


def trace(
    tail: Tail,
    start: Point,
    slope: Fraction,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> Trajectory:
    """Trace the flow from ``start`` until it hits the singularity, closes
    up, or runs out of its event budget.

    Closure is decided by exact equality of a post-identification event point
    with the start point (for the waist traces used throughout, that is the
    first return to the section x = 0).
    """
    if slope <= 0:
        raise DegenerateSlopeError(f"slope must be positive, got {slope}")
    start = (Fraction(start[0]), Fraction(start[1]))
    segments = []
    events = []
    hits = [start[1]] if start[0] == 0 else []
    displacement = Fraction(0)
    status = BUDGET_EXHAUSTED
    p = start
    end = start
    for _ in range(max_events):
        ev = _first_contact(tail, p, slope)
        segments.append((p, ev.point))
        events.append(ev)
        displacement += ev.point[0] - p[0]
        if ev.kind == SINGULAR:
            status = SINGULAR_HIT
            end = ev.point
            break
        if ev.kind == INTERIOR_PASS:
            p = ev.point
        else:
            p = tail.identify(ev)
        if p == start:
            status = CLOSED
            end = p
            break
        if ev.kind == PORTAL:
            hits.append(p[1])
    else:
        end = p
    return Trajectory(
        tail=tail,
        start=start,
        slope=slope,
        segments=tuple(segments),
        events=tuple(events),
        status=status,
        end=end,
        horizontal_displacement=displacement,
        section_hits=tuple(hits),
    )


def saddle_connection(
    tail: Tail,
    from_vertex: Point,
    slope: Fraction,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> Trajectory:
    """Flow from a vertex until the next singular hit.

    The start must be singular with the ray entering the interior; the result
    has both endpoints at the singularity unless the budget runs out first.
    """
    if not tail.is_singular(from_vertex):
        raise SingularStartError(f"{from_vertex} is not a vertex of the polygon")
    return trace(tail, from_vertex, slope, max_events)


def section_hits(t: Trajectory) -> list[Fraction]:
    """The y-coordinates of the trajectory's x = 0 points, in flow order."""
    return list(t.section_hits)


def first_return(
    tail: Tail,
    y: Fraction,
    slope: Fraction,
    max_events: int = DEFAULT_MAX_EVENTS,
) -> Fraction:
    """y-coordinate of the first return to the section x = 0 of the flow
    from (0, y).  Raises FlowError if the flow dies at the singularity first.
    """
    p: Point = (Fraction(0), Fraction(y))
    for _ in range(max_events):
        ev = _first_contact(tail, p, slope)
        if ev.kind == SINGULAR:
            raise FlowError(f"flow from (0, {y}) hits the singularity at {ev.point}")
        if ev.kind == INTERIOR_PASS:
            p = ev.point
            continue
        p = tail.identify(ev)
        if ev.kind == PORTAL:
            return p[1]
    raise FlowError(f"no return to the section within {max_events} events")
