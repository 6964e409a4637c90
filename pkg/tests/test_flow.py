from fractions import Fraction as F

import pytest

from tailsurf.flow import (
    BUDGET_EXHAUSTED,
    CLOSED,
    SINGULAR_HIT,
    DegenerateSlopeError,
    SingularStartError,
    first_return,
    next_event,
    saddle_connection,
    trace,
)
from tailsurf.surface import INTERIOR_PASS, PORTAL, ROOF, SINGULAR, Tail


def slope_for(q):
    return F(q, 2 * q - 1)


def test_next_event_examples():
    t = Tail.from_q(2)
    ev = next_event(t, (F(1), F(0)), F(2, 3))
    assert (ev.kind, ev.square, ev.point) == (PORTAL, 2, (F(3, 2), F(1, 3)))
    ev = next_event(t, (F(0), F(2, 3)), F(2, 3))
    assert (ev.kind, ev.square, ev.point) == (ROOF, 1, (F(1, 2), F(1)))
    ev = next_event(t, (F(0), F(1, 3)), F(2, 3))
    assert (ev.kind, ev.point) == (SINGULAR, (F(1), F(1)))


def test_next_event_classification_splits_on_next_side():
    t = Tail.from_q(2)
    # the right-edge height against the next side decides the three-way split
    assert next_event(t, (F(0), F(1, 5)), F(2, 3)).kind == PORTAL  # 13/15 > 1/2
    assert next_event(t, (F(1, 4), F(0)), F(2, 3)).kind == SINGULAR  # height 1/2
    assert next_event(t, (F(1, 2), F(0)), F(2, 3)).kind == INTERIOR_PASS  # height 1/3
    with pytest.raises(DegenerateSlopeError):
        next_event(t, (F(0), F(0)), F(-1, 2))
    with pytest.raises(SingularStartError):
        next_event(t, (F(1, 2), F(1)), F(2, 3))  # on the roof, cannot enter


def test_first_chain_q2():
    t = trace(Tail.from_q(2), (F(1), F(0)), slope_for(2))
    assert t.status == SINGULAR_HIT
    assert t.end == (F(1), F(1))
    assert t.section_hits == (F(1, 3),)
    assert [e.kind for e in t.events] == [PORTAL, SINGULAR]
    assert t.horizontal_displacement == F(3, 2)
    assert t.displacement_by_square() == {1: 1, 2: F(1, 2)}


def test_first_chain_q3_flow_order():
    t = trace(Tail.from_q(3), (F(1), F(0)), slope_for(3))
    assert t.status == SINGULAR_HIT and t.end == (F(1), F(1))
    # the section values appear in rotation order, not sorted order
    assert t.section_hits == (F(1, 5), F(4, 5), F(2, 5))
    assert t.displacement_by_square()[1] == 3  # wraps square 1 exactly 2q-3 times


@pytest.mark.parametrize("q", [2, 3, 4, 5, 6])
def test_first_chain_wraps_and_hits(q):
    N = 2 * q - 1
    t = trace(Tail.from_q(q), (F(1), F(0)), slope_for(q))
    assert t.status == SINGULAR_HIT and t.end == (F(1), F(1))
    assert set(t.section_hits) == {F(i, N) for i in range(1, N) if i != q}
    assert t.displacement_by_square()[1] == 2 * q - 3


def test_closed_waist_and_two_sidedness():
    tail = Tail.from_q(2)
    skew = F(1, 6)
    for j in range(1, 6):
        eps = skew * j / 6
        t = trace(tail, (F(0), F(1, 3) + eps), slope_for(2))
        assert t.status == CLOSED
        assert t.horizontal_displacement == F(3, 2)
    # the value quoted with the waist example, eps = 1/24
    t = trace(tail, (F(0), F(1, 3) + F(1, 24)), slope_for(2))
    assert t.status == CLOSED and t.horizontal_displacement == F(3, 2)


def test_budget_monotonicity():
    tail = Tail.from_q(3)
    t5 = trace(tail, (F(1), F(0)), slope_for(3), max_events=5)
    t500 = trace(tail, (F(1), F(0)), slope_for(3), max_events=500)
    assert t5.status == SINGULAR_HIT == t500.status
    assert t5.end == t500.end and t5.segments == t500.segments
    partial = trace(tail, (F(0), F(0)), slope_for(3), max_events=4)
    assert partial.status == BUDGET_EXHAUSTED


def test_replay_reproduces_segments():
    tail = Tail.from_q(3)
    t = trace(tail, (F(4, 3), F(0)), slope_for(3))
    current = t.start
    for seg, ev in zip(t.segments, t.events):
        assert seg[0] == current
        assert seg[1] == ev.point
        dx, dy = seg[1][0] - seg[0][0], seg[1][1] - seg[0][1]
        assert dy * (2 * 3 - 1) == dx * 3  # exact slope
        if ev.kind == INTERIOR_PASS:
            current = ev.point
        elif ev.kind != SINGULAR:
            current = tail.identify(ev)


@pytest.mark.parametrize(
    "r", [F(1, 2), F(1, 3), F(1, 4), F(1, 5), F(1, 6), F(2, 3), F(4, 5)]
)
def test_spine_crosses_every_roof_at_fixed_ratio(r):
    tail = Tail(r)
    slope = 1 / (2 - r)
    t = trace(tail, (F(0), F(0)), slope, max_events=60)
    roofs = [e for e in t.events if e.kind == ROOF]
    assert len(roofs) >= 12
    for e in roofs:
        offset = e.point[0] - tail.offset(e.square - 1)
        assert offset == (1 - r) * tail.side(e.square)
    # vertex-free up to the budget
    assert t.status == BUDGET_EXHAUSTED
    # displacement through squares 1..n, then the exact geometric tail
    cum = F(0)
    for seg, ev in zip(t.segments, t.events):
        cum += seg[1][0] - seg[0][0]
        if ev.kind == INTERIOR_PASS:
            n = ev.square
            assert cum == 2 + (r - r**n) / (1 - r)
            assert cum + r**n / (1 - r) == (2 - r) / (1 - r)


def test_spine_squared_length_q2():
    r = F(1, 2)
    displacement = (2 - r) / (1 - r)
    vertical = displacement / (2 - r)
    assert displacement == 3 and vertical == 2
    assert displacement**2 + vertical**2 == 13


def test_non_unit_ratio_flow_dies_at_a_vertex():
    # r = 2/3: the wrapping pattern of the unit-ratio case breaks down; the
    # flow wanders through squares 1..3 and dies at the vertex (1+r, r).
    t = trace(Tail(F(2, 3)), (F(1), F(0)), F(3, 4))
    assert t.status == SINGULAR_HIT
    assert t.end == (F(5, 3), F(2, 3))
    assert t.end != (F(1), F(1))
    squares = set(t.displacement_by_square())
    assert squares == {1, 2, 3}


def test_saddle_connection_endpoints():
    tail = Tail.from_q(2)
    sc = saddle_connection(tail, (F(3, 2), F(0)), slope_for(2))
    assert sc.status == SINGULAR_HIT
    assert tail.is_singular(sc.start) and tail.is_singular(sc.end)
    with pytest.raises(SingularStartError):
        saddle_connection(tail, (F(1, 2), F(1, 4)), slope_for(2))


def test_top_chain_passes_section_at_inverse_q():
    for q in (2, 3, 4):
        tail = Tail.from_q(q)
        t = trace(tail, (F(0), F(1, q)), slope_for(q))
        assert t.section_hits[0] == F(1, q)
        assert t.end == (F(q + 1, q), F(1, q))


def test_first_return_matches_rotation_in_portal_range():
    # the rotation is the section map as long as the flow stays in square 1,
    # i.e. while the rotated value stays at or above 1/q
    tail = Tail.from_q(2)
    for y in (F(1, 10), F(1, 5), F(3, 10), F(9, 10), F(17, 18)):
        rotated = (y + F(2, 3)) % 1
        assert rotated >= F(1, 2)
        assert first_return(tail, y, slope_for(2)) == rotated


def test_trace_on_truncated_tail():
    # the unit square with both gluings is a torus: the diagonal-ish flow closes
    x1 = Tail.from_q(2, truncation=1)
    t = trace(x1, (F(0), F(1, 5)), F(2, 3))
    assert t.status == CLOSED
    assert t.horizontal_displacement == 3  # slope 2/3 closes after 3 horizontal units
    x2 = Tail.from_q(2, truncation=2)
    t2 = trace(x2, (F(0), F(1, 5)), F(2, 3))
    assert t2.status in (CLOSED, SINGULAR_HIT)


def test_degenerate_slope_rejected():
    with pytest.raises(DegenerateSlopeError):
        trace(Tail.from_q(2), (F(0), F(1, 3)), F(0))
    with pytest.raises(DegenerateSlopeError):
        trace(Tail.from_q(2), (F(0), F(1, 3)), F(-2, 3))
