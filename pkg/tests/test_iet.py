import random
from fractions import Fraction as F

import pytest

from tailsurf.flow import first_return
from tailsurf.iet import (
    CircleRotation,
    InGapError,
    TargetNotReachedError,
    build_tk,
    fusion_ladder_base,
    fusion_ladder,
    fusion_orbit_length,
    orbit_until,
)
from tailsurf.surface import BadParametersError, Tail


def test_rotation():
    rot = CircleRotation.for_q(2)
    assert rot.angle == F(2, 3)
    assert rot.rotate(F(1, 6)) == F(5, 6)
    assert rot.rotate(rot.rotate(F(3, 8))) == F(17, 24)
    assert rot.period() == 3
    rot3 = CircleRotation.for_q(3)
    xs = [F(1, 5)]
    for _ in range(5):
        xs.append(rot3.rotate(xs[-1]))
    assert xs[5] == xs[0] and len(set(xs[:5])) == 5


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_rotation_period_is_full(q):
    rot = CircleRotation.for_q(q)
    x = F(1, 2 * q + 1)
    orbit = {x}
    cur = x
    for _ in range(2 * q - 2):
        cur = rot.rotate(cur)
        orbit.add(cur)
    assert rot.rotate(cur) == x
    assert len(orbit) == 2 * q - 1


def test_printed_three_square_map():
    T = build_tk(2, 3)
    assert T.domain_gap == (F(7, 12), F(17, 24))
    assert T.range_gap == (F(0), F(1, 8))
    assert len(T.branches) == 6  # essentially a 2k-branch exchange
    assert T.apply(F(1, 3)) == 0  # the isolated point
    assert T.apply(F(11, 12)) == F(7, 12)
    assert T.apply(F(7, 12)) == F(1, 4)  # closed ascending endpoint
    with pytest.raises(InGapError):
        T.apply(F(5, 8))
    with pytest.raises(BadParametersError):
        T.apply(F(3, 2))
    assert build_tk(3, 3).apply(F(1, 10)) == F(7, 10)
    with pytest.raises(BadParametersError):
        build_tk(2, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_branch_transcription_tiles_the_interval(q, k):
    T = build_tk(q, k)
    assert len(T.branches) == 2 * k
    # domain: branches + gap + the isolated point tile [0,1) without overlap
    marks = sorted(
        [(b.lo, b.hi, b.closed_lo, b.closed_hi) for b in T.branches]
        + [(T.domain_gap[0], T.domain_gap[1], False, False)]
    )
    assert marks[0][0] == 0 and marks[0][2]
    for (lo1, hi1, _, closed_hi), (lo2, hi2, closed_lo, _) in zip(marks, marks[1:]):
        assert hi1 == lo2
        if not (closed_hi or closed_lo):
            assert (hi1, 0) in [(s, 0) for s, _ in T.special]  # isolated point fills it
        assert not (closed_hi and closed_lo)
    assert marks[-1][1] == 1 and not marks[-1][3]
    # measure preservation: both gaps have length 1/q**k
    gap = T.domain_gap[1] - T.domain_gap[0]
    assert gap == F(1, q**k) == T.range_gap[1] - T.range_gap[0]
    assert sum(b.hi - b.lo for b in T.branches) == 1 - gap


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("k", [3, 4, 5])
def test_images_disjoint_except_one_sided_limit_values(q, k):
    T = build_tk(q, k)
    images = sorted(b.image() for b in T.branches)
    collisions = []
    for (lo1, hi1, _, chi1), (lo2, hi2, clo2, _) in zip(images, images[1:]):
        assert hi1 <= lo2
        if hi1 == lo2 and chi1 and clo2:
            collisions.append(hi1)
    # exactly the values 1/q**j, j = 1..k-1, carry both one-sided limits
    assert collisions == [F(1, q**j) for j in range(k - 1, 0, -1)]
    assert min(lo for lo, _, _, _ in images) == T.range_gap[1]


def test_injective_on_branch_interiors():
    T = build_tk(3, 4)
    rng = random.Random(11)
    seen = {}
    for _ in range(400):
        den = 3**5 * 5 * 11
        x = F(rng.randrange(0, den), den)
        if T.in_gap(x) or any(x == s for s, _ in T.special):
            continue
        if any(x == b.lo or x == b.hi for b in T.branches):
            continue
        y = T.apply(x)
        assert seen.setdefault(y, x) == x
    # the documented collisions: a closed ascending and a closed descending
    # endpoint share their image
    q, k = 2, 3
    Tk = build_tk(q, k)
    assert Tk.apply(F(1, 2)) == F(1, 2) == Tk.apply(F(5, 6))


def test_orbit_identities():
    # one step for the smallest case
    orbit = orbit_until(build_tk(2, 3), F(7, 12), F(1, 4))
    assert orbit == [F(7, 12), F(1, 4)]
    # three steps for q = 3, k = 3
    orbit = orbit_until(build_tk(3, 3), F(17, 45), F(1, 9))
    assert len(orbit) - 1 == 3 == fusion_orbit_length(3, 3)
    assert orbit[0] == F(17, 45) and orbit[-1] == F(1, 9)


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_first_passage_length_matches_formula(q, k):
    N = 2 * q - 1
    T = build_tk(q, k)
    start = F(2 * q**2 - 1, q ** (k - 1) * N)
    orbit = orbit_until(T, start, F(1, q ** (k - 1)))
    assert len(orbit) - 1 == fusion_orbit_length(q, k)
    # no earlier iterate touches the target (first passage), nor the gap
    assert all(x != orbit[-1] for x in orbit[:-1])


def test_orbit_error_signals():
    T = build_tk(2, 3)
    # 7/12 -> 1/4 -> 11/12 -> 7/12 cycles without entering the gap
    with pytest.raises(TargetNotReachedError):
        orbit_until(T, F(7, 12), F(1, 11), max_iter=40)
    # an orbit that walks into the gap raises the terminal signal:
    # 1/48 -> 33/48, which lies inside (7/12, 17/24)
    with pytest.raises(InGapError):
        orbit_until(T, F(1, 48), F(1, 11), max_iter=40)


def test_claims_small_grid():
    for q in (2, 3, 5, 8):
        assert fusion_ladder_base(q)
    for q, k in [(2, 3), (2, 4), (3, 5), (4, 3), (5, 4)]:
        assert fusion_ladder(q, k)


def test_final_step_reaches_the_gap_bottom():
    # the closing application for a larger q
    q = 7
    T = build_tk(q, 3)
    assert T.apply(F(q**3 - 1, q**2 * (2 * q - 1))) == F(1, q**2)


def test_section_map_matches_flow_first_return():
    q, k = 3, 4
    T = build_tk(q, k)
    tail = Tail.from_q(q)
    slope = F(q, 2 * q - 1)
    rng = random.Random(23)
    checked = 0
    while checked < 60:
        den = q ** (k + 1) * (2 * q - 1) * 7
        x = F(rng.randrange(1, den), den)
        if T.in_gap(x) or any(x == s for s, _ in T.special):
            continue
        if any(x == b.lo or x == b.hi for b in T.branches):
            continue
        assert T.apply(x) == first_return(tail, x, slope)
        checked += 1
