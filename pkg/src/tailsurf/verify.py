"""The cross-checking suite behind ``tailsurf verify``.

Every check pits an exactly traced quantity against an independently
computed closed form (or against a structural requirement) and reports one
named PASS/FAIL line with a witness.  All comparisons are exact; there are
no tolerances anywhere.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import cylinders as cy
from .exact import format_rational
from .flow import SINGULAR_HIT, first_return, trace
from .iet import build_tk, fusion_ladder_base, fusion_ladder, fusion_orbit_length, orbit_until
from .surface import Tail


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: str


def _check(name: str, fn) -> Check:
    try:
        witness = fn()
        return Check(name, True, witness if isinstance(witness, str) else "ok")
    except Exception as exc:  # noqa: BLE001 - every failure becomes a FAIL line
        return Check(name, False, f"{type(exc).__name__}: {exc}")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise AssertionError(message)


def sample_section_points(q: int, k: int, count: int = 200) -> list[Fraction]:
    """Deterministic sample of first-return domain points: branch interiors
    of the section map, avoiding the gap, the special point, and the finitely
    many closed endpoints where the flow itself dies at the singularity."""
    T = build_tk(q, k)
    rng = random.Random(100_003 * q + k)
    den = q ** (k + 1) * (2 * q - 1) * 7
    ends = {b.lo for b in T.branches} | {b.hi for b in T.branches}
    ends |= {s for s, _ in T.special}
    points = []
    while len(points) < count:
        x = Fraction(rng.randrange(1, den), den)
        if T.in_gap(x) or x in ends:
            continue
        points.append(x)
    return points


def checks_for_q(q: int, k_max: int) -> list[Check]:
    tail = Tail.from_q(q)
    slope = cy.flow_slope(q)
    out = []

    def bsc1():
        chain = cy.build_bsc1(q)
        return "y_hits={" + ", ".join(format_rational(y) for y in chain.y_hits) + "}"

    out.append(_check(f"bsc1[q={q}]", bsc1))

    def top1():
        chain = cy.build_top1(q)
        end = chain.pieces[0].end
        _require(end == (Fraction(q + 1, q), Fraction(1, q)), f"top ends at {end}")
        return f"ends at ({format_rational(end[0])}, {format_rational(end[1])})"

    out.append(_check(f"top1[q={q}]", top1))

    def chains():
        built = cy._chain_sequence(q, k_max)
        for k in range(2, k_max + 1):
            _require(len(built[k - 1].pieces) == 2, f"bsc_{k} piece count")
        return f"bsc_1..bsc_{k_max} all match their closed-form section sets"

    out.append(_check(f"bsc[q={q},k<={k_max}]", chains))

    def iet_claims():
        _require(fusion_ladder_base(q), "three-square identity failed")
        for k in range(3, k_max + 1):
            _require(fusion_ladder(q, k), f"k={k} identity failed")
            T = build_tk(q, k)
            start = Fraction(2 * q**2 - 1, q ** (k - 1) * (2 * q - 1))
            orbit = orbit_until(T, start, Fraction(1, q ** (k - 1)))
            _require(
                len(orbit) - 1 == fusion_orbit_length(q, k),
                f"orbit length {len(orbit)-1} at k={k}",
            )
        return f"iterate identities hold for k=3..{k_max}"

    out.append(_check(f"iet[q={q}]", iet_claims))

    def section_consistency():
        total = 0
        for k in range(3, min(k_max, 5) + 1):
            T = build_tk(q, k)
            for x in sample_section_points(q, k):
                _require(
                    T.apply(x) == first_return(tail, x, slope),
                    f"mismatch at x={x}, k={k}",
                )
                total += 1
        return f"{total} sampled first returns agree with the section map"

    out.append(_check(f"section[q={q}]", section_consistency))

    def fill():
        for k in range(1, k_max + 1):
            cy.fill_in(q, k)
        return f"rotation fill-in matches S1 to S2 for k=1..{k_max}"

    out.append(_check(f"fill_in[q={q}]", fill))

    def decomposition():
        dec = cy.decompose(q, k_max)
        ok, moduli = cy.no_parabolic(dec)
        _require(ok, f"moduli not strictly growing: {moduli}")
        covered = format_rational(dec.covered_area)
        tail_sum = format_rational(cy.area_sum_tail(q, k_max))
        return f"covered_area={covered}, exact tail={tail_sum}, moduli strictly increasing"

    out.append(_check(f"decompose[q={q},K={k_max}]", decomposition))

    def skew_sum():
        partial = sum(
            (cy.section_hit_count(q, k) * cy.skew_width(q, k) for k in range(1, k_max + 1)),
            Fraction(0),
        )
        tail_sum = cy.skew_sum_tail(q, k_max)
        _require(partial + tail_sum == 1, f"{partial} + {tail_sum} != 1")
        return (
            f"sum={format_rational(partial)} + tail={format_rational(tail_sum)} = 1/1"
        )

    out.append(_check(f"skew_sum[q={q}]", skew_sum))

    def axes():
        horiz, vert = cy.build_axis_decompositions(q, k_max)
        _require(all(m == 1 for m in vert.moduli()), "vertical moduli not all 1")
        _require(not cy.no_parabolic(vert)[0], "vertical decomposition must admit a twist")
        _require(cy.no_parabolic(horiz)[0], "horizontal moduli must grow")
        return "vertical moduli all 1/1; horizontal moduli strictly growing"

    out.append(_check(f"axes[q={q}]", axes))

    def obstruction():
        rep = cy.orthogonal_obstruction(q)
        _require(rep["spine_longer"] == (q == 2), f"unexpected comparison: {rep}")
        side = "longer" if rep["spine_longer"] else "shorter"
        return (
            f"spine^2={format_rational(rep['spine_length_squared'])} is {side} than "
            f"bsc1^2={format_rational(rep['bsc1_length_squared'])}"
        )

    out.append(_check(f"obstruction[q={q}]", obstruction))
    return out


def global_checks() -> list[Check]:
    out = []

    def negative_control():
        t = trace(Tail(Fraction(2, 3)), (Fraction(1), Fraction(0)), Fraction(3, 4))
        _require(t.status == SINGULAR_HIT, f"status {t.status}")
        # The unit-ratio wrapping pattern must break: the hit is not (1, 1).
        _require(t.end != (Fraction(1), Fraction(1)), "pattern unexpectedly persisted")
        x, y = t.end
        return f"r=2/3 flow dies at ({format_rational(x)}, {format_rational(y)})"

    out.append(_check("negative_control[r=2/3]", negative_control))
    return out


def run_checks(q_values: list[int], k_max: int, parallel: bool = False) -> list[Check]:
    if parallel and len(q_values) > 1:
        with ThreadPoolExecutor(max_workers=len(q_values)) as pool:
            per_q = list(pool.map(lambda q: checks_for_q(q, k_max), q_values))
    else:
        per_q = [checks_for_q(q, k_max) for q in q_values]
    checks: list[Check] = []
    for group in per_q:
        checks.extend(group)
    checks.extend(global_checks())
    return checks


def report(checks: list[Check]) -> str:
    """Fixed-order, machine-greppable PASS/FAIL lines plus a summary."""
    lines = [
        f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.witness}" for c in checks
    ]
    failures = sum(1 for c in checks if not c.passed)
    if failures == 0:
        lines.append(f"ALL PASS ({len(checks)} checks)")
    else:
        lines.append(f"FAILURES ({failures} of {len(checks)} checks)")
    return "\n".join(lines) + "\n"


def parse_q_range(text: str) -> list[int]:
    """\"2..5\" or a single \"3\"."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        values = list(range(int(lo), int(hi) + 1))
    else:
        values = [int(text)]
    if not values or min(values) < 2:
        raise ValueError(f"q range must start at 2 or above, got {text!r}")
    return values
