import random
from fractions import Fraction as F

import pytest

from tailsurf.exact import (
    format_point,
    format_rational,
    length_squared,
    mod_one,
    parse_point,
    parse_rational,
    rat,
)


def test_mod_one_examples():
    assert mod_one(F(7, 3)) == F(1, 3)
    assert mod_one(F(0)) == 0
    # the wrap value that closes the first chain's rotation orbit at q=2
    q = 2
    assert mod_one(F(1 + (2 * q - 2) * q, 2 * q - 1)) == F(q, 2 * q - 1)
    assert mod_one(F(5, 3)) == F(2, 3)
    assert mod_one(F(-1, 3)) == F(2, 3)


def test_mod_one_additive():
    rng = random.Random(42)
    for _ in range(300):
        a = F(rng.randrange(-500, 500), rng.randrange(1, 97))
        b = F(rng.randrange(-500, 500), rng.randrange(1, 97))
        assert mod_one(a + b) == mod_one(mod_one(a) + mod_one(b))
        assert 0 <= mod_one(a) < 1


def test_length_squared():
    assert length_squared(F(3), F(2)) == 13
    assert length_squared(F(0), F(0)) == 0
    assert length_squared(F(-3, 2), F(1, 2)) == F(10, 4)


def test_reduction_canonical():
    rng = random.Random(7)
    for _ in range(200):
        p, q = rng.randrange(-300, 300), rng.randrange(1, 120)
        r, s = rng.randrange(-300, 300), rng.randrange(1, 120)
        assert (F(p, q) == F(r, s)) == (p * s == r * q)
    x = F(42, 98)
    assert (x.numerator, x.denominator) == (3, 7)
    assert F(3, -7).denominator > 0


def test_wire_format():
    assert format_rational(F(5)) == "5/1"
    assert format_rational(F(-3, 7)) == "-3/7"
    assert parse_rational("-3/7") == F(-3, 7)
    assert parse_rational("5") == F(5)
    assert parse_rational(format_rational(F(22, 8))) == F(11, 4)
    assert format_point((F(1), F(2, 3))) == ["1/1", "2/3"]
    assert parse_point("1/1,2/3") == (F(1), F(2, 3))
    with pytest.raises(ValueError):
        parse_point("1/1")


def test_rat_constructor():
    assert rat(3, 7) == F(3, 7)
    assert rat("3/7") == F(3, 7)
    assert rat(F(1, 2)) == F(1, 2)
