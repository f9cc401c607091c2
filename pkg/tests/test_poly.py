import json
from fractions import Fraction

import pytest
import sympy

from relroots.poly import Poly


def test_trims_trailing_zeros():
    assert Poly([1, 2, 0, 0]).coeffs == (1, 2)
    assert Poly([0, 0]).is_zero()
    assert Poly().degree == -1


def test_arithmetic_matches_sympy():
    q = sympy.symbols("q")
    a = Poly([3, -1, 4, 1])
    b = Poly([-2, 0, 5])
    sa = sympy.Poly([1, 4, -1, 3], q)
    sb = sympy.Poly([5, 0, -2], q)
    assert list(reversed((a * b).coeffs)) == (sa * sb).all_coeffs()
    assert list(reversed((a + b).coeffs)) == (sa + sb).all_coeffs()
    assert list(reversed((a - b).coeffs)) == (sa - sb).all_coeffs()
    assert list(reversed((a ** 3).coeffs)) == (sa ** 3).all_coeffs()


def test_one_minus_q_power():
    assert Poly.one_minus_q(3).coeffs == (1, -3, 3, -1)
    assert Poly.one_minus_q(0) == Poly.one()


def test_exact_division():
    P = Poly.one_minus_q(4) * Poly([1, 3])
    quot, rem = P.divmod(Poly.one_minus_q(3))
    assert rem.is_zero()
    assert quot == Poly.one_minus_q(1) * Poly([1, 3])
    quot, rem = Poly([1, 0, 1]).divmod(Poly([1, 1]))
    assert quot * Poly([1, 1]) + rem == Poly([1, 0, 1])
    assert rem == Poly([2])


def test_division_needs_unit_leading_coefficient():
    with pytest.raises(ValueError):
        Poly([1, 1]).divmod(Poly([1, 2]))
    with pytest.raises(ZeroDivisionError):
        Poly([1]).divmod(Poly())


@pytest.mark.parametrize("x", [Fraction(-1, 3), Fraction(7, 5), Fraction(0), Fraction(1), 2])
def test_eval_exact_matches_fraction_horner(x):
    P = Poly([5, -7, 0, 3, 11, -2])
    assert P.eval_exact(x) == P(Fraction(x))


def test_eval_exact_cycle_root():
    rel_c4 = Poly.one_minus_q(3) * Poly([1, 3])
    assert rel_c4.eval_exact(Fraction(-1, 3)) == 0


def test_derivative():
    assert Poly([1, 2, 3]).derivative() == Poly([2, 6])


def test_json_round_trip_keeps_big_integers():
    P = Poly([10 ** 30, -1, 3])
    blob = json.dumps(P.to_json())
    assert json.loads(blob) == {"coeffs": [str(10 ** 30), "-1", "3"]}
    assert Poly.from_json(json.loads(blob)) == P


def test_str():
    assert str(Poly([1, -3, 0, 1])) == "1 - 3*q + q^3"
    assert str(Poly([0, -1])) == "-q"
    assert str(Poly()) == "0"


def test_hashable_and_immutable():
    P = Poly([1, 2])
    assert hash(P) == hash(Poly([1, 2, 0]))
    with pytest.raises(AttributeError):
        P.coeffs = (3,)
