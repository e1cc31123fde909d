import pytest

from favres.terms import Term, check_orders, dimension, favorable_witness, is_favorable
from favres.weight_lattice import Params, Weight, star_condition, theta_shift_of


def test_check_orders():
    P = Params(3, 3, 2)  # step 6
    assert check_orders(P, (0, 6, 12)) == (0, 6, 12)
    with pytest.raises(ValueError):
        check_orders(P, (0, 3, 0))
    with pytest.raises(ValueError):
        check_orders(P, (0, 6))
    with pytest.raises(ValueError):
        check_orders(P, (-6, 0, 0))


def test_dimension_examples():
    assert dimension((0, 4, 0)) == 2
    assert dimension((0,) * 5) == 5
    assert dimension((2, 2)) == 0


def test_term_requires_parity():
    with pytest.raises(ValueError):
        Term(Weight((1, 2), 1), (0, 0))
    t = Term(Weight((1, 3), 1), (0, 2))
    assert t.support == frozenset({1})
    assert t.dim == 1
    assert t.as_dict() == {"k": [1, 3], "M": [0, 2]}


def test_favorable_dim0_has_witness():
    P = Params(3, 2, 1, delta_threshold=5)
    t = Term(Weight((1, 1), 1), (2, 4))
    T = favorable_witness(P, t)
    assert T is not None
    assert all(Ti > Mi + P.step for Ti, Mi in zip(T, t.orders))
    wt = t.weight.shifted(theta_shift_of(P, T))
    assert star_condition(P, wt, t.orders, [0, 1])


def test_favorable_regular_full_support():
    P = Params(3, 2, 1, delta_threshold=5)
    assert is_favorable(P, Term(Weight((5, 7), 1), (0, 0)))
    assert favorable_witness(P, Term(Weight((5, 7), 1), (0, 0))) == (0, 0)


def test_unfavorable_full_support_nonregular():
    P = Params(3, 3, 1, delta_threshold=2)
    assert not is_favorable(P, Term(Weight((1, 1, 1), 1), (0, 0, 0)))


def test_witness_is_minimal_uniform():
    P = Params(2, 2, 1, delta_threshold=6)
    t = Term(Weight((-9, 1), 1), (2, 0))
    T = favorable_witness(P, t)
    assert T is not None and T[1] == 0
    smaller = (T[0] - P.step, 0)
    if smaller[0] > t.orders[0] + P.step:
        wt = t.weight.shifted(theta_shift_of(P, smaller))
        assert not star_condition(P, wt, t.orders, [0])
