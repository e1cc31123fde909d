import pytest

from favres.complexes import (
    AdmissibilityError,
    AdmissibleComplex,
    AdmissibleHom,
    ComplexMorphism,
    DoubleComplex,
    check_d_squared,
    compose,
    cone,
    direct_sum,
    is_admissible,
    shift,
    split_by_dimension,
    total,
)
from favres.resolution import koszul_stratum_resolution
from favres.terms import Term
from favres.toy_model import realize_complex, verify_exactness
from favres.weight_lattice import Params, Weight, weight_shift_of

P = Params(3, 2, 1)
K = Weight((5, 5), 1)


def T(M, wt=K):
    return Term(wt, M)


def test_zero_hom_always_admissible():
    assert is_admissible(P, AdmissibleHom(T((2, 0)), T((0, 0), Weight((1, 9), 1)), 0, (0, 0)))


def test_restriction_is_admissible():
    assert is_admissible(P, AdmissibleHom(T((2, 0)), T((2, 4)), 1, (0, 0)))


def test_condition_b_failure():
    tgt = T((6, 0), K.shifted(weight_shift_of(P, (2, 0))))
    assert not is_admissible(P, AdmissibleHom(T((2, 0)), tgt, 1, (2, 0)))


def test_weight_condition():
    assert not is_admissible(P, AdmissibleHom(T((2, 0)), T((2, 2)), 1, (2, 0)))


def test_compose_adds_shifts():
    P3 = Params(3, 3, 1)
    k = Weight((1, 1, 1), 1)
    a = Term(k, (0, 0, 0))
    b = Term(k.shifted(weight_shift_of(P3, (2, 0, 0))), (0, 0, 0))
    c = Term(b.weight.shifted(weight_shift_of(P3, (4, 0, 0))), (0, 0, 0))
    h = compose(P3, AdmissibleHom(b, c, 1, (4, 0, 0)), AdmissibleHom(a, b, 1, (2, 0, 0)))
    assert h.shift == (6, 0, 0)
    assert is_admissible(P3, h)


def test_compose_zero_and_torsion():
    P9 = Params(3, 2, 2)
    a = Term(Weight((1, 1), 1), (0, 0))
    h = compose(P9, AdmissibleHom(a, a, 3, (0, 0)), AdmissibleHom(a, a, 3, (0, 0)))
    assert h.alpha == 0
    h0 = compose(P9, AdmissibleHom(a, a, 0, (0, 0)), AdmissibleHom(a, a, 5, (0, 0)))
    assert h0.alpha == 0


def _two_term():
    return AdmissibleComplex(P, 1, 0, [[T((0, 0))], [T((2, 0))]], [{(0, 0): (1, (0, 0))}])


def test_two_term_d_squared_clean():
    assert check_d_squared(_two_term()) == []


def test_koszul_d_squared_clean_and_sign_flip_detected():
    t = T((0, 0), Weight((1, 1), 1))
    _, cx = koszul_stratum_resolution(P, t, {1: 2, 2: 2})
    assert check_d_squared(cx) == []
    blk = dict(cx.diffs[1])
    key = next(iter(blk))
    a, s = blk[key]
    blk[key] = ((-a) % 3, s)
    bad = AdmissibleComplex(P, 1, 0, cx.terms, [cx.diffs[0], blk])
    assert check_d_squared(bad)


def test_zero_rule_entries_dropped():
    cx = AdmissibleComplex(P, 1, 0, [[T((2, 0))], [T((2, 0))]], [{(0, 0): (1, (2, 0))}])
    assert cx.diffs[0] == {}


def test_cone_of_identity_is_acyclic():
    c = _two_term()
    ident = ComplexMorphism(c, c, {0: {(0, 0): (1, (0, 0))}, 1: {(0, 0): (1, (0, 0))}})
    ident.validate()
    cc = cone(ident)
    assert check_d_squared(cc) == []
    assert verify_exactness(realize_complex(cc)).exact


def test_cone_of_zero_map():
    c = _two_term()
    D = AdmissibleComplex(P, 1, 0, [[T((0, 0))]], [])
    z = ComplexMorphism(c, D, {})
    cc = cone(z)
    assert cc.lo == -1
    assert [len(r) for r in cc.terms] == [1, 2]
    assert check_d_squared(cc) == []


def test_shift_and_direct_sum():
    c = _two_term()
    s = shift(c, 1)
    assert s.lo == -1 and s.diffs[0][(0, 0)][0] == 2
    ds = direct_sum(c, s)
    assert ds.lo == -1 and [len(r) for r in ds.terms] == [1, 2, 1]
    assert check_d_squared(ds) == []


def test_total_one_row():
    c = _two_term()
    A = DoubleComplex(P, 1, {(0, 0): [c.terms[0][0]], (1, 0): [c.terms[1][0]]},
                      horizontal={(0, 0): c.diffs[0]})
    tt = total(A)
    assert tt.terms == c.terms and tt.diffs == c.diffs


def test_split_single_top_term():
    c = AdmissibleComplex(P, 1, 0, [[T((0, 0))]], [])
    sp = split_by_dimension(c, 2)
    assert sp.eq is not None and sp.lt is None
    assert list(sp.by_support) == [frozenset({1, 2})]


def test_split_two_pieces_and_cone_recovers():
    c = _two_term()
    sp = split_by_dimension(c)
    assert sp.eq.num_terms() == 1 and sp.lt.num_terms() == 1
    rebuilt = shift(cone(sp.connecting), -1)
    assert check_d_squared(rebuilt) == []
    assert rebuilt.diffs == c.diffs
    assert rebuilt.terms == c.terms


def test_split_rejects_lower_to_top():
    c = AdmissibleComplex(P, 1, 0, [[T((2, 0))], [T((2, 2))]], [{(0, 0): (1, (0, 0))}])
    with pytest.raises(ValueError):
        split_by_dimension(c, 0)
    bad = AdmissibleComplex(P, 1, 0, [[T((2, 0))], [T((0, 0))]], [{(0, 0): (1, (0, 0))}])
    with pytest.raises(AdmissibilityError):
        split_by_dimension(bad)


def test_validate_rejects_inadmissible_entry():
    c = AdmissibleComplex(P, 1, 0, [[T((2, 0))], [T((4, 2))]], [{(0, 0): (1, (0, 0))}])
    with pytest.raises(AdmissibilityError):
        c.validate()


def test_mixed_w_rejected():
    with pytest.raises(ValueError):
        AdmissibleComplex(P, 1, 0, [[T((0, 0)), Term(Weight((4, 4), 0), (0, 0))]], [])
