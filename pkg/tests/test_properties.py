"""Randomized structural properties (hypothesis drives the seeds)."""

import itertools
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from favres.complexes import check_d_squared, compose, is_admissible, is_zero_map
from favres.resolution import koszul_stratum_resolution, lower_dim_resolution
from favres.toy_model import ToyComplex, realize_term, strand, verify_quasi_isomorphism, realize_complex
from generators import random_hom_chain, random_params, random_stratum_exponents, random_term

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def realized_composite_matches(P, h, f):
    """Strand matrices of x^R2 . x^R1 equal those of x^(R1+R2)."""
    fh = compose(P, f, h)
    q = P.modulus
    mods = [realize_term(t) for t in (h.source, h.target, f.target)]
    two = ToyComplex(P.p, P.m, 0, [[x] for x in mods],
                     [{(0, 0): (h.alpha, h.shift)}, {(0, 0): (f.alpha, f.shift)}])
    box = [min(b, 12) for b in two.required_box()]
    if is_zero_map(P, fh.alpha, fh.shift, fh.target.orders):
        # killed composite: the factorization vanishes on every strand
        for a in itertools.product(*(range(b) for b in box)):
            s2 = strand(two, a)
            if all(s2.ranks) and s2.matrices[1][0][0] * s2.matrices[0][0][0] % q:
                return False
        return True
    one = ToyComplex(P.p, P.m, 0, [[mods[0]], [mods[2]]], [{(0, 0): (fh.alpha, fh.shift)}])
    for a in itertools.product(*(range(b) for b in box)):
        s2, s1 = strand(two, a), strand(one, a)
        if (s2.ranks[0], s2.ranks[2]) != tuple(s1.ranks):
            return False
        if s1.ranks != [1, 1]:
            continue
        via = (s2.matrices[1][0][0] * s2.matrices[0][0][0]) % q if s2.ranks[1] else 0
        if via != s1.matrices[0][0][0]:
            return False
    return True


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_compose_closure_and_additivity(seed):
    rng = random.Random(seed)
    P = random_params(rng)
    h, f = random_hom_chain(rng, P)
    assert is_admissible(P, h) and is_admissible(P, f)
    fh = compose(P, f, h)
    assert is_admissible(P, fh)
    assert fh.shift == tuple(x + y for x, y in zip(h.shift, f.shift))
    assert realized_composite_matches(P, h, f)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_brackets_are_resolutions(seed):
    rng = random.Random(seed)
    P = random_params(rng, gs=(1, 2, 3))
    t = random_term(rng, P)
    in_map, cx = koszul_stratum_resolution(P, t, random_stratum_exponents(rng, P, t))
    assert check_d_squared(cx) == []
    assert verify_quasi_isomorphism(realize_term(t), in_map, realize_complex(cx)).exact
    in_map, cx = lower_dim_resolution(P, t, P.step * rng.randint(1, 3))
    assert check_d_squared(cx) == []
    assert all(s.w == t.w for row in cx.terms for s in row)
    assert verify_quasi_isomorphism(realize_term(t), in_map, realize_complex(cx)).exact
