"""Koszul-type resolutions of stratum terms and the favorable resolution.

Two bracket complexes resolve a single term ``t = omega^(k,w)|Z_M``:

* the stratum bracket (top-dimensional terms, support J): degree s holds one
  summand per ``I <= J`` with ``#I = s``, orders ``M + sum_{i in I} N_i e_i``,
  weight ``k + (N^J)_p``; it receives ``t`` through ``h_{N^J}``;
* the lower bracket (everything else): degree s holds one summand per
  ``S <= {1..g}`` with ``#S = s``, orders N on S, ``M_l + N`` on the rest
  of the complement of the support, 0 elsewhere; weight ``k + (N,..,N)_p``;
  it receives ``t`` through ``h_{(N,..,N)}``.

:func:`favorable_resolution` alternates these constructions, one dimension
at a time, until every term is favorable.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import AdmissibilityError, AdmissibleComplex, AdmissibleHom, Block, ComplexMorphism
from .terms import Term, check_orders, is_favorable
from .homology import solve_mod_pm
from .weight_lattice import ExponentSearchExhausted, Params, Weight, make_favorable_exponents_multi, weight_shift_of

log = logging.getLogger(__name__)

STRATUM = "stratum"
LOWER = "lower"
IDENTITY = "identity"

WITHIN_J = "within-J"
WITHIN_LOWER = "within-lower"
J_TO_LOWER = "J-to-lower"


def cech_sign(I: Sequence[int], j: int) -> int:
    return -1 if sum(1 for i in I if i < j) % 2 else 1


@dataclass
class Bracket:
    """A resolution ``term -> [complex]`` with the subset labels of its summands."""

    term: Term
    kind: str
    labels: List[List[Tuple[int, ...]]]
    complex: AdmissibleComplex
    in_shift: Tuple[int, ...]
    exponents: Dict[int, int] = field(default_factory=dict)

    @property
    def in_map(self) -> Block:
        return {(0, 0): (1, self.in_shift)}

    def index(self, label: Tuple[int, ...]) -> Tuple[int, int]:
        s = len(label)
        return s, self.labels[s].index(label)


def _cech_complex(params: Params, w: int, labels, make_term) -> AdmissibleComplex:
    terms = [[make_term(I) for I in row] for row in labels]
    diffs = []
    q = params.modulus
    zero = (0,) * params.g
    for s in range(len(labels) - 1):
        pos = {I: r for r, I in enumerate(labels[s + 1])}
        blk = {}
        for c, I in enumerate(labels[s]):
            for j in sorted(set(x for lab in labels[s + 1] for x in lab) - set(I)):
                target = tuple(sorted(I + (j,)))
                if target in pos:
                    blk[(pos[target], c)] = (cech_sign(I, j) % q, zero)
        diffs.append(blk)
    return AdmissibleComplex(params, w, 0, terms, diffs)


def _check_exponent(params: Params, x: int, what: str) -> None:
    if x <= 0 or x % params.step:
        raise ValueError(f"{what}={x} is not a positive multiple of {params.step}")


def koszul_stratum_resolution(params: Params, t: Term, N_J: Dict[int, int]):
    """Resolve a term with support J by the stratum bracket.

    Returns ``(in_map, bracket_complex)``; use :func:`stratum_bracket` for
    the labelled form.
    """
    b = stratum_bracket(params, t, N_J)
    return b.in_map, b.complex


def stratum_bracket(params: Params, t: Term, N_J: Dict[int, int]) -> Bracket:
    check_orders(params, t.orders)
    J = sorted(t.support)
    if set(N_J) != set(J):
        raise ValueError(f"exponents given on {sorted(N_J)} but support is {J}")
    for j, x in N_J.items():
        _check_exponent(params, x, f"N_{j}")
    g = params.g
    NJ = tuple(N_J.get(i + 1, 0) for i in range(g))
    wt = t.weight.shifted(weight_shift_of(params, NJ))
    labels = [list(combinations(J, s)) for s in range(len(J) + 1)]

    def make(I):
        return Term(wt, tuple(t.orders[i] + (NJ[i] if (i + 1) in I else 0) for i in range(g)))

    cx = _cech_complex(params, t.w, labels, make)
    return Bracket(t, STRATUM if J else IDENTITY, labels, cx, NJ, dict(N_J))


def lower_dim_resolution(params: Params, t: Term, N: int):
    """Resolve a term by the lower bracket with uniform exponent N."""
    b = lower_bracket(params, t, N)
    return b.in_map, b.complex


def lower_bracket(params: Params, t: Term, N: int) -> Bracket:
    check_orders(params, t.orders)
    _check_exponent(params, N, "N")
    g = params.g
    Nvec = (N,) * g
    wt = t.weight.shifted(weight_shift_of(params, Nvec))
    labels = [list(combinations(range(1, g + 1), s)) for s in range(g + 1)]
    M = t.orders

    def make(S):
        orders = []
        for i in range(g):
            if (i + 1) in S:
                orders.append(N)
            elif M[i] > 0:
                orders.append(M[i] + N)
            else:
                orders.append(0)
        return Term(wt, tuple(orders))

    cx = _cech_complex(params, t.w, labels, make)
    return Bracket(t, LOWER, labels, cx, Nvec, {i + 1: N for i in range(g)})


def identity_bracket(params: Params, t: Term) -> Bracket:
    cx = AdmissibleComplex(params, t.w, 0, [[t]], [])
    return Bracket(t, IDENTITY, [[()]], cx, (0,) * params.g)


@dataclass
class ResolutionPlan:
    """Exponents for one dimension-drop step.

    ``by_support[J]`` is ``N^(J)`` (index -> exponent) or ``None`` when the
    whole support class is already favorable and passes through unchanged.
    """

    params: Params
    by_support: Dict[frozenset, Optional[Dict[int, int]]]
    N: int

    def validate(self) -> None:
        _check_exponent(self.params, self.N, "N")
        for J, NJ in self.by_support.items():
            if NJ is None:
                continue
            for j, x in NJ.items():
                _check_exponent(self.params, x, f"N^{sorted(J)}_{j}")
                if not self.N > x:
                    raise ValueError(f"N={self.N} must exceed N^{sorted(J)}_{j}={x}")

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "supports": [
                {"J": sorted(J), "exponents": None if NJ is None else {str(k): v for k, v in sorted(NJ.items())}}
                for J, NJ in sorted(self.by_support.items(), key=lambda kv: sorted(kv[0]))
            ],
        }


def bracket_for(params: Params, t: Term, plan: ResolutionPlan, r: int) -> Bracket:
    if t.dim == r:
        NJ = plan.by_support.get(frozenset(t.support))
        if NJ is None or not NJ:
            return identity_bracket(params, t)
        return stratum_bracket(params, t, NJ)
    if t.dim > r:
        raise ValueError(f"term of dimension {t.dim} above the plan dimension {r}")
    return lower_bracket(params, t, plan.N)


def induced_entries(params: Params, alpha: int, R: Sequence[int], src: Bracket, tgt: Bracket):
    """Entries ``(s, row, col, (alpha, shift))`` of the morphism between brackets
    induced by ``alpha h_R : src.term -> tgt.term``."""
    R = tuple(R)
    out = []
    if src.kind == LOWER and tgt.kind != LOWER:
        if alpha % params.modulus:
            raise AdmissibilityError("map from a lower-dimensional term into the top dimension")
        return out
    if tgt.kind == LOWER and src.kind != LOWER:
        # J-to-lower: exponent R + N - N^(J), same subset label
        N = tgt.in_shift
        shift = tuple(r + n - nj for r, n, nj in zip(R, N, src.in_shift))
        if any(x < 0 for x in shift):
            raise AdmissibilityError(f"plan too small: negative exponent {shift}")
        for s, row in enumerate(src.labels):
            for c, I in enumerate(row):
                rs, r = tgt.index(I)
                out.append((s, r, c, (alpha, shift)))
        return out
    # within one class: same labels on both sides
    if src.labels != tgt.labels:
        raise AdmissibilityError("induced map between brackets of different shapes")
    for s, row in enumerate(src.labels):
        for c, I in enumerate(row):
            out.append((s, c, c, (alpha, R)))
    return out


def connect_resolutions(params: Params, h: AdmissibleHom, plan: ResolutionPlan, kind: str,
                        r: Optional[int] = None) -> ComplexMorphism:
    """Morphism between the brackets of ``h.source`` and ``h.target``."""
    if r is None:
        r = h.source.dim
    src = bracket_for(params, h.source, plan, r)
    tgt = bracket_for(params, h.target, plan, r)
    kinds = {
        WITHIN_J: (src.kind != LOWER and tgt.kind != LOWER),
        WITHIN_LOWER: (src.kind == LOWER and tgt.kind == LOWER),
        J_TO_LOWER: (src.kind != LOWER and tgt.kind == LOWER),
    }
    if kind not in kinds:
        raise ValueError(f"unknown kind {kind!r}")
    if not kinds[kind]:
        raise ValueError(f"{kind} does not match brackets {src.kind} -> {tgt.kind}")
    maps: Dict[int, Block] = {}
    if h.alpha % params.modulus:
        for s, row, col, e in induced_entries(params, h.alpha, h.shift, src, tgt):
            maps.setdefault(s, {})[(row, col)] = e
    phi = ComplexMorphism(src.complex, tgt.complex, maps)
    phi.validate()
    return phi


def hom_nonzero(src: Sequence[int], tgt: Sequence[int], t: Sequence[int]) -> bool:
    """Whether multiplication by ``x^t`` is a well-defined nonzero map
    ``R[x]/(x^src) -> R[x]/(x^tgt)`` (zero orders mean no relation)."""
    for a, b, ti in zip(src, tgt, t):
        if ti < 0:
            return False
        if b > 0 and ti >= b:
            return False
        if a > 0 and (b == 0 or a + ti < b):
            return False
    return True


def _plan_pass(params, terms, L, budget):
    r = max(terms[n][j].dim for n, j in L)
    classes: Dict[frozenset, List[Term]] = {}
    for n, j in L:
        t = terms[n][j]
        if t.dim == r:
            classes.setdefault(frozenset(t.support), []).append(t)
    by_support: Dict[frozenset, Optional[Dict[int, int]]] = {}
    for J in sorted(classes, key=sorted):
        members = classes[J]
        if all(is_favorable(params, t, budget) for t in members):
            by_support[J] = None
        elif not J:
            # dimension 0: only theta twists are available
            raise ExponentSearchExhausted("dimension-0 term not favorable within budget; raise the budget")
        else:
            uniq = sorted({(t.weight, t.orders) for t in members})
            NJ, _ = make_favorable_exponents_multi(params, J, uniq, budget)
            by_support[J] = NJ
    top = max((x for NJ in by_support.values() if NJ for x in NJ.values()), default=0)
    N = params.step * (1 + top // params.step)
    plan = ResolutionPlan(params, by_support, N)
    plan.validate()
    return r, plan


def _compose(params, left, right, orders):
    """Realized composite ``left o right`` of summand-keyed maps."""
    q = params.modulus
    by_src: Dict[tuple, list] = {}
    for (y, z), e in left.items():
        by_src.setdefault(y, []).append((z, e))
    out: Dict[tuple, list] = {}
    for (x, y), (a1, t1) in right.items():
        for z, (a2, t2) in by_src.get(y, ()):
            t = tuple(u + v for u, v in zip(t1, t2))
            if not hom_nonzero(orders[x], orders[z], t):
                continue
            cur = out.get((x, z))
            if cur is None:
                out[(x, z)] = [(a1 * a2) % q, t]
            else:
                if cur[1] != t:
                    raise AdmissibilityError("inconsistent multigrading in composite")
                cur[0] = (cur[0] + a1 * a2) % q
    return {k: (a, t) for k, (a, t) in out.items() if a}


def _solve_correction(params, Q, src_keys, tgt_keys, k, d0, psi, orders):
    """Entries of ``D_k`` between two brackets with ``D_0 D_k + D_k D_0 = -Q``."""
    q = params.modulus
    unknowns = []
    for x in src_keys:
        for y in tgt_keys:
            if y[2] == x[2] - k + 1:
                t = tuple(b - a for a, b in zip(psi[x], psi[y]))
                if hom_nonzero(orders[x], orders[y], t):
                    unknowns.append((x, y))
    col = {u: i for i, u in enumerate(unknowns)}
    eqs = []
    for x in src_keys:
        for z in tgt_keys:
            if z[2] == x[2] - k + 2:
                t = tuple(b - a for a, b in zip(psi[x], psi[z]))
                if hom_nonzero(orders[x], orders[z], t):
                    eqs.append((x, z))
    leftover = set(Q) - set(eqs)
    if leftover:
        raise AdmissibilityError(f"obstruction outside the correction space: {sorted(leftover)[:2]}")
    if not eqs:
        return {}
    row = {e: i for i, e in enumerate(eqs)}
    A = [[0] * len(unknowns) for _ in eqs]
    b = [(-Q.get(e, (0,))[0]) % q for e in eqs]
    d0_out: Dict[tuple, list] = {}
    d0_in: Dict[tuple, list] = {}
    for (u, v), (a, _) in d0.items():
        d0_out.setdefault(u, []).append((v, a))
        d0_in.setdefault(v, []).append((u, a))
    for (x, y), i in col.items():
        # D_0 after D_k: x -> y -> z
        for z, a in d0_out.get(y, ()):
            if (x, z) in row:
                A[row[(x, z)]][i] = (A[row[(x, z)]][i] + a) % q
        # D_k after D_0: w -> x -> y, equation (w, y)
        for w, a in d0_in.get(x, ()):
            if (w, y) in row:
                A[row[(w, y)]][i] = (A[row[(w, y)]][i] + a) % q
    sol = solve_mod_pm(A, b, params.p, params.m)
    if sol is None:
        raise AdmissibilityError(f"no monomial homotopy solves the degree-{k} correction")
    out = {}
    for (x, y), i in col.items():
        if sol[i] % q:
            out[(x, y)] = (sol[i] % q, tuple(b_ - a_ for a_, b_ in zip(psi[x], psi[y])))
    return out


def _resolve_pass(params, terms, diffs, fav, psi_terms, aug, budget):
    """One dimension-drop pass: resolve the remainder and totalize.

    Every summand carries a multidegree ``psi``; an entry between summands
    X and Y is then forced to be ``alpha x^(psi_Y - psi_X)``.  The double
    complex built from the brackets only commutes up to homotopy: a
    composite that vanished by the zero rule need not vanish after the
    target orders grow.  The missing pieces are the correction components
    ``D_k`` (bracket degree ``s`` to ``s - k + 1``, k >= 2), each solved as
    a small linear system per pair of brackets.
    """
    q = params.modulus
    L = [(n, j) for n, row in enumerate(fav) for j, f in enumerate(row) if not f]
    r, plan = _plan_pass(params, terms, L, budget)
    in_L = set(L)
    brackets = {}
    for n, row in enumerate(terms):
        for j, t in enumerate(row):
            brackets[(n, j)] = bracket_for(params, t, plan, r) if (n, j) in in_L else identity_bracket(params, t)

    orders: Dict[tuple, Tuple[int, ...]] = {}
    psi: Dict[tuple, Tuple[int, ...]] = {}
    tmap: Dict[tuple, Term] = {}
    for (n, j), b in brackets.items():
        for s, row in enumerate(b.complex.terms):
            for c, t in enumerate(row):
                key = (n, j, s, c)
                tmap[key] = t
                orders[key] = t.orders
                psi[key] = tuple(a + d for a, d in zip(psi_terms[n][j], b.in_shift))

    D: Dict[int, Dict[tuple, tuple]] = {0: {}, 1: {}}
    for (n, j), b in brackets.items():
        sign = -1 if n % 2 else 1
        for s, blk in enumerate(b.complex.diffs):
            for (rr, cc), (a, sh) in blk.items():
                D[0][((n, j, s, cc), (n, j, s + 1, rr))] = ((sign * a) % q, sh)
    for n, blk in enumerate(diffs):
        for (row, col), (a, R) in blk.items():
            bs, bt = brackets[(n, col)], brackets[(n + 1, row)]
            if (n, col) not in in_L:
                if (n + 1, row) in in_L:
                    R = tuple(x + y for x, y in zip(R, bt.in_shift))
                entries = [(0, 0, 0, (a, tuple(R)))]
            elif (n + 1, row) not in in_L:
                raise AdmissibilityError("entry from the remainder back into the favorable part")
            else:
                entries = induced_entries(params, a, R, bs, bt)
            for s, rr, cc, (al, sh) in entries:
                x, y = (n, col, s, cc), (n + 1, row, s, rr)
                if al % q and hom_nonzero(orders[x], orders[y], sh):
                    D[1][(x, y)] = (al % q, sh)

    ncols = len(terms)
    by_bracket: Dict[tuple, list] = {}
    for key in tmap:
        by_bracket.setdefault(key[:2], []).append(key)
    for k in range(2, ncols + 1):
        Q: Dict[tuple, tuple] = {}
        for a in range(1, k):
            for key, (al, t) in _compose(params, D[a], D[k - a], orders).items():
                if key in Q:
                    al = (al + Q[key][0]) % q
                Q[key] = (al, t)
        Q = {key: v for key, v in Q.items() if v[0] % q}
        blocks: Dict[tuple, dict] = {}
        for (x, z), v in Q.items():
            blocks.setdefault((x[:2], z[:2]), {})[(x, z)] = v
        Dk = {}
        for (sb, tb), Qb in sorted(blocks.items()):
            if sb not in in_L or tb not in in_L:
                raise AdmissibilityError(f"nonzero obstruction between {sb} and {tb}")
            d0 = {e: v for e, v in D[0].items() if e[0][:2] in (sb, tb)}
            Dk.update(_solve_correction(params, Qb, by_bracket[sb], by_bracket[tb], k, d0, psi, orders))
        D[k] = Dk

    # layout: favorable part first in each degree, then bracket summands
    new_terms: Dict[int, List[Term]] = {}
    new_fav: Dict[int, List[bool]] = {}
    new_psi: Dict[int, list] = {}
    where: Dict[tuple, Tuple[int, int]] = {}
    order = sorted(tmap, key=lambda key: (key[:2] in in_L, key))
    for key in order:
        n, j, s, c = key
        d = n + s
        dst = new_terms.setdefault(d, [])
        where[key] = (d, len(dst))
        dst.append(tmap[key])
        new_psi.setdefault(d, []).append(psi[key])
        new_fav.setdefault(d, []).append((n, j) not in in_L or (s == 0 and tmap[key].dim == r))
    top = max(new_terms)
    new_diffs: List[Block] = [dict() for _ in range(top)]
    for Dk in D.values():
        for (x, y), (a, sh) in Dk.items():
            (d0_, c0), (d1, r1) = where[x], where[y]
            if d1 != d0_ + 1:
                raise AssertionError("entry does not raise degree by one")
            blk = new_diffs[d0_]
            if (r1, c0) in blk:
                a = (a + blk[(r1, c0)][0]) % q
            blk[(r1, c0)] = (a, sh)
    new_aug: Block = {}
    for (row, _), (a, s) in aug.items():
        b = brackets[(0, row)]
        _, idx = where[(0, row, 0, 0)]
        new_aug[(idx, 0)] = (a, tuple(x + y for x, y in zip(s, b.in_shift)))

    resolved = any(NJ for NJ in plan.by_support.values()) or any(terms[n][j].dim < r for n, j in L)
    rng = range(top + 1)
    info = {
        "dimension": r,
        "resolved": bool(resolved),
        "plan": plan.as_dict(),
        "corrections": sum(len(D[k]) for k in D if k >= 2),
    }
    return ([new_terms.get(d, []) for d in rng], new_diffs, [new_fav.get(d, []) for d in rng],
            [new_psi.get(d, []) for d in rng], new_aug, info)


def favorable_resolution(params: Params, wt: Weight, budget: Optional[int] = None,
                         verify_favorable: bool = True) -> AdmissibleComplex:
    """Build an admissible complex of favorable terms resolving ``(wt, M=0)``.

    ``metadata`` carries the starting term (``source``), the block from it
    into degree 0 (``augmentation``), the per-pass plans and the iteration
    count (passes that resolved at least one term).

    The running complex is lower-triangular with respect to the split
    (favorable part F, remainder L): no entry leaves L for F.  Each pass
    resolves L term by term, totalizes, and moves the new top-dimensional
    (favorable) summands into F.
    """
    g = params.g
    src = Term(wt, (0,) * g)
    terms: List[List[Term]] = [[src]]
    diffs: List[Block] = []
    fav: List[List[bool]] = [[False]]
    psi = [[(0,) * g]]
    aug: Block = {(0, 0): (1, (0,) * g)}
    history = []
    while any(not f for row in fav for f in row):
        terms, diffs, fav, psi, aug, info = _resolve_pass(params, terms, diffs, fav, psi, aug, budget)
        info["terms_after"] = sum(len(row) for row in terms)
        history.append(info)
        log.info("pass r=%d: N=%d, %d terms", info["dimension"], info["plan"]["N"], info["terms_after"])
        if len(history) > g + 1:
            raise AssertionError("dimension failed to drop")

    cx = AdmissibleComplex(params, wt.w, 0, terms, diffs)
    if verify_favorable:
        for n, j, t in cx.all_terms():
            if not is_favorable(params, t, budget):
                raise AssertionError(f"term {t} in degree {n} is not favorable")
    cx.metadata = {
        "iterations": sum(1 for h in history if h["resolved"]),
        "passes": len(history),
        "history": history,
        "degenerate_g1": params.degenerate,
        "source": src,
        "augmentation": aug,
    }
    return cx
