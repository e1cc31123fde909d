"""Monomial-quotient realization and strandwise exactness checks.

A term with orders M becomes ``R[x_1..x_g] / (x_i^{M_i} : M_i > 0)`` over
``R = Z/p^m``; an entry ``alpha h_R`` becomes multiplication by
``alpha x^R``.  Every map is multigraded, so a complex of such modules
splits into strands, one per multidegree ``a``, each a complex of free
modules of rank at most one per summand.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import AdmissibleComplex, Block
from .homology import homology_over_Zpm
from .terms import Term

Bounds = Tuple[Optional[int], ...]


class IllDefinedMap(ValueError):
    """x^R does not carry the source ideal into the target ideal."""


class BoxTooSmall(ValueError):
    """The verification box does not reach every critical multidegree."""


@dataclass(frozen=True)
class MonomialQuotient:
    bounds: Bounds

    def contains(self, a: Sequence[int]) -> bool:
        return all(b is None or ai < b for ai, b in zip(a, self.bounds))

    def __str__(self):
        gens = [f"x{i + 1}^{b}" for i, b in enumerate(self.bounds) if b is not None]
        return "R[x]/(" + ", ".join(gens) + ")" if gens else "R[x]"


def _kills(tgt: MonomialQuotient, R: Sequence[int]) -> bool:
    return any(b is not None and r >= b for r, b in zip(R, tgt.bounds))


def _grading_offsets(modules, live) -> List[List[Tuple[int, ...]]]:
    """Per-summand multidegree twists making every live entry homogeneous.

    An entry ``x^R`` from summand c to summand r forces
    ``offset_c = offset_r + R``; offsets are normalized to be non-negative.
    """
    g = next((len(mod.bounds) for row in modules for mod in row), 0)
    adj: Dict[tuple, list] = {}
    for i, r, c, R in live:
        u, v = (i, c), (i + 1, r)
        adj.setdefault(u, []).append((v, R))
        adj.setdefault(v, []).append((u, tuple(-x for x in R)))
    # psi_v = psi_u + R along each entry
    psi: Dict[tuple, Tuple[int, ...]] = {}
    for i, row in enumerate(modules):
        for j in range(len(row)):
            if (i, j) in psi:
                continue
            psi[(i, j)] = (0,) * g
            stack = [(i, j)]
            while stack:
                u = stack.pop()
                for v, R in adj.get(u, ()):
                    want = tuple(a + b for a, b in zip(psi[u], R))
                    if v not in psi:
                        psi[v] = want
                        stack.append(v)
                    elif psi[v] != want:
                        raise IllDefinedMap(f"no consistent multigrading at degree index {v[0]}")
    top = tuple(max((ps[k] for ps in psi.values()), default=0) for k in range(g))
    return [[tuple(t - x for t, x in zip(top, psi[(i, j)])) for j in range(len(row))]
            for i, row in enumerate(modules)]


def realize_term(t: Term) -> MonomialQuotient:
    return MonomialQuotient(tuple(M if M > 0 else None for M in t.orders))


def check_monomial_map(src: MonomialQuotient, tgt: MonomialQuotient, R: Sequence[int]) -> None:
    """Raise unless ``x^R * (source ideal)`` lies in the target ideal."""
    if any(b is not None and r >= b for r, b in zip(R, tgt.bounds)):
        return  # the map is zero
    for i, (A, B, r) in enumerate(zip(src.bounds, tgt.bounds, R)):
        if A is None:
            continue
        if B is None or A + r < B:
            raise IllDefinedMap(f"axis {i + 1}: x^{tuple(R)} maps (x^{A}) outside {tgt}")


@dataclass
class ToyComplex:
    """Monomial complex: ``modules[i]`` in degree ``lo + i``; ``maps[i]``
    goes from degree ``lo + i`` to ``lo + i + 1`` with entries ``(alpha, R)``."""

    p: int
    m: int
    lo: int
    modules: List[List[MonomialQuotient]]
    maps: List[Block] = field(default_factory=list)

    def __post_init__(self):
        while len(self.maps) < max(0, len(self.modules) - 1):
            self.maps.append({})
        live = []
        for i, blk in enumerate(self.maps):
            for (r, c), (a, R) in blk.items():
                check_monomial_map(self.modules[i][c], self.modules[i + 1][r], R)
                if a % (self.p**self.m) and not _kills(self.modules[i + 1][r], R):
                    live.append((i, r, c, tuple(R)))
        self.offsets = _grading_offsets(self.modules, live)

    @property
    def g(self) -> int:
        for row in self.modules:
            for mod in row:
                return len(mod.bounds)
        return 0

    @property
    def hi(self) -> int:
        return self.lo + len(self.modules) - 1

    def critical_values(self) -> List[List[int]]:
        """Per axis, every value where some membership predicate can flip."""
        g = self.g
        crit = [{0} for _ in range(g)]
        for row, offs in zip(self.modules, self.offsets):
            for mod, off in zip(row, offs):
                for i, b in enumerate(mod.bounds):
                    crit[i].add(off[i])
                    if b is not None:
                        crit[i].add(off[i] + b)
        return [sorted(s) for s in crit]

    def includes(self, i: int, j: int, a: Sequence[int]) -> bool:
        """Whether summand j of degree index i is nonzero in multidegree a."""
        off = self.offsets[i][j]
        b = tuple(x - o for x, o in zip(a, off))
        return all(x >= 0 for x in b) and self.modules[i][j].contains(b)

    def required_box(self) -> Tuple[int, ...]:
        return tuple(max(c) + 1 for c in self.critical_values())


def realize_complex(c: AdmissibleComplex) -> ToyComplex:
    modules = [[realize_term(t) for t in row] for row in c.terms]
    try:
        return ToyComplex(c.params.p, c.params.m, c.lo, modules, [dict(b) for b in c.diffs])
    except IllDefinedMap as exc:
        raise IllDefinedMap(f"internal consistency failure: {exc}") from None


def augment(tc: ToyComplex, source: Sequence[MonomialQuotient], in_map: Block) -> ToyComplex:
    """Prepend ``source`` in degree ``lo - 1`` mapped into degree ``lo``."""
    return ToyComplex(tc.p, tc.m, tc.lo - 1, [list(source)] + tc.modules, [dict(in_map)] + tc.maps)


@dataclass
class Strand:
    multidegree: Tuple[int, ...]
    lo: int
    support: List[List[int]]  # contributing summand indices per degree
    matrices: List[List[List[int]]]  # matrices[i]: degree lo+i -> lo+i+1

    @property
    def ranks(self) -> List[int]:
        return [len(s) for s in self.support]


def strand(tc: ToyComplex, a: Sequence[int]) -> Strand:
    """Multidegree-``a`` part: one copy of R per summand nonzero there."""
    if any(x < 0 for x in a):
        raise ValueError("multidegree must be non-negative")
    a = tuple(a)
    q = tc.p**tc.m
    sup = [[j for j in range(len(row)) if tc.includes(i, j, a)] for i, row in enumerate(tc.modules)]
    pos = [{j: k for k, j in enumerate(s)} for s in sup]
    mats = []
    for i, blk in enumerate(tc.maps):
        rows, cols = len(sup[i + 1]), len(sup[i])
        mat = [[0] * cols for _ in range(rows)]
        for (r, c), (alpha, R) in blk.items():
            if r not in pos[i + 1] or c not in pos[i] or _kills(tc.modules[i + 1][r], R):
                continue
            mat[pos[i + 1][r]][pos[i][c]] = (mat[pos[i + 1][r]][pos[i][c]] + alpha) % q
        mats.append(mat)
    return Strand(a, tc.lo, sup, mats)


def strand_homology(tc: ToyComplex, a: Sequence[int]) -> Dict[int, List[int]]:
    """Nonzero homology of the strand at ``a``: degree -> elementary divisors."""
    s = strand(tc, a)
    return _homology_of(s, tc.p, tc.m)


def _homology_of(s: Strand, p: int, m: int) -> Dict[int, List[int]]:
    out = {}
    ranks = s.ranks
    for i, r in enumerate(ranks):
        if r == 0:
            continue
        d_in = s.matrices[i - 1] if i > 0 else [[] for _ in range(r)]
        d_out = s.matrices[i] if i < len(s.matrices) else []
        if i > 0 and ranks[i - 1] == 0:
            d_in = [[] for _ in range(r)]
        h = homology_over_Zpm(d_in, d_out, p, m, n_mid=r, check=False)
        if h:
            out[s.lo + i] = h
    return out


@dataclass
class VerificationReport:
    exact: bool
    box: Tuple[int, ...]
    required_box: Tuple[int, ...]
    cells: int
    multidegrees: int
    failures: List[dict]
    homology: Dict[int, int] = field(default_factory=dict)  # degree -> failing multidegrees

    def as_dict(self) -> dict:
        return {
            "exact": self.exact,
            "box": list(self.box),
            "required_box": list(self.required_box),
            "cells": self.cells,
            "multidegrees": self.multidegrees,
            "failures": self.failures,
        }


def _cells(crit: List[List[int]], box: Sequence[int]):
    """Per axis: list of (start, stop) intervals on which predicates are constant."""
    out = []
    for cs, B in zip(crit, box):
        pts = [c for c in cs if c < B]
        axis = []
        for k, start in enumerate(pts):
            stop = pts[k + 1] if k + 1 < len(pts) else B
            axis.append((start, stop))
        out.append(axis)
    return out


def _scan(tc: ToyComplex, items):
    """Homology per work item ``(multidegree, weight, cell_upper)``."""
    out = []
    for a, count, upper in items:
        h = strand_homology(tc, a)
        if h:
            out.append((a, count, upper, h))
    return out


def _run_scan(tc: ToyComplex, items, jobs: int):
    if jobs <= 1 or len(items) < 64:
        return _scan(tc, items)
    from concurrent.futures import ProcessPoolExecutor

    size = -(-len(items) // (4 * jobs))
    chunks = [items[i:i + size] for i in range(0, len(items), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_scan, [tc] * len(chunks), chunks))
    return [x for part in parts for x in part]


def verify_exactness(tc: ToyComplex, box: Optional[Sequence[int]] = None, exhaustive: bool = False,
                     max_failures: int = 50, jobs: int = 1) -> VerificationReport:
    """Check every strand in ``[0, box)`` for vanishing homology.

    Strands whose multidegrees lie in the same cell of the critical-value
    grid have identical matrices, so by default one representative per cell
    is computed.  ``exhaustive=True`` recomputes every multidegree.
    ``jobs > 1`` spreads the strands over worker processes; the report does
    not depend on it.
    """
    g = tc.g
    need = tc.required_box()
    if box is None:
        box = need
    box = tuple(int(b) for b in box)
    if len(box) != g:
        raise ValueError(f"box has {len(box)} axes, expected {g}")
    short = [i + 1 for i in range(g) if box[i] < need[i]]
    if short:
        raise BoxTooSmall(f"box {box} below required {need} on axes {short}")
    n_md = 1
    for B in box:
        n_md *= B
    if exhaustive:
        items = [(a, 1, None) for a in itertools.product(*(range(B) for B in box))]
    else:
        items = []
        for cell in itertools.product(*_cells(tc.critical_values(), box)):
            count = 1
            for start, stop in cell:
                count *= stop - start
            items.append((tuple(start for start, _ in cell), count, [stop for _, stop in cell]))
    failures = []
    per_degree: Dict[int, int] = {}
    for a, count, upper, h in _run_scan(tc, items, jobs):
        for deg, divs in sorted(h.items()):
            per_degree[deg] = per_degree.get(deg, 0) + count
            if len(failures) < max_failures:
                rec = {"multidegree": list(a), "degree": deg, "homology": divs}
                if upper is not None:
                    rec["cell_upper"] = upper
                failures.append(rec)
    return VerificationReport(not per_degree, box, need, len(items), n_md, failures, per_degree)


def verify_quasi_isomorphism(source: MonomialQuotient, in_map: Block, bracket: ToyComplex,
                             box: Optional[Sequence[int]] = None, exhaustive: bool = False,
                             jobs: int = 1) -> VerificationReport:
    """The augmented complex ``source -> bracket`` must be exact on every strand.

    Exactness of the cone-like augmentation is the same as the in-map
    inducing an isomorphism from the source onto the bracket's homology,
    which is then concentrated in degree 0.
    """
    if bracket.lo != 0:
        raise ValueError("bracket must start in degree 0")
    return verify_exactness(augment(bracket, [source], in_map), box, exhaustive, jobs=jobs)


def homology_profile(tc: ToyComplex, box: Optional[Sequence[int]] = None) -> Dict[int, int]:
    """Degree -> number of multidegrees in the box with nonzero homology."""
    box = tuple(box) if box is not None else tc.required_box()
    crit = tc.critical_values()
    out: Dict[int, int] = {}
    for cell in itertools.product(*_cells(crit, box)):
        a = tuple(start for start, _ in cell)
        h = strand_homology(tc, a)
        count = 1
        for start, stop in cell:
            count *= stop - start
        for deg in h:
            out[deg] = out.get(deg, 0) + count
    return out
