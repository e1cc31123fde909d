"""Admissible homomorphisms and bounded complexes of terms.

A differential or morphism block is a sparse matrix: a dict mapping
``(row, col)`` to an ``(alpha, shift)`` pair, where ``row`` indexes the
target summand and ``col`` the source summand.  ``alpha`` lives in Z/p^m
and ``shift`` is the exponent tuple R of the Hasse monomial h_R.

Sign conventions:

* Cech differential from subset I to I + {j}: ``(-1)**#{i in I : i < j}``.
* total complex: ``d = d_h + (-1)**i d_v`` on the summand in column ``i``.
* ``cone(phi)`` in degree n is ``D^n + C^(n+1)`` with ``[[d_D, phi], [0, -d_C]]``.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .terms import Term
from .weight_lattice import Params, weight_shift_of

Entry = Tuple[int, Tuple[int, ...]]
Block = Dict[Tuple[int, int], Entry]


class AdmissibilityError(ValueError):
    """A map that should be admissible is not."""


@dataclass(frozen=True)
class AdmissibleHom:
    source: Term
    target: Term
    alpha: int
    shift: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "shift", tuple(int(x) for x in self.shift))


def is_zero_map(params: Params, alpha: int, shift, target_orders) -> bool:
    """Zero coefficient, or h_R already vanishes on the target stratum."""
    if alpha % params.modulus == 0:
        return True
    return any(M > 0 and r >= M for r, M in zip(shift, target_orders))


def admissibility_failures(params: Params, h: AdmissibleHom) -> List[str]:
    """Reasons ``h`` is not admissible; empty when it is."""
    if h.alpha % params.modulus == 0:
        return []
    out = []
    s, t = h.source, h.target
    if s.w != t.w:
        out.append("normalization factors differ")
    if any(r < 0 or r % params.step for r in h.shift):
        out.append(f"shift {h.shift} is not in step*Z>=0")
    expected = tuple(a + b for a, b in zip(s.k, weight_shift_of(params, h.shift)))
    if expected != t.k:
        out.append(f"weight mismatch: k + R_p = {expected} != {t.k}")
    for i, (Ms, Mt, R) in enumerate(zip(s.orders, t.orders, h.shift)):
        if Ms > 0:
            if Mt == 0:
                out.append(f"index {i + 1}: target order vanishes where source is bounded")
            elif Ms + R < Mt:
                out.append(f"index {i + 1}: {Ms} + {R} < {Mt}")
    return out


def is_admissible(params: Params, h: AdmissibleHom) -> bool:
    return not admissibility_failures(params, h)


def compose(params: Params, f: AdmissibleHom, h: AdmissibleHom) -> AdmissibleHom:
    """``f o h``: multiply coefficients, add shifts."""
    if h.target != f.source:
        raise ValueError("endpoints do not match")
    alpha = f.alpha * h.alpha % params.modulus
    shift = tuple(a + b for a, b in zip(f.shift, h.shift))
    if alpha == 0:
        return AdmissibleHom(h.source, f.target, 0, shift)
    return AdmissibleHom(h.source, f.target, alpha, shift)


def compose_blocks(params: Params, left: Block, right: Block, targets: Sequence[Term]) -> Dict:
    """Sum of composites grouped by total shift: ``{(row, col): {shift: alpha}}``.

    Groups that vanish (zero coefficient or killed on the target stratum)
    are dropped.
    """
    q = params.modulus
    by_mid = defaultdict(list)
    for (mid, col), e in right.items():
        by_mid[mid].append((col, e))
    acc = defaultdict(lambda: defaultdict(int))
    for (row, mid), (a1, s1) in left.items():
        for col, (a2, s2) in by_mid.get(mid, ()):
            s = tuple(x + y for x, y in zip(s1, s2))
            acc[(row, col)][s] = (acc[(row, col)][s] + a1 * a2) % q
    out = {}
    for (row, col), groups in acc.items():
        live = {
            s: a for s, a in groups.items() if not is_zero_map(params, a, s, targets[row].orders)
        }
        if live:
            out[(row, col)] = live
    return out


def collapse(product: Dict) -> Block:
    """Turn a grouped product into a block; each entry must be one monomial."""
    out = {}
    for key, groups in product.items():
        if len(groups) != 1:
            raise AdmissibilityError(f"entry {key} is a sum of distinct monomials {groups}")
        (s, a), = groups.items()
        out[key] = (a, s)
    return out


@dataclass
class AdmissibleComplex:
    """Bounded complex; ``terms[i]`` sits in degree ``lo + i``.

    ``diffs[i]`` is the differential from degree ``lo + i`` to ``lo + i + 1``.
    """

    params: Params
    w: int
    lo: int
    terms: List[List[Term]]
    diffs: List[Block] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        while len(self.diffs) < max(0, len(self.terms) - 1):
            self.diffs.append({})
        for row in self.terms:
            for t in row:
                if t.w != self.w:
                    raise ValueError(f"term {t} has normalization factor {t.w} != {self.w}")
        q = self.params.modulus
        for i, blk in enumerate(self.diffs):
            clean = {}
            tgt = self.terms[i + 1]
            for (r, c), (a, s) in blk.items():
                a %= q
                s = tuple(s)
                if not is_zero_map(self.params, a, s, tgt[r].orders):
                    clean[(r, c)] = (a, s)
            self.diffs[i] = clean

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    def degrees(self):
        return range(self.lo, self.lo + len(self.terms))

    def at(self, n: int) -> List[Term]:
        i = n - self.lo
        if 0 <= i < len(self.terms):
            return self.terms[i]
        return []

    def diff(self, n: int) -> Block:
        i = n - self.lo
        if 0 <= i < len(self.diffs):
            return self.diffs[i]
        return {}

    @property
    def dimension(self) -> int:
        return max((t.dim for row in self.terms for t in row), default=-1)

    def all_terms(self):
        for n, row in zip(self.degrees(), self.terms):
            for j, t in enumerate(row):
                yield n, j, t

    def homs(self):
        """Every nonzero differential entry as an :class:`AdmissibleHom`."""
        for i, blk in enumerate(self.diffs):
            for (r, c), (a, s) in sorted(blk.items()):
                yield self.lo + i, r, c, AdmissibleHom(self.terms[i][c], self.terms[i + 1][r], a, s)

    def validate(self) -> None:
        """Raise unless every entry is admissible and d o d = 0."""
        for n, r, c, h in self.homs():
            bad = admissibility_failures(self.params, h)
            if bad:
                raise AdmissibilityError(f"degree {n} entry ({r},{c}): {'; '.join(bad)}")
        bad = check_d_squared(self)
        if bad:
            raise AdmissibilityError(f"d^2 != 0 at {bad[:3]}")

    def num_terms(self) -> int:
        return sum(len(row) for row in self.terms)


def check_d_squared(c: AdmissibleComplex):
    """Violations of d o d = 0 as ``(degree, row, col, shift)`` quadruples."""
    out = []
    for i in range(len(c.diffs) - 1):
        prod = compose_blocks(c.params, c.diffs[i + 1], c.diffs[i], c.terms[i + 2])
        for (r, col), groups in sorted(prod.items()):
            for s in sorted(groups):
                out.append((c.lo + i, r, col, s))
    return out


@dataclass
class ComplexMorphism:
    """Degree-preserving morphism; ``maps[n]`` is a block from source^n to target^n."""

    source: AdmissibleComplex
    target: AdmissibleComplex
    maps: Dict[int, Block]

    def block(self, n: int) -> Block:
        return self.maps.get(n, {})

    def check_chain_map(self):
        """Degrees where ``d phi != phi d`` (after grouping by shift)."""
        bad = []
        params = self.source.params
        q = params.modulus
        for n in range(min(self.source.lo, self.target.lo) - 1, max(self.source.hi, self.target.hi) + 1):
            tgt = self.target.at(n + 1)
            left = compose_blocks(params, self.target.diff(n), self.block(n), tgt)
            right = compose_blocks(params, self.block(n + 1), self.source.diff(n), tgt)
            keys = set(left) | set(right)
            for key in keys:
                a = left.get(key, {})
                b = right.get(key, {})
                for s in set(a) | set(b):
                    if (a.get(s, 0) - b.get(s, 0)) % q and not any(
                        M > 0 and r >= M for r, M in zip(s, tgt[key[0]].orders)
                    ):
                        bad.append((n, key, s))
        return bad

    def validate(self) -> None:
        params = self.source.params
        for n, blk in self.maps.items():
            for (r, c), (a, s) in blk.items():
                h = AdmissibleHom(self.source.at(n)[c], self.target.at(n)[r], a, s)
                bad = admissibility_failures(params, h)
                if bad:
                    raise AdmissibilityError(f"morphism degree {n} ({r},{c}): {'; '.join(bad)}")
        bad = self.check_chain_map()
        if bad:
            raise AdmissibilityError(f"not a chain map at {bad[:3]}")


def _negate(params: Params, blk: Block) -> Block:
    q = params.modulus
    return {k: ((-a) % q, s) for k, (a, s) in blk.items()}


def _offset(blk: Block, dr: int, dc: int) -> Block:
    return {(r + dr, c + dc): e for (r, c), e in blk.items()}


def shift(c: AdmissibleComplex, n: int) -> AdmissibleComplex:
    """``c[n]``: degree k holds ``c^(k+n)``, differential times ``(-1)**n``."""
    diffs = [dict(b) if n % 2 == 0 else _negate(c.params, b) for b in c.diffs]
    return AdmissibleComplex(c.params, c.w, c.lo - n, [list(r) for r in c.terms], diffs)


def direct_sum(*cs: AdmissibleComplex) -> AdmissibleComplex:
    cs = [c for c in cs if c.terms]
    if not cs:
        raise ValueError("direct sum of nothing")
    params, w = cs[0].params, cs[0].w
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    terms, diffs = [], []
    for n in range(lo, hi + 1):
        row = []
        for c in cs:
            row.extend(c.at(n))
        terms.append(row)
    for n in range(lo, hi):
        blk = {}
        ro = co = 0
        for c in cs:
            blk.update(_offset(c.diff(n), ro, co))
            ro += len(c.at(n + 1))
            co += len(c.at(n))
        diffs.append(blk)
    return AdmissibleComplex(params, w, lo, terms, diffs)


def cone(phi: ComplexMorphism) -> AdmissibleComplex:
    """Mapping cone; summands of degree n are listed as D^n then C^(n+1)."""
    C, D = phi.source, phi.target
    params = C.params
    lo = min(D.lo, C.lo - 1)
    hi = max(D.hi, C.hi - 1)
    terms, diffs = [], []
    for n in range(lo, hi + 1):
        terms.append(list(D.at(n)) + list(C.at(n + 1)))
    for n in range(lo, hi):
        nd, nd1 = len(D.at(n)), len(D.at(n + 1))
        blk = dict(D.diff(n))
        blk.update(_offset(phi.block(n + 1), 0, nd))
        blk.update(_offset(_negate(params, C.diff(n + 1)), nd1, nd))
        diffs.append(blk)
    return AdmissibleComplex(params, C.w if C.terms else D.w, lo, terms, diffs)


@dataclass
class DoubleComplex:
    """Grid of terms ``cells[(i, j)]`` with horizontal ``(i,j)->(i+1,j)`` and
    vertical ``(i,j)->(i,j+1)`` blocks that commute."""

    params: Params
    w: int
    cells: Dict[Tuple[int, int], List[Term]]
    horizontal: Dict[Tuple[int, int], Block] = field(default_factory=dict)
    vertical: Dict[Tuple[int, int], Block] = field(default_factory=dict)


def total(A: DoubleComplex) -> AdmissibleComplex:
    """Total complex with ``d = d_h + (-1)**i d_v``; summands ordered by column."""
    params = A.params
    if not A.cells:
        raise ValueError("empty double complex")
    degs = sorted({i + j for (i, j) in A.cells})
    lo, hi = degs[0], degs[-1]
    layout = {}
    terms = []
    for n in range(lo, hi + 1):
        row = []
        for (i, j) in sorted(k for k in A.cells if sum(k) == n):
            layout[(i, j)] = len(row)
            row.extend(A.cells[(i, j)])
        terms.append(row)
    diffs = []
    for n in range(lo, hi):
        blk = {}
        for (i, j) in sorted(k for k in A.cells if sum(k) == n):
            base = layout[(i, j)]
            h = A.horizontal.get((i, j), {})
            if h and (i + 1, j) in layout:
                blk.update(_offset(h, layout[(i + 1, j)], base))
            v = A.vertical.get((i, j), {})
            if v and (i, j + 1) in layout:
                v = v if i % 2 == 0 else _negate(params, v)
                blk.update(_offset(v, layout[(i, j + 1)], base))
        diffs.append(blk)
    return AdmissibleComplex(params, A.w, lo, terms, diffs)


@dataclass
class DimensionSplit:
    by_support: Dict[frozenset, AdmissibleComplex]
    eq: Optional[AdmissibleComplex]
    lt: Optional[AdmissibleComplex]
    connecting: Optional[ComplexMorphism]
    # positions of the original summands: (degree, index) -> ("eq"|"lt", index)
    placement: Dict[Tuple[int, int], Tuple[str, int]]


def _subcomplex(c: AdmissibleComplex, keep) -> Tuple[AdmissibleComplex, Dict]:
    """Terms with ``keep(n, j, t)`` plus the differential entries among them."""
    idx = {}
    terms = []
    for n, row in zip(c.degrees(), c.terms):
        new = []
        for j, t in enumerate(row):
            if keep(n, j, t):
                idx[(n, j)] = len(new)
                new.append(t)
        terms.append(new)
    diffs = []
    for n in range(c.lo, c.hi):
        blk = {}
        for (r, col), e in c.diff(n).items():
            if (n, col) in idx and (n + 1, r) in idx:
                blk[(idx[(n + 1, r)], idx[(n, col)])] = e
        diffs.append(blk)
    return AdmissibleComplex(c.params, c.w, c.lo, terms, diffs), idx


def split_by_dimension(c: AdmissibleComplex, r: Optional[int] = None) -> DimensionSplit:
    """Separate the top-dimensional terms from the rest.

    Returns the dimension-``r`` part (also per support), the lower part
    shifted by ``[1]`` and the connecting morphism ``phi`` so that
    ``cone(phi)[-1]`` is ``c`` with summands reordered.
    """
    if r is None:
        r = c.dimension
    for n in range(c.lo, c.hi):
        for (row, col), _ in c.diff(n).items():
            src, tgt = c.at(n)[col], c.at(n + 1)[row]
            if src.dim < r and tgt.dim >= r:
                raise AdmissibilityError(
                    f"nonzero map from dimension {src.dim} to dimension {tgt.dim} at degree {n}"
                )
            if src.dim == r and tgt.dim == r and src.support != tgt.support:
                raise AdmissibilityError("nonzero map between different supports of top dimension")
    if c.dimension > r:
        raise ValueError(f"complex has dimension {c.dimension} > {r}")
    eq, eq_idx = _subcomplex(c, lambda n, j, t: t.dim == r)
    lt0, lt_idx = _subcomplex(c, lambda n, j, t: t.dim < r)
    supports = sorted({t.support for _, _, t in c.all_terms() if t.dim == r}, key=sorted)
    by_support = {
        J: _subcomplex(c, lambda n, j, t, J=J: t.dim == r and t.support == J)[0] for J in supports
    }
    lt = shift(lt0, 1)
    maps = {}
    for n in range(c.lo, c.hi):
        blk = {}
        for (row, col), (a, s) in c.diff(n).items():
            if (n, col) in eq_idx and (n + 1, row) in lt_idx:
                blk[(lt_idx[(n + 1, row)], eq_idx[(n, col)])] = ((-a) % c.params.modulus, s)
        if blk:
            maps[n] = blk
    placement = {k: ("eq", v) for k, v in eq_idx.items()}
    placement.update({k: ("lt", v) for k, v in lt_idx.items()})
    has_lt = any(lt0.terms)
    has_eq = any(eq.terms)
    phi = ComplexMorphism(eq, lt, maps) if has_eq and has_lt else None
    return DimensionSplit(
        by_support, eq if has_eq else None, lt if has_lt else None, phi, placement
    )
