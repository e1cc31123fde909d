"""Pseudo-representations of finite groups over Z/p^m.

A function ``tau: G -> Z/p^m`` is a pseudo-representation of dimension d
when ``tau(1) = d``, ``tau`` is central, and d is the least positive
integer for which the signed sum over S_{d+1} of ``tau_sigma`` vanishes
on every (d+1)-tuple.
"""

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

EXHAUSTIVE_CAP = 10**7
DEFAULT_SAMPLES = 20000


@dataclass
class FiniteGroup:
    """Finite group by multiplication table: ``table[a][b]`` is the index of ``ab``."""

    elements: List[str]
    table: List[List[int]]
    identity: int = 0
    labels: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise ValueError("empty group")
        if len(set(self.elements)) != n:
            raise ValueError("duplicate element names")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("table must be square of size #elements")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise ValueError("table entry out of range")
        e = self.identity
        if not 0 <= e < n:
            raise ValueError("identity index out of range")
        for a in range(n):
            if self.table[e][a] != a or self.table[a][e] != a:
                raise ValueError(f"{self.elements[e]} is not an identity")
        for a in range(n):
            if e not in self.table[a]:
                raise ValueError(f"{self.elements[a]} has no inverse")
        T = self.table
        for a in range(n):
            for b in range(n):
                ab = T[a][b]
                for c in range(n):
                    if T[ab][c] != T[a][T[b][c]]:
                        raise ValueError("table is not associative")
        self._inv = [T[a].index(e) for a in range(n)]

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, *xs: int) -> int:
        out = self.identity
        for x in xs:
            out = self.table[out][x]
        return out

    def inverse(self, a: int) -> int:
        return self._inv[a]

    def index(self, name: str) -> int:
        return self.elements.index(name)

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))


def cyclic_group(n: int) -> FiniteGroup:
    names = ["1"] + [f"g{k}" if k > 1 else "g" for k in range(1, n)]
    return FiniteGroup(names, [[(a + b) % n for b in range(n)] for a in range(n)])


def _perm_name(p: Tuple[int, ...]) -> str:
    cycles = _cycles(p)
    body = "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cycles if len(c) > 1)
    return body or "1"


def symmetric_group(n: int) -> FiniteGroup:
    perms = sorted(itertools.permutations(range(n)))
    ident = tuple(range(n))
    perms.remove(ident)
    perms = [ident] + perms
    pos = {p: i for i, p in enumerate(perms)}
    # (ab)(x) = a(b(x))
    table = [[pos[tuple(a[b[x]] for x in range(n))] for b in perms] for a in perms]
    return FiniteGroup([_perm_name(p) for p in perms], table)


def dihedral_group(n: int) -> FiniteGroup:
    """Order 2n: elements r^i s^e, with s r s = r^-1."""
    elems = [(i, e) for e in (0, 1) for i in range(n)]
    pos = {x: k for k, x in enumerate(elems)}

    def mul(x, y):
        (i, e), (j, f) = x, y
        return ((i + (-j if e else j)) % n, (e + f) % 2)

    names = [("1" if i == 0 else f"r{i}") if e == 0 else (f"r{i}s" if i else "s") for i, e in elems]
    return FiniteGroup(names, [[pos[mul(x, y)] for y in elems] for x in elems])


def _cycles(perm: Sequence[int]) -> List[List[int]]:
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        out.append(cyc)
    return out


def _sign(perm: Sequence[int]) -> int:
    return -1 if sum(len(c) - 1 for c in _cycles(perm)) % 2 else 1


@dataclass
class PseudoRep:
    group: FiniteGroup
    values: List[int]
    d: int
    p: int
    m: int = 1

    def __post_init__(self):
        if len(self.values) != self.group.order:
            raise ValueError("one value per group element required")
        q = self.p**self.m
        self.values = [int(v) % q for v in self.values]

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def __call__(self, a: int) -> int:
        return self.values[a]


def tau_sigma(tau: PseudoRep, sigma: Sequence[int], gs: Sequence[int]) -> int:
    """Product over the cycles of ``sigma`` of tau of the ordered cycle product.

    ``sigma`` is a permutation of ``0..len(gs)-1`` given as the image list.
    """
    if len(sigma) != len(gs):
        raise ValueError("permutation and tuple lengths differ")
    G, q = tau.group, tau.modulus
    out = 1
    for cyc in _cycles(sigma):
        out = out * tau(G.mul(*(gs[i] for i in cyc))) % q
    return out


class _Identity:
    """Precomputed cycle structure of S_n for the signed-sum identity."""

    def __init__(self, n: int):
        self.n = n
        self.terms = [(_sign(s), _cycles(s)) for s in itertools.permutations(range(n))]

    def value(self, tau: PseudoRep, gs: Sequence[int]) -> int:
        G, q, vals = tau.group, tau.modulus, tau.values
        total = 0
        for sign, cycles in self.terms:
            prod = 1
            for cyc in cycles:
                x = G.identity
                for i in cyc:
                    x = G.table[x][gs[i]]
                prod = prod * vals[x] % q
            total += sign * prod
        return total % q


def signed_sum(tau: PseudoRep, gs: Sequence[int]) -> int:
    return _Identity(len(gs)).value(tau, gs)


@dataclass
class Verdict:
    status: str  # valid | fails-at-condition-N | not-minimal
    d: int
    sampled: bool = False
    witness: Optional[List[str]] = None
    checked: int = 0

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "d": self.d,
            "sampled": self.sampled,
            "witness": self.witness,
            "checked": self.checked,
        }


def _tuples(n_elems: int, length: int, cap: int, seed: int, samples: int):
    """All tuples if there are at most ``cap`` of them, else seeded samples."""
    if n_elems**length <= cap:
        return itertools.product(range(n_elems), repeat=length), False
    rng = random.Random(seed)
    return ((tuple(rng.randrange(n_elems) for _ in range(length)) for _ in range(samples)), True)


def identity_holds(tau: PseudoRep, n: int, cap: int = EXHAUSTIVE_CAP, seed: int = 0,
                   samples: int = DEFAULT_SAMPLES):
    """``(holds, witness, sampled, checked)`` for the n-letter identity."""
    ident = _Identity(n)
    gen, sampled = _tuples(tau.group.order, n, cap, seed, samples)
    checked = 0
    for gs in gen:
        checked += 1
        if ident.value(tau, gs):
            return False, list(gs), sampled, checked
    return True, None, sampled, checked


def check_pseudo_rep(tau: PseudoRep, cap: int = EXHAUSTIVE_CAP, seed: int = 0,
                     samples: int = DEFAULT_SAMPLES) -> Verdict:
    """Check conditions (1)-(3) including minimality of d.

    Exhaustive when the tuple count is at most ``cap``; otherwise a seeded
    sample, flagged by ``sampled`` in the verdict.
    """
    G, q, d = tau.group, tau.modulus, tau.d
    names = G.elements
    if d < 1:
        return Verdict("fails-at-condition-1", d)
    if (tau(G.identity) - d) % q:
        return Verdict("fails-at-condition-1", d, witness=[names[G.identity]], checked=1)
    n = G.order
    for a in range(n):
        for b in range(n):
            if tau(G.table[a][b]) != tau(G.table[b][a]):
                return Verdict("fails-at-condition-2", d, witness=[names[a], names[b]])
    ok, wit, sampled, checked = identity_holds(tau, d + 1, cap, seed, samples)
    if not ok:
        return Verdict("fails-at-condition-3", d, sampled, [names[i] for i in wit], checked)
    if d >= 2:
        ok_low, wit_low, s2, c2 = identity_holds(tau, d, cap, seed + 1, samples)
        sampled = sampled or s2
        checked += c2
        if ok_low:
            return Verdict("not-minimal", d, sampled, None, checked)
    return Verdict("valid", d, sampled, None, checked)


# -- traces of matrix representations ------------------------------------


def _matmul(A, B, q):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) % q for j in range(n)] for i in range(n)]


def trace_of_rep(group: FiniteGroup, rho: Sequence, p: int, m: int = 1) -> PseudoRep:
    """``tau(g) = tr rho(g)``; ``rho[i]`` is the matrix of element i."""
    q = p**m
    if len(rho) != group.order:
        raise ValueError("one matrix per group element required")
    n = len(rho[0])
    mats = [[[int(x) % q for x in row] for row in M] for M in rho]
    for M in mats:
        if len(M) != n or any(len(row) != n for row in M):
            raise ValueError("matrices must be square of a common size")
    eye = [[int(i == j) for j in range(n)] for i in range(n)]
    if mats[group.identity] != eye:
        raise ValueError("rho(1) is not the identity matrix")
    for a in range(group.order):
        for b in range(group.order):
            if _matmul(mats[a], mats[b], q) != mats[group.table[a][b]]:
                raise ValueError(
                    f"not a homomorphism at ({group.elements[a]}, {group.elements[b]})"
                )
    return PseudoRep(group, [sum(M[i][i] for i in range(n)) for M in mats], n, p, m)


def standard_rep_s3(group: FiniteGroup) -> List[List[List[int]]]:
    """Integer matrices of the 2-dim standard representation of S_3.

    The group must come from :func:`symmetric_group` with n = 3; the
    representation acts on ``{x in Z^3 : sum x = 0}`` in the basis
    ``e1 - e2, e2 - e3``.
    """
    basis = [(1, -1, 0), (0, 1, -1)]
    perms = sorted(itertools.permutations(range(3)))
    perms.remove((0, 1, 2))
    perms = [(0, 1, 2)] + perms
    out = []
    for perm in perms:
        cols = []
        for v in basis:
            w = [0, 0, 0]
            for i in range(3):
                w[perm[i]] += v[i]
            # w = a (e1 - e2) + b (e2 - e3): a = w1, b = w1 + w2
            cols.append((w[0], w[0] + w[1]))
        out.append([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])
    return out


def standard_rep_dihedral(n: int) -> List[List[List[int]]]:
    """Integer 2-dim representation of the dihedral group of order 2n for n
    in {1, 2, 3, 4, 6}, where rotation by 2 pi / n has integer matrices."""
    rot = {
        1: [[1, 0], [0, 1]],
        2: [[-1, 0], [0, -1]],
        3: [[0, -1], [1, -1]],
        4: [[0, -1], [1, 0]],
        6: [[1, -1], [1, 0]],
    }
    if n not in rot:
        raise ValueError("no integral rotation of that order")
    R = rot[n]
    S = [[0, 1], [1, 0]] if n in (3, 6) else [[1, 0], [0, -1]]

    def mul(A, B):
        return [[sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)] for i in range(2)]

    powers = [[[1, 0], [0, 1]]]
    for _ in range(n - 1):
        powers.append(mul(powers[-1], R))
    # element order matches dihedral_group: r^i then r^i s
    return powers + [mul(P, S) for P in powers]


# -- universal ring for two-dimensional pseudo-representations -----------

Poly = Dict[Tuple[int, ...], int]  # sorted variable indices -> coefficient


def _add(poly: Poly, mono: Sequence[int], c: int) -> None:
    key = tuple(sorted(mono))
    poly[key] = poly.get(key, 0) + c
    if poly[key] == 0:
        del poly[key]


def _canon(poly: Poly) -> Tuple:
    return tuple(sorted(poly.items()))


def universal_ring_relations(G: FiniteGroup) -> List[Poly]:
    """Generators of the defining ideal, deduplicated and in a fixed order.

    Order: ``t_1 - 2``, then the commutator relations over pairs, then the
    cubic relations over triples, each family in lexicographic index order.
    Syntactically zero relations are dropped.
    """
    e = G.identity
    out: List[Poly] = []
    seen = set()

    def emit(poly):
        if not poly:
            return
        key = _canon(poly)
        if key not in seen:
            seen.add(key)
            out.append(poly)

    poly: Poly = {}
    _add(poly, (e,), 1)
    _add(poly, (), -2)
    emit(poly)
    n = G.order
    for a in range(n):
        for b in range(n):
            poly = {}
            _add(poly, (G.mul(a, b),), 1)
            _add(poly, (G.mul(b, a),), -1)
            emit(poly)
    for a, b, c in itertools.product(range(n), repeat=3):
        poly = {}
        _add(poly, (a, b, c), 1)
        _add(poly, (G.mul(a, b, c),), 1)
        _add(poly, (G.mul(a, c, b),), 1)
        _add(poly, (a, G.mul(b, c)), -1)
        _add(poly, (b, G.mul(a, c)), -1)
        _add(poly, (c, G.mul(a, b)), -1)
        emit(poly)
    return out


def cubic_relation(G: FiniteGroup, a: int, b: int, c: int) -> Poly:
    poly: Poly = {}
    _add(poly, (a, b, c), 1)
    _add(poly, (G.mul(a, b, c),), 1)
    _add(poly, (G.mul(a, c, b),), 1)
    _add(poly, (a, G.mul(b, c)), -1)
    _add(poly, (b, G.mul(a, c)), -1)
    _add(poly, (c, G.mul(a, b)), -1)
    return poly


def substitute(poly: Poly, values: Dict[int, int]) -> Poly:
    """Replace the variables in ``values`` by integers; others stay symbolic."""
    out: Poly = {}
    for mono, c in poly.items():
        coeff = c
        rest = []
        for v in mono:
            if v in values:
                coeff *= values[v]
            else:
                rest.append(v)
        if coeff:
            _add(out, rest, coeff)
    return out


def evaluate_relations(relations: Sequence[Poly], tau: Sequence[int], modulus: int) -> List[int]:
    """Residues of every relation at ``t_g = tau[g]``; all zero iff tau is a
    two-dimensional pseudo-representation up to minimality."""
    out = []
    for poly in relations:
        total = 0
        for mono, c in poly.items():
            term = c
            for v in mono:
                term *= tau[v]
            total += term
        out.append(total % modulus)
    return out


def format_poly(poly: Poly, G: FiniteGroup) -> str:
    """Human-readable form, e.g. ``t_g^3 - 4*t_g``; higher degree first."""
    if not poly:
        return "0"
    names = G.elements

    def mono_str(mono):
        parts = []
        for v, grp in itertools.groupby(mono):
            k = len(list(grp))
            parts.append(f"t_{names[v]}" + (f"^{k}" if k > 1 else ""))
        return "*".join(parts)

    items = sorted(poly.items(), key=lambda kv: (-len(kv[0]), kv[0]))
    out = ""
    for i, (mono, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = mono_str(mono)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if i == 0:
            out = ("-" if c < 0 else "") + text
        else:
            out += f" {sign} {text}"
    return out


# -- Hecke bookkeeping ----------------------------------------------------


def hecke_assignment(group: FiniteGroup, labels: Dict[str, str], table: Dict[str, int], p: int,
                     m: int = 1, d: int = 2, **check_kw) -> Tuple[PseudoRep, Verdict]:
    """Pull a Hecke eigenvalue table back to the finite quotient.

    ``labels`` maps each element name to a Frobenius-class label and
    ``table`` maps labels to eigenvalues; tau(g) is the eigenvalue of the
    label of g.
    """
    vals = []
    for name in group.elements:
        if name not in labels:
            raise ValueError(f"element {name!r} has no Frobenius label")
        lab = labels[name]
        if lab not in table:
            raise ValueError(f"label {lab!r} missing from the eigenvalue table")
        vals.append(table[lab])
    tau = PseudoRep(group, vals, d, p, m)
    return tau, check_pseudo_rep(tau, **check_kw)
