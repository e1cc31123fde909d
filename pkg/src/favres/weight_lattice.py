"""Weights in Z^g, the Hasse/theta shift vectors and the favorability model.

Indices are 1-based in the public API (``shift_p(params, 1)`` is the first
shift vector) and cyclic modulo ``g``; tuples are ordinary 0-based tuples.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Optional, Sequence, Tuple


class ExponentSearchExhausted(RuntimeError):
    """The bounded exponent search ran out of budget."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Params:
    p: int
    g: int
    m: int = 1
    delta_threshold: int = 5
    search_budget: Optional[int] = None
    # pluggable replacement for the threshold model of Delta_w
    delta_model: Optional[Callable[["Params", "Weight"], bool]] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.g < 1 or self.m < 1:
            raise ValueError("g and m must be positive")
        if self.delta_threshold < 2:
            raise ValueError("delta_threshold must be at least 2")

    @property
    def step(self) -> int:
        return 2 * self.p ** (self.m - 1)

    @property
    def modulus(self) -> int:
        return self.p**self.m

    @property
    def degenerate(self) -> bool:
        """True for g = 1, where the cyclic index i-1 wraps onto i."""
        return self.g == 1

    def as_dict(self) -> dict:
        return {"p": self.p, "g": self.g, "m": self.m, "delta_threshold": self.delta_threshold}


@dataclass(frozen=True, order=True)
class Weight:
    k: Tuple[int, ...]
    w: int

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))

    def shifted(self, delta: Sequence[int]) -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.k, delta)), self.w)


def is_paritious(wt: Weight) -> bool:
    return all((ki - wt.w) % 2 == 0 for ki in wt.k)


def is_regular(wt: Weight) -> bool:
    return all(ki > 1 for ki in wt.k)


def _check_index(params: Params, i: int) -> int:
    if not 1 <= i <= params.g:
        raise IndexError(f"index {i} outside 1..{params.g}")
    return i - 1


def shift_p(params: Params, i: int) -> Tuple[int, ...]:
    """p_i = p e_{i-1} - e_i (cyclic)."""
    j = _check_index(params, i)
    v = [0] * params.g
    v[(j - 1) % params.g] += params.p
    v[j] -= 1
    return tuple(v)


def shift_q(params: Params, i: int) -> Tuple[int, ...]:
    """q_i = p e_{i-1} + e_i (cyclic)."""
    j = _check_index(params, i)
    v = [0] * params.g
    v[(j - 1) % params.g] += params.p
    v[j] += 1
    return tuple(v)


def weight_shift_of(params: Params, M: Sequence[int]) -> Tuple[int, ...]:
    """Sum of M_i p_i; component j equals p M_{j+1} - M_j."""
    g, p = params.g, params.p
    return tuple(p * M[(j + 1) % g] - M[j] for j in range(g))


def theta_shift_of(params: Params, T: Sequence[int]) -> Tuple[int, ...]:
    """Sum of T_i q_i; component j equals p T_{j+1} + T_j."""
    g, p = params.g, params.p
    return tuple(p * T[(j + 1) % g] + T[j] for j in range(g))


def in_delta(params: Params, wt: Weight) -> bool:
    if params.delta_model is not None:
        return params.delta_model(params, wt)
    return is_paritious(wt) and min(wt.k) >= params.delta_threshold


def _star_radius(params: Params, M: Sequence[int], J) -> int:
    return params.p * len(J) * (max(M) if len(M) else 0)


def star_condition(params: Params, wt: Weight, M: Sequence[int], J) -> bool:
    """Every paritious k' within the star radius of k lies in Delta_w.

    The radius is ``p * #J * max(M)``.  Under the threshold model the
    cube condition collapses to its worst corner.
    """
    if not is_regular(wt):
        return False
    r = _star_radius(params, M, J)
    if params.delta_model is None:
        return is_paritious(wt) and min(wt.k) - r >= params.delta_threshold
    # generic model: check every paritious point of the cube
    from itertools import product

    ranges = [range(ki - r, ki + r + 1) for ki in wt.k]
    for kp in product(*ranges):
        cand = Weight(kp, wt.w)
        if is_paritious(cand) and not in_delta(params, cand):
            return False
    return True


def cylinder_membership(params: Params, a: Sequence[int], C, D, w: int) -> bool:
    """Exact test for a in the truncated paritious cylinder around the diagonal."""
    g = len(a)
    if any(x <= 0 for x in a):
        return False
    if not is_paritious(Weight(tuple(a), w)):
        return False
    mean = Fraction(sum(a), g)
    dist2 = sum((Fraction(x) - mean) ** 2 for x in a)
    proj2 = g * mean * mean
    return dist2 < Fraction(C) ** 2 and proj2 > Fraction(D) ** 2


def default_budget(params: Params, M: Sequence[int], weights: Sequence[Weight]) -> int:
    mag = max((abs(x) for wt in weights for x in wt.k), default=0)
    return 64 * params.step * params.g * (params.delta_threshold + max(M, default=0) + mag)


def _compositions(total: int, parts: int, lows: Sequence[int]):
    """Tuples of length ``parts`` with entries >= lows summing to total, lexicographic."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    rest_low = sum(lows[1:])
    for first in range(lows[0], total - rest_low + 1):
        for tail in _compositions(total - first, parts - 1, lows[1:]):
            yield (first,) + tail


def make_favorable_exponents_multi(params: Params, J, terms, budget: Optional[int] = None, floor_M=None):
    """Exponents that make every ``(weight, M)`` in ``terms`` favorable at once.

    ``J`` is the common support (indices where M vanishes).  Returns
    ``(N_J, N_Jc)`` as dicts index -> exponent (1-based indices).  The
    search visits exponent tuples by increasing total and lexicographically
    within a total, so the first hit is the smallest certificate.
    """
    g, step = params.g, params.step
    J = sorted(J)
    Jc = [i for i in range(1, g + 1) if i not in J]
    for wt, M in terms:
        if support(M) != set(J):
            raise ValueError(f"support of {tuple(M)} is not {set(J)}")
    Mmax = [max((M[i - 1] for _, M in terms), default=0) for i in range(1, g + 1)]
    if floor_M is not None:
        Mmax = [max(a, b) for a, b in zip(Mmax, floor_M)]
    # in units of step; J^c entries need N_j > M_j + step
    lows = []
    for i in range(1, g + 1):
        lows.append(1 if i in J else Mmax[i - 1] // step + 2)
    if budget is None:
        budget = params.search_budget
    if budget is None:
        allM = [x for _, M in terms for x in M] or [0]
        budget = default_budget(params, allM, [wt for wt, _ in terms])
    max_units = budget // step
    if not terms:
        units = tuple(lows)
        return _split(units, J, Jc, step)
    checks = []
    for wt, M in terms:
        nz = [i for i in range(g) if M[i] > 0]
        checks.append((wt, tuple(M), nz))
    for total in range(sum(lows), max_units + 1):
        for units in _compositions(total, g, lows):
            N = [u * step for u in units]
            pvec = [N[i] if (i + 1) in J else 0 for i in range(g)]
            qvec = [N[i] if (i + 1) not in J else 0 for i in range(g)]
            delta = tuple(
                a + b for a, b in zip(weight_shift_of(params, pvec), theta_shift_of(params, qvec))
            )
            if all(star_condition(params, wt.shifted(delta), M, nz) for wt, M, nz in checks):
                return _split(units, J, Jc, step)
    raise ExponentSearchExhausted(
        f"no favorable exponents with total <= {budget} (J={J}); raise the budget"
    )


def _split(units, J, Jc, step):
    NJ = {i: units[i - 1] * step for i in J}
    NJc = {i: units[i - 1] * step for i in Jc}
    return NJ, NJc


def make_favorable_exponents(params: Params, J, M: Sequence[int], weights: Sequence[Weight], budget=None):
    """Single-M form: every weight is paired with the same vanishing tuple."""
    if support(M) != set(J):
        raise ValueError(f"support of {tuple(M)} is not {set(J)}")
    return make_favorable_exponents_multi(
        params, J, [(wt, tuple(M)) for wt in weights], budget, floor_M=tuple(M)
    )


def support(M: Sequence[int]) -> set:
    """Indices (1-based) with M_i = 0."""
    return {i + 1 for i, x in enumerate(M) if x == 0}


def subsets(indices, size: int):
    """Subsets of ``indices`` of the given size, as sorted tuples in lex order."""
    return list(combinations(sorted(indices), size))
