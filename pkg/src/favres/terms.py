"""Vanishing-order tuples and stratum-restricted weight terms."""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .weight_lattice import (
    Params,
    Weight,
    default_budget,
    is_paritious,
    star_condition,
    support,
    theta_shift_of,
)

__all__ = [
    "Term",
    "check_orders",
    "dimension",
    "favorable_witness",
    "is_favorable",
    "support",
]


def check_orders(params: Params, M: Sequence[int]) -> Tuple[int, ...]:
    """Validate a vanishing tuple: non-negative, divisible by the step."""
    M = tuple(int(x) for x in M)
    if len(M) != params.g:
        raise ValueError(f"expected {params.g} vanishing orders, got {len(M)}")
    for x in M:
        if x < 0 or x % params.step:
            raise ValueError(f"vanishing order {x} is not a non-negative multiple of {params.step}")
    return M


def dimension(M: Sequence[int]) -> int:
    return sum(1 for x in M if x == 0)


@dataclass(frozen=True, order=True)
class Term:
    """The restriction of omega^(k,w)(-D) to the stratum Z_M."""

    weight: Weight
    orders: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(x) for x in self.orders))
        if not is_paritious(self.weight):
            raise ValueError(f"weight {self.weight} is not paritious")
        if len(self.orders) != len(self.weight.k):
            raise ValueError("weight and orders have different lengths")

    @property
    def k(self):
        return self.weight.k

    @property
    def w(self):
        return self.weight.w

    @property
    def support(self) -> frozenset:
        return frozenset(support(self.orders))

    @property
    def dim(self) -> int:
        return dimension(self.orders)

    def as_dict(self) -> dict:
        return {"k": list(self.weight.k), "M": list(self.orders)}


def favorable_witness(params: Params, t: Term, budget: Optional[int] = None):
    """Smallest uniform theta twist certifying favorability, or ``None``.

    Twists live on the indices where the orders are positive and must exceed
    ``M_r + step`` there.  The threshold model is monotone in the twist, so
    a bisection over the uniform excess finds the least witness.
    """
    M = t.orders
    step = params.step
    nz = [i for i in range(params.g) if M[i] > 0]
    if budget is None:
        budget = params.search_budget
    if budget is None:
        budget = default_budget(params, M, [t.weight])

    def twist(extra):
        return tuple(M[i] + step + extra * step if i in nz else 0 for i in range(params.g))

    def ok(T):
        return star_condition(params, t.weight.shifted(theta_shift_of(params, T)), M, nz)

    if ok((0,) * params.g):
        return (0,) * params.g
    if not nz:
        return None
    hi = max(1, budget // step)
    if not ok(twist(hi)):
        return None
    lo = 1
    if ok(twist(lo)):
        return twist(lo)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(twist(mid)):
            hi = mid
        else:
            lo = mid
    return twist(hi)


def is_favorable(params: Params, t: Term, budget: Optional[int] = None) -> bool:
    """Modeled favorability: a valid theta twist lands in the star region."""
    return favorable_witness(params, t, budget) is not None
