"""JSON formats for complexes, plans, reports and group tables.

Output is byte-deterministic: keys sorted, two-space indent, a trailing
newline, coefficients as integers in ``[0, p^m)``.
"""

import json
from typing import Any, List

from .complexes import AdmissibleComplex, Block
from .pseudo_rep import FiniteGroup
from .resolution import ResolutionPlan
from .terms import Term
from .weight_lattice import Params, Weight


class ParseError(ValueError):
    """Input does not match the expected JSON schema."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _need(d: dict, key: str, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"missing key {key!r}")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise ParseError(f"key {key!r} has the wrong type")
    return v


def _ints(v, what) -> List[int]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ParseError(f"{what} must be a list of integers")
    return list(v)


def params_to_dict(params: Params) -> dict:
    return params.as_dict()


def params_from_dict(d: dict) -> Params:
    try:
        return Params(
            int(_need(d, "p", int)),
            int(_need(d, "g", int)),
            int(d.get("m", 1)),
            int(d.get("delta_threshold", 5)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad params: {exc}") from None


def term_to_dict(t: Term) -> dict:
    return t.as_dict()


def term_from_dict(d: dict, w: int) -> Term:
    k = _ints(_need(d, "k"), "k")
    M = _ints(_need(d, "M"), "M")
    return Term(Weight(tuple(k), w), tuple(M))


def block_to_list(blk: Block) -> List[dict]:
    return [
        {"row": r, "col": c, "alpha": a, "shift": list(s)}
        for (r, c), (a, s) in sorted(blk.items())
    ]


def block_from_list(entries, q: int) -> Block:
    if not isinstance(entries, list):
        raise ParseError("differential must be a list of entries")
    out = {}
    for e in entries:
        r, c, a = _need(e, "row", int), _need(e, "col", int), _need(e, "alpha", int)
        s = _ints(_need(e, "shift"), "shift")
        if (r, c) in out:
            raise ParseError(f"duplicate entry ({r},{c})")
        out[(r, c)] = (a % q, tuple(s))
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, frozenset):
        return sorted(x)
    return x


def complex_to_dict(cx: AdmissibleComplex) -> dict:
    meta = dict(cx.metadata or {})
    out = {
        "params": params_to_dict(cx.params),
        "w": cx.w,
        "degrees": [cx.lo, cx.hi],
        "terms": [[term_to_dict(t) for t in row] for row in cx.terms],
        "differentials": [block_to_list(b) for b in cx.diffs],
    }
    src = meta.pop("source", None)
    aug = meta.pop("augmentation", None)
    if src is not None:
        out["source"] = term_to_dict(src)
    if aug is not None:
        out["augmentation"] = block_to_list(aug)
    if meta:
        out["metadata"] = _jsonable(meta)
    return out


def complex_from_dict(d: dict, check: bool = True) -> AdmissibleComplex:
    params = params_from_dict(_need(d, "params", dict))
    w = _need(d, "w", int)
    degrees = _ints(_need(d, "degrees"), "degrees")
    if len(degrees) != 2 or degrees[1] < degrees[0] - 1:
        raise ParseError("degrees must be [lo, hi]")
    rows = _need(d, "terms", list)
    if len(rows) != degrees[1] - degrees[0] + 1:
        raise ParseError("terms do not match the degree range")
    try:
        terms = [[term_from_dict(t, w) for t in row] for row in rows]
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad term: {exc}") from None
    diffs_raw = _need(d, "differentials", list)
    if len(diffs_raw) != max(0, len(terms) - 1):
        raise ParseError("need one differential per consecutive degree pair")
    q = params.modulus
    diffs = [block_from_list(b, q) for b in diffs_raw]
    for i, blk in enumerate(diffs):
        for (r, c), (a, s) in blk.items():
            if not (0 <= c < len(terms[i]) and 0 <= r < len(terms[i + 1])):
                raise ParseError(f"entry ({r},{c}) out of range in degree {degrees[0] + i}")
            if len(s) != params.g:
                raise ParseError("shift has the wrong length")
    for row in terms:
        for t in row:
            if len(t.orders) != params.g:
                raise ParseError("term has the wrong length")
    meta = dict(d.get("metadata") or {})
    if "source" in d:
        try:
            meta["source"] = term_from_dict(d["source"], w)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad source: {exc}") from None
    if "augmentation" in d:
        meta["augmentation"] = block_from_list(d["augmentation"], q)
    cx = AdmissibleComplex(params, w, degrees[0], terms, diffs, meta)
    return cx


def plan_to_dict(plan: ResolutionPlan) -> dict:
    return plan.as_dict()


def plan_from_dict(d: dict, params: Params) -> ResolutionPlan:
    N = _need(d, "N", int)
    by = {}
    for item in _need(d, "supports", list):
        J = frozenset(_ints(_need(item, "J"), "J"))
        ex = item.get("exponents")
        by[J] = None if ex is None else {int(k): int(v) for k, v in ex.items()}
    plan = ResolutionPlan(params, by, N)
    plan.validate()
    return plan


def group_to_dict(G: FiniteGroup) -> dict:
    out = {"elements": list(G.elements), "table": [list(r) for r in G.table], "identity": G.identity}
    if G.labels:
        out["labels"] = dict(G.labels)
    return out


def group_from_dict(d: dict) -> FiniteGroup:
    elements = _need(d, "elements", list)
    if not all(isinstance(e, str) for e in elements):
        raise ParseError("element names must be strings")
    pos = {e: i for i, e in enumerate(elements)}
    table = []
    for row in _need(d, "table", list):
        if not isinstance(row, list):
            raise ParseError("table rows must be lists")
        out_row = []
        for x in row:
            if isinstance(x, str):
                if x not in pos:
                    raise ParseError(f"unknown element {x!r} in table")
                out_row.append(pos[x])
            elif isinstance(x, int):
                out_row.append(x)
            else:
                raise ParseError("table entries must be names or indices")
        table.append(out_row)
    ident = d.get("identity", 0)
    if isinstance(ident, str):
        if ident not in pos:
            raise ParseError("unknown identity element")
        ident = pos[ident]
    labels = d.get("labels") or {}
    if not isinstance(labels, dict):
        raise ParseError("labels must be an object")
    try:
        return FiniteGroup(list(elements), table, ident, dict(labels))
    except ValueError as exc:
        raise ParseError(f"bad group table: {exc}") from None


def values_by_name(G: FiniteGroup, values) -> List[int]:
    """Accept a list aligned with the elements or an object keyed by name."""
    if isinstance(values, list):
        if len(values) != G.order:
            raise ParseError("value list length differs from the group order")
        return _ints(values, "values")
    if isinstance(values, dict):
        missing = [e for e in G.elements if e not in values]
        if missing:
            raise ParseError(f"missing values for {missing}")
        return [int(values[e]) for e in G.elements]
    raise ParseError("values must be a list or an object")


def report_to_dict(report) -> dict:
    return _jsonable(report.as_dict())
