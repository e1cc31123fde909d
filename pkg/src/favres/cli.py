"""Command-line front end: ``favres resolve | verify | koszul | pseudorep``.

Exit codes: 0 ok, 2 input-domain error, 3 parse error, 4 verification
precondition error, 5 verification failure, 6 budget exhaustion.
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

from . import serialize as ser
from .complexes import check_d_squared
from .pseudo_rep import (
    FiniteGroup,
    PseudoRep,
    check_pseudo_rep,
    cyclic_group,
    dihedral_group,
    evaluate_relations,
    format_poly,
    substitute,
    symmetric_group,
    trace_of_rep,
    universal_ring_relations,
)
from .resolution import favorable_resolution, lower_bracket, stratum_bracket
from .terms import Term
from .toy_model import BoxTooSmall, IllDefinedMap, augment, realize_complex, realize_term, verify_exactness
from .weight_lattice import ExponentSearchExhausted, Params, Weight

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_PARSE = 3
EXIT_PRECONDITION = 4
EXIT_FAILED = 5
EXIT_BUDGET = 6

log = logging.getLogger("favres")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    p: int = 3
    g: int = 2
    m: int = 1
    delta_threshold: int = 5
    search_budget: Optional[int] = None
    box: Optional[List[int]] = None
    out: Optional[str] = None
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        for name in ("p", "g", "m", "delta_threshold", "jobs"):
            if getattr(self, name) < 1:
                raise CliError(EXIT_DOMAIN, f"{name} must be positive")
        if self.search_budget is not None and self.search_budget < 1:
            raise CliError(EXIT_DOMAIN, "search budget must be positive")
        if self.box is not None and any(b < 1 for b in self.box):
            raise CliError(EXIT_DOMAIN, "box bounds must be positive")
        if self.seed < 0:
            raise CliError(EXIT_DOMAIN, "seed must be non-negative")

    def params(self) -> Params:
        try:
            return Params(self.p, self.g, self.m, self.delta_threshold, self.search_budget)
        except ValueError as exc:
            raise CliError(EXIT_DOMAIN, str(exc)) from None


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(EXIT_PARSE, f"expected a comma-separated integer list, got {text!r}") from None


def _emit(cfg: RunConfig, obj) -> None:
    text = ser.dumps(obj)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return ser.loads(fh.read())
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from None
    except ser.ParseError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None


def _weight(cfg: RunConfig, k: Sequence[int], w: int) -> Weight:
    if len(k) != cfg.g:
        raise CliError(EXIT_DOMAIN, f"k has {len(k)} entries, expected g={cfg.g}")
    wt = Weight(tuple(k), w)
    if any((x - w) % 2 for x in k):
        raise CliError(EXIT_DOMAIN, f"weight {tuple(k)} with w={w} is not paritious")
    return wt


def cmd_resolve(cfg: RunConfig, k: Sequence[int], w: int) -> dict:
    params = cfg.params()
    wt = _weight(cfg, k, w)
    try:
        cx = favorable_resolution(params, wt)
    except ExponentSearchExhausted as exc:
        raise CliError(EXIT_BUDGET, str(exc)) from None
    return ser.complex_to_dict(cx)


def cmd_verify(cfg: RunConfig, data: dict, mode: str, exhaustive: bool = False) -> dict:
    try:
        cx = ser.complex_from_dict(data)
    except ser.ParseError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    bad = check_d_squared(cx)
    if bad:
        raise CliError(EXIT_PRECONDITION, f"d^2 != 0 at {bad[:3]}")
    try:
        tc = realize_complex(cx)
        if mode == "quasi-iso":
            src = cx.metadata.get("source")
            aug = cx.metadata.get("augmentation")
            if src is None or aug is None:
                raise CliError(EXIT_PRECONDITION, "quasi-iso mode needs 'source' and 'augmentation'")
            if cx.lo != 0:
                raise CliError(EXIT_PRECONDITION, "quasi-iso mode needs a complex starting in degree 0")
            tc = augment(tc, [realize_term(src)], aug)
        elif mode != "exactness":
            raise CliError(EXIT_DOMAIN, f"unknown mode {mode!r}")
        box = cfg.box
        if box is not None and len(box) != cx.params.g:
            raise CliError(EXIT_PRECONDITION, f"box needs {cx.params.g} entries")
        report = verify_exactness(tc, box, exhaustive=exhaustive, jobs=cfg.jobs)
    except BoxTooSmall as exc:
        raise CliError(EXIT_PRECONDITION, str(exc)) from None
    except IllDefinedMap as exc:
        raise CliError(EXIT_PRECONDITION, str(exc)) from None
    out = ser.report_to_dict(report)
    out["mode"] = mode
    return out


def cmd_koszul(cfg: RunConfig, kind: str, k: Sequence[int], w: int, M: Sequence[int],
               exponents: Sequence[int]) -> dict:
    """``stratum``: one exponent per index of the support, in increasing
    order; ``lower``: a single exponent N."""
    params = cfg.params()
    wt = _weight(cfg, k, w)
    try:
        t = Term(wt, tuple(M))
        if len(t.orders) != params.g:
            raise ValueError(f"M has {len(M)} entries, expected g={params.g}")
        if kind == "stratum":
            J = sorted(t.support)
            if len(exponents) != len(J):
                raise ValueError(f"support {J} needs {len(J)} exponents, got {len(exponents)}")
            b = stratum_bracket(params, t, dict(zip(J, exponents)))
        elif kind == "lower":
            if len(exponents) != 1:
                raise ValueError("the lower bracket takes a single exponent N")
            b = lower_bracket(params, t, exponents[0])
        else:
            raise ValueError(f"unknown kind {kind!r}")
    except ValueError as exc:
        raise CliError(EXIT_DOMAIN, str(exc)) from None
    cx = b.complex
    cx.metadata = {"source": t, "augmentation": b.in_map, "kind": kind}
    return ser.complex_to_dict(cx)


BUILTIN_GROUPS = {
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "S3": lambda: symmetric_group(3),
    "D4": lambda: dihedral_group(4),
}


def _group(spec: str) -> FiniteGroup:
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in BUILTIN_GROUPS:
            raise CliError(EXIT_DOMAIN, f"unknown builtin group {name!r}; have {sorted(BUILTIN_GROUPS)}")
        return BUILTIN_GROUPS[name]()
    try:
        return ser.group_from_dict(_read_json(spec))
    except ser.ParseError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None


def cmd_pseudorep(cfg: RunConfig, sub: str, group: FiniteGroup, payload: Optional[dict] = None,
                  d: Optional[int] = None) -> dict:
    q = cfg.p**cfg.m
    try:
        if sub == "check":
            vals = ser.values_by_name(group, ser._need(payload, "values"))
            p = payload.get("p", cfg.p)
            m = payload.get("m", cfg.m)
            dd = d if d is not None else payload.get("d", 2)
            tau = PseudoRep(group, vals, dd, p, m)
            verdict = check_pseudo_rep(tau, seed=cfg.seed)
            return {"verdict": verdict.as_dict(), "tau": dict(zip(group.elements, tau.values))}
        if sub == "from-rep":
            mats = ser._need(payload, "matrices")
            if isinstance(mats, dict):
                missing = [e for e in group.elements if e not in mats]
                if missing:
                    raise ser.ParseError(f"missing matrices for {missing}")
                mats = [mats[e] for e in group.elements]
            p = payload.get("p", cfg.p)
            m = payload.get("m", cfg.m)
            tau = trace_of_rep(group, mats, p, m)
            verdict = check_pseudo_rep(tau, seed=cfg.seed)
            return {"verdict": verdict.as_dict(), "tau": dict(zip(group.elements, tau.values))}
        if sub == "relations":
            rels = universal_ring_relations(group)
            out = {"group_order": group.order, "relations": [format_poly(r, group) for r in rels]}
            e = group.identity
            reduced = []
            for r in rels:
                s = substitute(r, {e: 2})
                txt = format_poly(s, group)
                if s and txt not in reduced:
                    reduced.append(txt)
            out["reduced_t1_eq_2"] = reduced
            if payload is not None and "values" in payload:
                vals = ser.values_by_name(group, payload["values"])
                out["residuals"] = evaluate_relations(rels, vals, q)
            return out
    except ser.ParseError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from None
    except ValueError as exc:
        raise CliError(EXIT_DOMAIN, str(exc)) from None
    raise CliError(EXIT_DOMAIN, f"unknown pseudorep subcommand {sub!r}")


def _jobs_default() -> int:
    env = os.environ.get("FAVRES_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3)
    common.add_argument("--g", type=int, default=2)
    common.add_argument("--m", type=int, default=1)
    common.add_argument("--threshold", type=int, default=5, help="Delta_w threshold")
    common.add_argument("--budget", type=int, default=None, help="exponent search budget")
    common.add_argument("--box", type=str, default=None, help="verification box, e.g. 5,5,5")
    common.add_argument("--out", type=str, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=None, help="worker processes (env FAVRES_JOBS)")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="favres", description="Favorable resolutions and pseudo-representations")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("resolve", parents=[common], help="favorable resolution of omega^(k,w)")
    r.add_argument("--k", required=True)
    r.add_argument("--w", type=int, required=True)

    v = sub.add_parser("verify", parents=[common], help="strandwise check of a complex JSON")
    v.add_argument("input")
    v.add_argument("--mode", choices=["exactness", "quasi-iso"], default="exactness")
    v.add_argument("--exhaustive", action="store_true")

    kz = sub.add_parser("koszul", parents=[common], help="emit a stratum or lower bracket")
    kz.add_argument("--kind", choices=["stratum", "lower"], required=True)
    kz.add_argument("--k", required=True)
    kz.add_argument("--w", type=int, required=True)
    kz.add_argument("--M", required=True, help="vanishing orders")
    kz.add_argument("--exponents", required=True, help="N_j for j in the support, or N")

    ps = sub.add_parser("pseudorep", parents=[common], help="pseudo-representation tools")
    ps.add_argument("sub", choices=["check", "relations", "from-rep"])
    ps.add_argument("--group", required=True, help="group JSON path or builtin:S3|D4|Z2|Z3")
    ps.add_argument("--tau", help="JSON with values (check; optional for relations)")
    ps.add_argument("--rep", help="JSON with matrices (from-rep)")
    ps.add_argument("--d", type=int, default=None)
    return ap


def _config(args) -> RunConfig:
    jobs = args.jobs if args.jobs is not None else _jobs_default()
    box = _int_list(args.box) if args.box else None
    return RunConfig(args.p, args.g, args.m, args.threshold, args.budget, box, args.out, args.seed, jobs)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        if args.command == "resolve":
            _emit(cfg, cmd_resolve(cfg, _int_list(args.k), args.w))
            return EXIT_OK
        if args.command == "verify":
            report = cmd_verify(cfg, _read_json(args.input), args.mode, args.exhaustive)
            _emit(cfg, report)
            return EXIT_OK if report["exact"] else EXIT_FAILED
        if args.command == "koszul":
            _emit(cfg, cmd_koszul(cfg, args.kind, _int_list(args.k), args.w, _int_list(args.M),
                                  _int_list(args.exponents)))
            return EXIT_OK
        if args.command == "pseudorep":
            group = _group(args.group)
            path = args.tau if args.sub != "from-rep" else args.rep
            if args.sub in ("check", "from-rep") and not path:
                raise CliError(EXIT_PARSE, f"pseudorep {args.sub} needs --{'tau' if args.sub == 'check' else 'rep'}")
            payload = _read_json(path) if path else None
            out = cmd_pseudorep(cfg, args.sub, group, payload, args.d)
            _emit(cfg, out)
            if "verdict" in out:
                return EXIT_OK if out["verdict"]["status"] == "valid" else EXIT_FAILED
            if "residuals" in out and any(out["residuals"]):
                return EXIT_FAILED
            return EXIT_OK
    except CliError as exc:
        sys.stderr.write(f"favres: {exc}\n")
        return exc.code
    return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
