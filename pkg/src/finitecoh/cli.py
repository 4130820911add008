"""Command-line entry point.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage or
parse error, 3 a computation exceeded the resource bound.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .cohomology import ResourceBoundError, cohomology_group
from .gmodules import module_from_json, module_from_name
from .groups import GroupAxiomError, catalog, get_group, group_from_json
from .harness import DEFAULT_N_LIST, SweepConfig, certify_propdata, selftest, verify_structure
from .sha import propdata_certificate, sha1_omega

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

# the structural sweep builds degree-3 cochains; order 12 costs minutes per cell
STRUCTURE_DEFAULT_MAX_ORDER = 8
STRUCTURE_DEFAULT_N_LIST = (2, 3, 4, 8)


class UsageError(Exception):
    pass


def parse_group(text: str):
    """A catalog name, a path to a JSON file, or inline JSON."""
    try:
        if text.lstrip().startswith("{"):
            return group_from_json(text)
        if os.path.isfile(text):
            with open(text) as fh:
                return group_from_json(fh.read())
        return get_group(text)
    except (KeyError, ValueError, GroupAxiomError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read group {text!r}: {exc}") from exc


def parse_module(G, text: str, n: int):
    """A module name (trivial, regular, H, Hprime, induced:..., dual:...) or JSON."""
    try:
        if text.lstrip().startswith("{"):
            return module_from_json(G, text)
        if os.path.isfile(text):
            with open(text) as fh:
                return module_from_json(G, fh.read())
        return module_from_name(G, text, n)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read module {text!r}: {exc}") from exc


def parse_n_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(f"bad --n-list {text!r}") from exc
    if not values or any(v < 1 for v in values):
        raise UsageError(f"--n-list needs positive integers, got {text!r}")
    return values


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def cmd_hr(args) -> int:
    G = parse_group(args.group)
    M = parse_module(G, args.module, args.n)
    H = cohomology_group(G, M, args.degree, args.resource_bound)
    payload = {"group": G.name, "module": M.name, "n": M.n, "degree": args.degree,
               "invariant_factors": list(H.invariant_factors), "order": H.order}
    if args.generators:
        payload["generators"] = [z.table.tolist() for z in H.generators]
    _emit(payload, args.out)
    return EXIT_OK


def cmd_sha(args) -> int:
    G = parse_group(args.group)
    if args.module in ("Hprime", "H'"):
        cert = propdata_certificate(G, args.n, args.resource_bound)
        _emit(cert.to_json(), args.out)
        return EXIT_OK if cert.ok else EXIT_FAIL
    M = parse_module(G, args.module, args.n)
    S = sha1_omega(G, M, args.resource_bound)
    _emit({"group": G.name, "module": M.name, "n": M.n,
           "invariant_factors": list(S.subgroup.invariant_factors),
           "h1_invariant_factors": list(S.ambient.invariant_factors),
           "generators": [list(x.coords) for x in S.generators]}, args.out)
    return EXIT_OK


def _sweep_config(args, max_order: int, n_list) -> SweepConfig:
    return SweepConfig(
        max_group_order=args.max_order if args.max_order is not None else max_order,
        n_list=parse_n_list(args.n_list) if args.n_list else n_list,
        degree_cap=args.degree if args.degree is not None else 2,
        resource_bound=args.resource_bound,
        output_path=args.out,
        groups=tuple(args.group) if args.group else None,
        jobs=args.jobs,
    )


def _finish(report, args) -> int:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.dumps() + "\n")
    print(report.dumps() if args.json else report.table())
    return EXIT_OK if report.ok else EXIT_FAIL


def _check_group_names(names):
    for name in names or ():
        try:
            get_group(name)
        except KeyError as exc:
            raise UsageError(str(exc)) from exc


def cmd_certify(args) -> int:
    _check_group_names(args.group)
    return _finish(certify_propdata(_sweep_config(args, 12, DEFAULT_N_LIST)), args)


def cmd_verify(args) -> int:
    _check_group_names(args.group)
    config = _sweep_config(args, STRUCTURE_DEFAULT_MAX_ORDER, STRUCTURE_DEFAULT_N_LIST)
    return _finish(verify_structure(config), args)


def cmd_selftest(args) -> int:
    return _finish(selftest(seed=args.seed, mutate=args.mutate), args)


def cmd_group_list(args) -> int:
    rows = [{"name": name, "order": G.size, "exponent": G.exponent, "abelian": G.is_abelian}
            for name, G in catalog(args.max_order).items()]
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        for r in rows:
            print(f"{r['name']:12} order {r['order']:3}  exponent {r['exponent']:3}  "
                  f"{'abelian' if r['abelian'] else 'non-abelian'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finitecoh", description="Finite group cohomology over Z/n.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--resource-bound", type=int, default=None,
                        help="max |G|^(r+1) * rank for any cochain space")
        sp.add_argument("--out", default=None, help="also write the JSON result here")

    hr = sub.add_parser("hr", help="invariant factors of H^r(G, M)")
    hr.add_argument("--group", required=True)
    hr.add_argument("--module", default="trivial")
    hr.add_argument("--n", type=int, required=True)
    hr.add_argument("--degree", type=int, required=True)
    hr.add_argument("--generators", action="store_true", help="include cocycle tables")
    common(hr)
    hr.set_defaults(func=cmd_hr)

    sh = sub.add_parser("sha", help="classes of H^1 vanishing on all cyclic subgroups")
    sh.add_argument("--group", required=True)
    sh.add_argument("--module", default="Hprime")
    sh.add_argument("--n", type=int, required=True)
    common(sh)
    sh.set_defaults(func=cmd_sha)

    for name, func, help_ in (
        ("certify-propdata", cmd_certify, "closed-form check of the H' kernel over the catalog"),
        ("verify-structure", cmd_verify, "duality, exactness, Shapiro and cup checks"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--max-order", type=int, default=None)
        sp.add_argument("--n-list", default=None, help="comma separated moduli")
        sp.add_argument("--degree", type=int, default=None, help="degree cap (default 2)")
        sp.add_argument("--group", action="append", help="restrict to these catalog groups")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--json", action="store_true", help="print JSON instead of a table")
        common(sp)
        sp.set_defaults(func=func)

    st = sub.add_parser("selftest", help="property suites at a fixed seed")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--mutate", action="store_true", help="corrupt the coboundary on purpose")
    st.add_argument("--json", action="store_true")
    st.add_argument("--out", default=None)
    st.set_defaults(func=cmd_selftest)

    gr = sub.add_parser("group", help="group catalog")
    gsub = gr.add_subparsers(dest="group_command", required=True)
    gl = gsub.add_parser("list", help="list catalog groups")
    gl.add_argument("--max-order", type=int, default=12)
    gl.add_argument("--json", action="store_true")
    gl.set_defaults(func=cmd_group_list)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"finitecoh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBoundError as exc:
        print(f"finitecoh: resource bound exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"finitecoh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
