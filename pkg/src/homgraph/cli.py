"""Command line front end.

Exit codes: 0 success (refuted claims are results, not failures),
1 usage or bad input, 2 size cap exceeded, 3 internal inconsistency
(solver/oracle disagreement or a broken invariant).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

from . import claims, graphkit, homcore, lattice as lattice_mod, modcore
from .errors import (
    CapExceeded,
    HomgraphError,
    InternalInconsistency,
    SpecError,
)
from .modcore import Caps, DEFAULT_CAPS, RingSpec

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAP = 2
EXIT_INTERNAL = 3

_RING_ALIASES = {
    "zmod": modcore.ZMOD,
    "field": modcore.PRIME_FIELD,
    "prod": modcore.PRODUCT_FIELD,
    "kxy": modcore.LOCAL_SQUARE_ZERO,
}

# (alias, p, k, bound) for the stock verify run
_DEFAULT_ZOOS = (
    ("zmod", 2, 2, 4),
    ("field", 2, 1, 3),
    ("prod", 2, 1, 2),
    ("kxy", 2, 1, 2),
)

_DEFAULT_BOUNDS = {"zmod": 4, "field": 3, "prod": 2, "kxy": 2}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; route that through the usage code."""

    def error(self, message):
        raise SpecError(message)


def _add_caps_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-module-order", type=int, default=None,
                   help="largest |M| accepted (default %d)" % DEFAULT_CAPS.max_module_order)
    p.add_argument("--max-lattice", type=int, default=None,
                   help="largest submodule count (default %d)" % DEFAULT_CAPS.max_lattice_nodes)
    p.add_argument("--max-spectrum", type=int, default=None,
                   help="largest dense eigensolve (default %d)" % DEFAULT_CAPS.max_spectrum)
    p.add_argument("--tol", type=float, default=None,
                   help="numeric tolerance (default %g)" % DEFAULT_CAPS.tol)


def _caps_from(args) -> Caps:
    updates = {}
    if args.max_module_order is not None:
        updates["max_module_order"] = args.max_module_order
    if args.max_lattice is not None:
        updates["max_lattice_nodes"] = args.max_lattice
    if args.max_spectrum is not None:
        updates["max_spectrum"] = args.max_spectrum
    if args.tol is not None:
        if args.tol <= 0:
            raise SpecError("--tol must be positive")
        updates["tol"] = args.tol
    for key, val in updates.items():
        if key != "tol" and val <= 0:
            raise SpecError(f"--{key.replace('_', '-')} must be positive")
    return dataclasses.replace(DEFAULT_CAPS, **updates) if updates else DEFAULT_CAPS


def _ring_from(args) -> RingSpec:
    kind = _RING_ALIASES[args.ring]
    k = args.kk if kind == modcore.ZMOD else 1
    return RingSpec(kind, args.p, k)


def _prepared(spec: str, caps: Caps):
    m = modcore.parse_module_spec(spec, caps)
    lat = lattice_mod.enumerate_submodules(m, caps)
    g = graphkit.build_graph(m, lat, caps)
    return m, lat, g


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------


def cmd_analyze(args) -> int:
    caps = _caps_from(args)
    m, lat, g = _prepared(args.spec, caps)
    if args.json:
        sys.stdout.write(graphkit.export_graph(g, "json", caps))
        return EXIT_OK
    if args.dot:
        sys.stdout.write(graphkit.export_graph(g, "dot", caps))
        return EXIT_OK
    props = graphkit.graph_properties(g, caps)
    lam = graphkit.spectrum(g, caps).lambda_max
    print(f"module:      {modcore.spec_string(m)}")
    print(f"ring:        {m.ring.describe()}")
    print(f"order:       {m.size}")
    print(f"length:      {modcore.composition_length(m)}")
    print(f"submodules:  {len(lat.nodes)} ({g.n} proper)")
    print(f"uniserial:   {lattice_mod.is_uniserial(lat)}")
    print(f"semisimple:  {modcore.is_semisimple(m)}")
    print(f"complete:    {props['complete']}")
    print(f"connected:   {props['connected']}")
    print(f"diameter:    {props['diameter']}")
    print(f"chordal:     {props['chordal']}")
    print(f"tree:        {props['tree']}")
    print(f"regular:     {props['regular']}")
    print(f"universal:   {len(props['universal_vertices'])} vertices")
    print(f"lambda_max:  {lam:.6f}")
    return EXIT_OK


def cmd_graph(args) -> int:
    caps = _caps_from(args)
    _, _, g = _prepared(args.spec, caps)
    text = graphkit.export_graph(g, args.format, caps)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    caps = _caps_from(args)
    _, _, g = _prepared(args.spec, caps)
    rep = graphkit.spectrum(g, caps)
    bound = math.sqrt(max(g.n - 1, 0))
    ok = rep.lambda_max + caps.tol >= bound
    if args.json:
        payload = {
            "eigenvalues": list(rep.eigenvalues),
            "lambda_max": rep.lambda_max,
            "partial": rep.partial,
            "t": g.n,
            "sqrt_bound": bound,
            "bound_satisfied": ok,
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return EXIT_OK
    if rep.partial:
        print("eigenvalues: (lambda_max only, matrix over dense cap)")
    else:
        print("eigenvalues:", " ".join(f"{v:.6f}" for v in rep.eigenvalues))
    print(f"lambda_max:  {rep.lambda_max:.6f}")
    print(f"bound:       sqrt({g.n} - 1) = {bound:.6f} -> "
          f"{'satisfied' if ok else 'VIOLATED'}")
    return EXIT_OK


def cmd_homtest(args) -> int:
    caps = _caps_from(args)
    a = modcore.parse_module_spec(args.source, caps)
    b = modcore.parse_module_spec(args.target, caps)
    if a.ring != b.ring:
        raise SpecError("hom test needs both modules over the same ring")
    solver = homcore.hom_structure(a, b)
    print(f"Hom({modcore.spec_string(a)}, {modcore.spec_string(b)})")
    print(f"solver invariant factors: {solver.invariant_factors or '0'}")
    try:
        oracle = homcore.hom_oracle(a, b, caps)
    except CapExceeded as exc:
        print(f"oracle skipped: {exc}")
        return EXIT_OK
    print(f"oracle invariant factors: {oracle.invariant_factors or '0'}")
    if solver.invariant_factors != oracle.invariant_factors:
        raise InternalInconsistency(
            f"solver {solver.invariant_factors} vs oracle {oracle.invariant_factors}")
    print("agreement: ok")
    return EXIT_OK


def _selected_zoos(args, caps: Caps) -> list[claims.ModuleZoo]:
    if args.ring is None:
        out = []
        for alias, p, k, bound in _DEFAULT_ZOOS:
            ring = RingSpec(_RING_ALIASES[alias], p, k)
            out.append(claims.enumerate_zoo(ring, bound, caps))
        return out
    ring = _ring_from(args)
    bound = args.bound if args.bound is not None else _DEFAULT_BOUNDS[args.ring]
    return [claims.enumerate_zoo(ring, bound, caps)]


def _emit_verdicts(verdicts, out_dir, show_witnesses: bool) -> None:
    for v in verdicts:
        print(f"{v.claim_id:<34} {v.status:<15} instances={v.instances_checked:<4} "
              f"witnesses={len(v.witnesses)}")
        if show_witnesses:
            for w in v.witnesses:
                mods = ", ".join(w.modules) if w.modules else "-"
                print(f"    {mods}: {w.detail}")
    if out_dir is not None:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / "verdicts.json").write_text(claims.verdicts_to_json(verdicts))
        (path / "verdicts.csv").write_text(claims.verdicts_to_csv(verdicts))
        print(f"wrote {path / 'verdicts.json'} and {path / 'verdicts.csv'}")


def cmd_verify(args) -> int:
    caps = _caps_from(args)
    zoos = _selected_zoos(args, caps)
    only = set(args.claims.split(",")) if args.claims else None
    verdicts = claims.run_claim_suite(zoos, caps, only)
    _emit_verdicts(verdicts, args.out, args.witnesses)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    caps = _caps_from(args)
    zoos = _selected_zoos(args, caps)
    verdicts = claims.run_claim_suite(zoos, caps, {"reconstruction-artinian-local"})
    _emit_verdicts(verdicts, args.out, True)
    return EXIT_OK


# ----------------------------------------------------------------------
# wiring
# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="homgraph",
                     description="Build and analyze homomorphism submodule graphs "
                                 "of finite modules.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[], help="report one module's graph")
    p.add_argument("spec", help="module spec, e.g. zmod:p=2,k=2,type=[2,1]")
    p.add_argument("--json", action="store_true", help="emit the graph as JSON")
    p.add_argument("--dot", action="store_true", help="emit the graph as DOT")
    _add_caps_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("graph", help="export the graph")
    p.add_argument("spec")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--out", default=None, help="write to a file instead of stdout")
    _add_caps_flags(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("spectrum", help="adjacency eigenvalues")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true")
    _add_caps_flags(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("homtest", help="solver vs oracle on one Hom group")
    p.add_argument("source")
    p.add_argument("target")
    _add_caps_flags(p)
    p.set_defaults(func=cmd_homtest)

    for name, fn, blurb in (
        ("verify", cmd_verify, "run the claim suite over module zoos"),
        ("reconstruct", cmd_reconstruct,
         "verify restricted to the graph-reconstruction claim"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--ring", choices=sorted(_RING_ALIASES), default=None,
                       help="single ring family (default: all four stock zoos)")
        p.add_argument("--p", type=int, default=2, help="prime (default 2)")
        p.add_argument("--kk", type=int, default=2,
                       help="exponent k for zmod (default 2)")
        p.add_argument("--bound", type=int, default=None,
                       help="zoo size bound (per-ring default)")
        p.add_argument("--out", default=None,
                       help="directory for verdicts.json / verdicts.csv")
        if name == "verify":
            p.add_argument("--claims", default=None,
                           help="comma-separated claim ids to run")
            p.add_argument("--witnesses", action="store_true",
                           help="print witness details")
        _add_caps_flags(p)
        p.set_defaults(func=fn)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except HomgraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
