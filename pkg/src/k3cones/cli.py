"""Command-line front end: ``k3cones <group> <command> [options]``.

Matrices and vectors are given inline as bracketed integer literals, for
example ``--gram "[[4,6],[6,4]]"``, or through ``--*-file`` options naming a
JSON file. Exit status is 0 on success, 1 when ``verify`` reports a failed
check and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import exact
from .chow import ChowParseError, base_curve_class, curve_genus, fiber_gram, top_value
from .cone import (
    Cone,
    cone_from_facets,
    cone_from_rays,
    covers,
    dual,
    equal,
    member,
    quotient_image,
)
from .dirichlet import dirichlet_domain, dirichlet_halfspaces, enumerate_words, permutation_matrices
from .lattice import (
    IntLattice,
    certify_no_norm,
    disc_action,
    discriminant_group,
    element_order,
    eval_form,
    find_norm_vectors,
    is_isometry,
    positive_cone_boundary,
    torelli_check,
    translation_isometry,
)
from .scenarios import SECTIONS, ScenarioError, _load_chow, builtin_names, load_scenario, verify


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, (tuple, list)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _check_ints(v, what: str):
    if isinstance(v, list):
        for x in v:
            _check_ints(x, what)
    elif isinstance(v, bool) or not isinstance(v, int):
        raise UsageError(f"{what}: expected integers, got {v!r}")


def _literal(text: str, what: str):
    try:
        v = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{what}: cannot parse {text!r} ({e.msg})") from None
    _check_ints(v, what)
    return v


def _vector(text: str, what: str) -> tuple[int, ...]:
    v = _literal(text, what)
    if not isinstance(v, list) or any(isinstance(x, list) for x in v):
        raise UsageError(f"{what}: expected a vector like [1,2,3]")
    return tuple(v)


def _matrix(text: str, what: str) -> tuple:
    v = _literal(text, what)
    if not isinstance(v, list) or not all(isinstance(r, list) for r in v):
        raise UsageError(f"{what}: expected a matrix like [[1,0],[0,1]]")
    return tuple(tuple(r) for r in v)


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text("utf-8"))
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e.msg})") from None


def _matrix_file(path: str, key: str) -> tuple:
    data = _read_json(path)
    if isinstance(data, dict):
        if key not in data:
            raise UsageError(f"{path}: expected an array or an object with key {key!r}")
        data = data[key]
    _check_ints(data, path)
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise UsageError(f"{path}: expected an array of integer arrays")
    return tuple(tuple(r) for r in data)


def _lattice(args) -> IntLattice:
    return IntLattice(_matrix(args.gram, "--gram"))


# ------------------------------------------------------------------ chow


def _ring(args):
    if args.builtin:
        s = load_scenario(args.builtin)
        if s.chow is None:
            raise UsageError(f"builtin {args.builtin!r} has no Chow ring data")
        ring, H = s.chow, s.H
    elif args.ring:
        text = args.ring
        data = _read_json(text) if Path(text).exists() else _literal_obj(text)
        data = dict(data)
        data.setdefault("H", " + ".join(data.get("vars", [])) or "0")
        ring, H = _load_chow(data, "ring")
    else:
        raise UsageError("give --ring or --builtin")
    if getattr(args, "H", None):
        H = ring.parse(args.H)
    return ring, H


def _literal_obj(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"--ring: neither a file nor valid JSON ({e.msg})") from None


def cmd_chow_eval(args):
    ring, _ = _ring(args)
    c = ring.parse(args.expr)
    print(c)
    if c.terms and c.degrees == {ring.dim}:
        print(f"degree {top_value(c)}")


def cmd_chow_gram(args):
    ring, H = _ring(args)
    for row in fiber_gram(ring, ring.gens(), H):
        print(_fmt(row))


def cmd_chow_curve(args):
    ring, H = _ring(args)
    print(base_curve_class(ring, H))


def cmd_chow_genus(args):
    ring, H = _ring(args)
    print(curve_genus(ring, H))


# ------------------------------------------------------------------ lattice


def cmd_lattice_form(args):
    L = _lattice(args)
    x = _vector(args.x, "--x")
    y = _vector(args.y, "--y") if args.y else None
    print(eval_form(L, x, y))


def cmd_lattice_disc(args):
    L = _lattice(args)
    D = discriminant_group(L)
    print(f"factors {_fmt(D.factors)}; order {D.order}")
    for d, g in zip(D.factors, D.generators):
        print(f"  Z/{d}: {_fmt(g)}")
    if args.matrix:
        action, kind = disc_action(L, _matrix(args.matrix, "--matrix"))
        print(f"action {_fmt(action)}: {kind}")


def cmd_lattice_isometry(args):
    ok = is_isometry(_lattice(args), _matrix(args.matrix, "--matrix"))
    print("isometry" if ok else "not an isometry")


def cmd_lattice_order(args):
    print(element_order(_matrix(args.matrix, "--matrix")))


def cmd_lattice_minus_two(args):
    L = _lattice(args)
    found = find_norm_vectors(L, args.norm, args.bound)
    if found:
        print(f"{len(found)} solutions within bound {args.bound}")
        for v in found:
            print(f"  {_fmt(v)}")
        return
    msg = "no solutions"
    if args.certify:
        m = certify_no_norm(L, args.norm, args.certify)
        msg += f"; certificate mod {m}" if m is not None else f"; no certificate up to mod {args.certify}"
    else:
        msg += f" within bound {args.bound}"
    print(msg)


def cmd_lattice_boundary(args):
    lo, hi = positive_cone_boundary(_lattice(args))
    print("a/b = " + ", ".join("infinite" if t is None else str(t) for t in (lo, hi)))


def cmd_lattice_translation(args):
    T = translation_isometry(_lattice(args), _vector(args.f, "--f"), _vector(args.y, "--y"))
    for row in T:
        print(_fmt(row))


def cmd_lattice_torelli(args):
    nodal = _matrix(args.nodal, "--nodal") if args.nodal else ()
    print(torelli_check(_lattice(args), _matrix(args.matrix, "--matrix"), nodal))


# ------------------------------------------------------------------ cone


def _cone(args, prefix: str = "") -> Cone:
    rays = getattr(args, prefix + "rays")
    rays_file = getattr(args, prefix + "rays_file")
    facets = getattr(args, prefix + "facets")
    facets_file = getattr(args, prefix + "facets_file")
    given = [x for x in (rays, rays_file, facets, facets_file) if x]
    flag = "--" + prefix.replace("_", "-")
    if len(given) != 1:
        raise UsageError(f"give exactly one of {flag}rays, {flag}rays-file, {flag}facets, {flag}facets-file")
    dim = getattr(args, "dim", None)
    if rays or rays_file:
        m = _matrix(rays, flag + "rays") if rays else _matrix_file(rays_file, "rays")
        return cone_from_rays(m, dim)
    m = _matrix(facets, flag + "facets") if facets else _matrix_file(facets_file, "facets")
    return cone_from_facets(m, dim)


def _print_cone(C: Cone):
    print("rays:")
    for r in C.rays:
        print(f"  {_fmt(r)}")
    if C.lineality:
        print("lineality:")
        for r in C.lineality:
            print(f"  {_fmt(r)}")
    print("facets:")
    for f in C.facets:
        print(f"  {_fmt(f)}")
    if C.equations:
        print("equations:")
        for e in C.equations:
            print(f"  {_fmt(e)}")


def cmd_cone_rays(args):
    C = _cone(args)
    for r in C.rays:
        print(_fmt(r))
    for r in C.lineality:
        print(f"{_fmt(r)} (lineality)")


def cmd_cone_facets(args):
    C = _cone(args)
    for f in C.facets:
        print(_fmt(f))
    for e in C.equations:
        print(f"{_fmt(e)} (equation)")


def cmd_cone_member(args):
    C = _cone(args)
    print("member" if member(C, _vector(args.vector, "--vector")) else "not a member")


def cmd_cone_dual(args):
    C = _cone(args)
    P = _matrix(args.pairing, "--pairing") if args.pairing else None
    _print_cone(dual(C, P))


def cmd_cone_equal(args):
    print("equal" if equal(_cone(args), _cone(args, "other_")) else "different")


def cmd_cone_quotient(args):
    _print_cone(quotient_image(_cone(args), _matrix(args.matrix, "--matrix")))


def cmd_cone_cover(args):
    target = _cone(args)
    pieces = [cone_from_rays(_matrix(p, "--piece")) for p in args.piece or []]
    if args.pieces_file:
        data = _read_json(args.pieces_file)
        if not isinstance(data, list):
            raise UsageError(f"{args.pieces_file}: expected an array of ray lists")
        for p in data:
            _check_ints(p, args.pieces_file)
            pieces.append(cone_from_rays(p))
    if not pieces:
        raise UsageError("give at least one --piece or --pieces-file")
    v = covers(target, pieces)
    if v.covered:
        print(f"covered ({v.cells} cells)")
    else:
        print(f"not covered; witness {_fmt(v.witness)}")


# ------------------------------------------------------------------ domain


def _generators(args) -> list:
    gens = []
    for g in args.gen or []:
        label, sep, text = g.partition("=")
        if not sep or not label:
            raise UsageError(f"--gen expects LABEL=MATRIX, got {g!r}")
        gens.append((label, _matrix(text, f"--gen {label}")))
    if args.permutations:
        gens.extend(permutation_matrices(args.permutations))
    if not gens:
        raise UsageError("give at least one --gen or --permutations")
    return gens


def cmd_domain_words(args):
    ws = enumerate_words(_generators(args), args.k, not args.no_inverses)
    print(f"{len(ws)} matrices")
    if args.verbose:
        for m, w in zip(ws.matrices, ws.words):
            print(f"  {'*'.join(w) or 'I'}: {_fmt(m)}")


def cmd_domain_halfspaces(args):
    L = _lattice(args)
    ws = enumerate_words(_generators(args), args.k, not args.no_inverses)
    for n in dirichlet_halfspaces(L, _vector(args.x, "--x"), ws.matrices):
        print(_fmt(n))


def cmd_domain_compute(args):
    L = _lattice(args)
    D = dirichlet_domain(L, _vector(args.x, "--x"), _generators(args), args.k, not args.no_inverses)
    if D.improper:
        print("improper: no constraints, the whole space")
        return
    print(f"{len(D.normals)} halfspaces")
    print("rays:")
    for r in D.rays:
        flag = "  outside the positive cone" if r in D.outside_positive else ""
        print(f"  {_fmt(r)} (square {eval_form(L, r)}){flag}")


# ------------------------------------------------------------------ verify


def cmd_verify(args) -> int:
    if args.list:
        for n in builtin_names():
            print(n)
        return 0
    if bool(args.builtin) == bool(args.file):
        raise UsageError("give exactly one of --builtin NAME or FILE")
    if args.builtin and args.builtin not in builtin_names():
        raise UsageError(f"unknown builtin {args.builtin!r}; choose from {', '.join(builtin_names())}")
    s = load_scenario(args.builtin or args.file)
    report = verify(s, args.section)
    print(report.to_json() if args.format == "json" else report.to_text())
    return 0 if report.passed else 1


# ------------------------------------------------------------------ parser


def _cone_opts(p, prefix: str = "", dim: bool = True):
    flag = "--" + prefix
    p.add_argument(flag + "rays", help="inline ray matrix")
    p.add_argument(flag + "rays-file", help="JSON file with rays")
    p.add_argument(flag + "facets", help="inline inequality normals (f.y >= 0)")
    p.add_argument(flag + "facets-file", help="JSON file with inequality normals")
    if dim:
        p.add_argument("--dim", type=int, help="ambient dimension (needed for empty input)")


def _gen_opts(p):
    p.add_argument("--gen", action="append", metavar="LABEL=MATRIX", help="group generator (repeatable)")
    p.add_argument("--permutations", type=int, metavar="N", help="add all N x N permutation matrices")
    p.add_argument("--k", type=int, required=True, help="maximal word length")
    p.add_argument("--no-inverses", action="store_true", help="do not add generator inverses")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="k3cones", description="Exact cone, lattice and intersection computations.")
    groups = ap.add_subparsers(dest="group", required=True)

    chow = groups.add_parser("chow", help="intersection numbers in monomial Chow rings").add_subparsers(
        dest="command", required=True
    )
    for name, fn, hlp in [
        ("eval", cmd_chow_eval, "expand and reduce an expression"),
        ("gram", cmd_chow_gram, "fiber Gram matrix of the ring generators"),
        ("curve", cmd_chow_curve, "base curve class H^(n-1)"),
        ("genus", cmd_chow_genus, "genus of the base curve"),
    ]:
        p = chow.add_parser(name, help=hlp)
        p.add_argument("--ring", help="ring as JSON (inline or file): vars, dim, relations, valuation[, H]")
        p.add_argument("--builtin", help="use the ring of a builtin scenario")
        if name == "eval":
            p.add_argument("expr")
        else:
            p.add_argument("--H", help="override the polarization H")
        p.set_defaults(func=fn)

    lat = groups.add_parser("lattice", help="integer lattice operations").add_subparsers(dest="command", required=True)
    p = lat.add_parser("form", help="evaluate x.y")
    p.add_argument("--gram", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y")
    p.set_defaults(func=cmd_lattice_form)
    p = lat.add_parser("disc", help="discriminant group, optionally with an isometry's action")
    p.add_argument("--gram", required=True)
    p.add_argument("--matrix")
    p.set_defaults(func=cmd_lattice_disc)
    p = lat.add_parser("isometry", help="test M^T G M == G")
    p.add_argument("--gram", required=True)
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_lattice_isometry)
    p = lat.add_parser("order", help="finite or infinite order of a unimodular matrix")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_lattice_order)
    p = lat.add_parser("minus-two", help="search for vectors of a given norm, with a modular certificate")
    p.add_argument("--gram", required=True)
    p.add_argument("--bound", type=int, default=10)
    p.add_argument("--norm", type=int, default=-2)
    p.add_argument("--certify", type=int, metavar="MAX_MODULUS")
    p.set_defaults(func=cmd_lattice_minus_two)
    p = lat.add_parser("boundary", help="isotropic slopes of a rank 2 lattice")
    p.add_argument("--gram", required=True)
    p.set_defaults(func=cmd_lattice_boundary)
    p = lat.add_parser("translation", help="translation isometry along an isotropic vector")
    p.add_argument("--gram", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_lattice_translation)
    p = lat.add_parser("torelli", help="lattice-side Torelli verdict")
    p.add_argument("--gram", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--nodal", help="matrix whose rows are the nodal classes")
    p.set_defaults(func=cmd_lattice_torelli)

    cone = groups.add_parser("cone", help="polyhedral cones").add_subparsers(dest="command", required=True)
    for name, fn, hlp in [
        ("rays", cmd_cone_rays, "extreme rays"),
        ("facets", cmd_cone_facets, "irredundant inequalities"),
        ("member", cmd_cone_member, "membership test"),
        ("dual", cmd_cone_dual, "dual cone"),
        ("equal", cmd_cone_equal, "compare two cones"),
        ("quotient", cmd_cone_quotient, "image under a surjection"),
        ("cover", cmd_cone_cover, "decide coverage by a union of cones"),
    ]:
        p = cone.add_parser(name, help=hlp)
        _cone_opts(p)
        if name == "member":
            p.add_argument("--vector", required=True)
        elif name == "dual":
            p.add_argument("--pairing", help="pairing matrix P, <x,y> = x^T P y")
        elif name == "equal":
            _cone_opts(p, "other-", dim=False)
        elif name == "quotient":
            p.add_argument("--matrix", required=True)
        elif name == "cover":
            p.add_argument("--piece", action="append", help="inline ray matrix of a piece (repeatable)")
            p.add_argument("--pieces-file", help="JSON array of ray matrices")
        p.set_defaults(func=fn)

    dom = groups.add_parser("domain", help="word enumeration and Dirichlet domains").add_subparsers(
        dest="command", required=True
    )
    p = dom.add_parser("words", help="count (and list) group elements of bounded word length")
    _gen_opts(p)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_domain_words)
    for name, fn in [("halfspaces", cmd_domain_halfspaces), ("compute", cmd_domain_compute)]:
        p = dom.add_parser(name)
        p.add_argument("--gram", required=True)
        p.add_argument("--x", required=True)
        _gen_opts(p)
        p.set_defaults(func=fn)

    p = groups.add_parser("verify", help="run the checks of a scenario")
    p.add_argument("file", nargs="?", help="scenario JSON file")
    p.add_argument("--builtin", metavar="NAME")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--section", action="append", choices=SECTIONS, help="restrict to a section (repeatable)")
    p.add_argument("--list", action="store_true", help="list builtin scenarios")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        code = args.func(args)
    except (UsageError, ChowParseError, ScenarioError, exact.DimensionError, ValueError, KeyError, FileNotFoundError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return 2
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
