"""Declarative example scenarios and the verification pipelines run on them.

A scenario bundles the data of one blown-up Mukai manifold: its Chow ring
(optional), the divisor basis of N^1(X) with the pairing against a list of
named curve classes, the small modifications (SQMs) whose nef cones are
claimed, the quotient map onto the fiber Picard lattice, a group of lattice
isometries, and the golden values the pipelines compare against.

Divisor coordinates follow the labels in ``n1.labels``: a label ``"-F"``
means the coordinate is the coefficient of ``-F``, so ``(a, b, c)`` with
labels ``["L1", "L2", "-F"]`` stands for ``a L1 + b L2 - c F``. A curve's
``pairing`` vector ``p`` satisfies ``curve . D = p . D`` in these
coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence

from . import exact
from .chow import ChowClass, ChowRing, base_curve_class, curve_genus, fiber_gram
from .cone import (
    Cone,
    cone_from_facets,
    cone_from_rays,
    contains_cone,
    covers,
    equal,
    member,
    quotient_image,
)
from .dirichlet import dirichlet_domain, permutation_matrices
from .lattice import (
    IntLattice,
    OrderVerdict,
    certify_no_norm,
    disc_action,
    discriminant_group,
    element_order,
    eval_form,
    find_norm_vectors,
    is_isometry,
    is_norm_certificate,
    positive_cone_boundary,
    torelli_check,
    translation_isometry,
)
from .surd import QuadSurd


class ScenarioError(ValueError):
    """Malformed scenario data; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


BUILTINS = {
    "rank1": "rank1.json",
    "p1xp3": "p1xp3.json",
    "p1xV:1": "p1xV-1.json",
    "p1xV:2": "p1xV-2.json",
    "p1xV:3": "p1xV-3.json",
    "p1xV:4": "p1xV-4.json",
    "p1xV:5": "p1xV-5.json",
    "quadric-cone": "quadric-cone.json",
    "double-cover-p2p2": "double-cover-p2p2.json",
    "p3xp3": "p3xp3.json",
    "f134": "f134.json",
    "bilinear-p3p3": "bilinear-p3p3.json",
    "p1^4": "p1-4.json",
}

SECTIONS = ("chow", "nef", "finite", "infinite", "lifting", "notes")


@dataclass(frozen=True)
class Curve:
    name: str
    pairing: tuple[int, ...]
    k_trivial: bool = False


@dataclass(frozen=True)
class SQM:
    name: str
    nef_rays: tuple[tuple[int, ...], ...]
    dual_curves: tuple[str, ...]


@dataclass(frozen=True)
class Quotient:
    matrix: tuple
    kernel_ray: tuple[int, ...]
    target: tuple[tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class Group:
    generators: tuple[tuple[str, tuple], ...]
    include_inverses: bool = True
    k: int | None = None
    x: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Scenario:
    name: str
    labels: tuple[str, ...]
    anticanonical: tuple[int, ...] | None
    curves: tuple[Curve, ...]
    chow: ChowRing | None = None
    H: ChowClass | None = None
    fiber_gram: tuple | None = None
    sqms: tuple[SQM, ...] = ()
    quotient: Quotient | None = None
    group: Group | None = None
    expected: Mapping[str, Any] = field(default_factory=dict)

    @property
    def lattice(self) -> IntLattice | None:
        """Fiber Picard lattice, explicit or derived from the Chow ring."""
        if self.fiber_gram is not None:
            return IntLattice(self.fiber_gram)
        if self.chow is not None:
            return IntLattice(fiber_gram(self.chow, self.chow.gens(), self.H))
        return None

    def curve(self, name: str) -> Curve:
        for c in self.curves:
            if c.name == name:
                return c
        raise KeyError(name)

    def nef_cone(self, sqm: SQM) -> Cone:
        return cone_from_rays(sqm.nef_rays, len(self.labels))


# ---------------------------------------------------------------- loading


def _keys(obj, path: str, required: Iterable[str], optional: Iterable[str] = ()) -> dict:
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    required, optional = set(required), set(optional)
    unknown = sorted(set(obj) - required - optional)
    if unknown:
        raise ScenarioError(f"{path}.{unknown[0]}", "unknown key")
    missing = sorted(required - set(obj))
    if missing:
        raise ScenarioError(f"{path}.{missing[0]}", "missing key")
    return obj


def _int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioError(path, f"expected an integer, got {v!r}")
    return v


def _vec(v, path: str, length: int | None = None) -> tuple[int, ...]:
    if not isinstance(v, list):
        raise ScenarioError(path, "expected an array of integers")
    out = tuple(_int(x, f"{path}[{i}]") for i, x in enumerate(v))
    if length is not None and len(out) != length:
        raise ScenarioError(path, f"expected length {length}, got {len(out)}")
    return out


def _mat(v, path: str, cols: int | None = None) -> tuple:
    if not isinstance(v, list) or not v:
        raise ScenarioError(path, "expected a nonempty array of rows")
    rows = [_vec(r, f"{path}[{i}]") for i, r in enumerate(v)]
    width = len(rows[0]) if cols is None else cols
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ScenarioError(f"{path}[{i}]", f"expected length {width}, got {len(r)}")
    return tuple(rows)


def _str(v, path: str) -> str:
    if not isinstance(v, str):
        raise ScenarioError(path, "expected a string")
    return v


def _load_chow(d, path: str) -> tuple[ChowRing, ChowClass]:
    _keys(d, path, ["vars", "dim", "relations", "valuation", "H"])
    names = d["vars"]
    if not isinstance(names, list) or not names:
        raise ScenarioError(f"{path}.vars", "expected a nonempty array of names")
    names = [_str(x, f"{path}.vars[{i}]") for i, x in enumerate(names)]
    k = len(names)
    rels = [_vec(r, f"{path}.relations[{i}]", k) for i, r in enumerate(d["relations"])]
    val = {}
    for i, entry in enumerate(d["valuation"]):
        p = f"{path}.valuation[{i}]"
        _keys(entry, p, ["monomial", "value"])
        val[_vec(entry["monomial"], p + ".monomial", k)] = _int(entry["value"], p + ".value")
    try:
        ring = ChowRing(tuple(names), _int(d["dim"], f"{path}.dim"), tuple(rels), val)
        H = ring.parse(_str(d["H"], f"{path}.H"))
    except ValueError as e:
        raise ScenarioError(path, str(e)) from None
    if H.degrees != {1}:
        raise ScenarioError(f"{path}.H", "H must be a divisor class")
    return ring, H


def _computed_anticanonical(labels, ring: ChowRing, H: ChowClass, path: str) -> tuple[int, ...]:
    # -K_X = (n-2)(H - F) for the blowup of the base curve
    coeffs = dict(zip(ring.variables, H.linear_coefficients()))
    m = ring.dim - 2
    out = []
    for lab in labels:
        sign = -1 if lab.startswith("-") else 1
        name = lab.lstrip("-")
        if name in coeffs:
            out.append(sign * m * coeffs[name])
        elif name == "F":
            out.append(-sign * m)
        else:
            raise ScenarioError(path, f"label {lab!r} is neither a ring variable nor F; give anticanonical explicitly")
    return tuple(out)


EXPECTED_KEYS = {
    "gram",
    "genus",
    "curve_class",
    "mov",
    "norm_vectors",
    "certificate",
    "orders",
    "disc_factors",
    "disc_action",
    "torelli",
    "boundary",
    "spot_checks",
    "ray_norms",
    "translations",
    "domain_rays",
    "cover",
    "notes",
}


def _load_expected(d, path: str, dim: int) -> dict:
    _keys(d, path, [], EXPECTED_KEYS)
    e = dict(d)
    if "mov" in e:
        p = path + ".mov"
        _keys(e["mov"], p, ["inequalities", "rays", "mode"])
        if e["mov"]["mode"] not in ("exact", "upper-bound"):
            raise ScenarioError(p + ".mode", "expected 'exact' or 'upper-bound'")
        _mat(e["mov"]["inequalities"], p + ".inequalities", dim)
        _mat(e["mov"]["rays"], p + ".rays", dim)
    if "norm_vectors" in e:
        _keys(e["norm_vectors"], path + ".norm_vectors", ["norm", "bound", "vectors"])
    if "certificate" in e:
        _keys(e["certificate"], path + ".certificate", ["norm", "max_modulus", "modulus", "bound"], ["valid_moduli"])
    if "notes" in e and not all(isinstance(n, str) for n in e["notes"]):
        raise ScenarioError(path + ".notes", "expected an array of strings")
    return e


def scenario_from_dict(d: Mapping, source: str = "scenario") -> Scenario:
    """Validate and build a :class:`Scenario` from parsed JSON."""
    p = source
    _keys(d, p, ["name", "n1"], ["chow", "fiber_lattice", "sqms", "quotient", "group", "expected"])
    name = _str(d["name"], f"{p}.name")
    ring = H = None
    if "chow" in d:
        ring, H = _load_chow(d["chow"], f"{p}.chow")

    n1 = _keys(d["n1"], f"{p}.n1", ["labels", "curves"], ["anticanonical"])
    labels = tuple(_str(x, f"{p}.n1.labels[{i}]") for i, x in enumerate(n1["labels"]))
    dim = len(labels)
    if dim < 1:
        raise ScenarioError(f"{p}.n1.labels", "no divisor labels")
    if "anticanonical" in n1:
        anti = _vec(n1["anticanonical"], f"{p}.n1.anticanonical", dim)
    elif ring is not None:
        anti = _computed_anticanonical(labels, ring, H, f"{p}.n1.labels")
    else:
        anti = None
    curves = []
    for i, c in enumerate(n1["curves"]):
        cp = f"{p}.n1.curves[{i}]"
        _keys(c, cp, ["name", "pairing"], ["k_trivial"])
        kt = c.get("k_trivial", False)
        if not isinstance(kt, bool):
            raise ScenarioError(cp + ".k_trivial", "expected a boolean")
        curves.append(Curve(_str(c["name"], cp + ".name"), _vec(c["pairing"], cp + ".pairing", dim), kt))
    curve_names = {c.name for c in curves}
    if len(curve_names) != len(curves):
        raise ScenarioError(f"{p}.n1.curves", "duplicate curve names")

    gram = None
    if "fiber_lattice" in d:
        fl = _keys(d["fiber_lattice"], f"{p}.fiber_lattice", ["gram"])
        gram = _mat(fl["gram"], f"{p}.fiber_lattice.gram")
        try:
            IntLattice(gram)
        except ValueError as e:
            raise ScenarioError(f"{p}.fiber_lattice.gram", str(e)) from None

    sqms = []
    for i, s in enumerate(d.get("sqms", [])):
        sp = f"{p}.sqms[{i}]"
        _keys(s, sp, ["name", "nef_rays", "dual_curves"])
        duals = tuple(_str(x, f"{sp}.dual_curves[{j}]") for j, x in enumerate(s["dual_curves"]))
        for j, c in enumerate(duals):
            if c not in curve_names:
                raise ScenarioError(f"{sp}.dual_curves[{j}]", f"unknown curve {c!r}")
        sqms.append(SQM(_str(s["name"], sp + ".name"), _mat(s["nef_rays"], sp + ".nef_rays", dim), duals))

    quotient = None
    if "quotient" in d:
        qp = f"{p}.quotient"
        _keys(d["quotient"], qp, ["matrix", "kernel_ray"], ["target"])
        q = _mat(d["quotient"]["matrix"], qp + ".matrix", dim)
        ker = _vec(d["quotient"]["kernel_ray"], qp + ".kernel_ray", dim)
        if any(exact.matvec(q, ker)):
            raise ScenarioError(qp + ".kernel_ray", "kernel ray does not map to zero")
        target = ()
        if "target" in d["quotient"]:
            target = _mat(d["quotient"]["target"], qp + ".target", len(q))
        quotient = Quotient(q, ker, target)

    lat_rank = len(gram) if gram is not None else (len(ring.variables) if ring is not None else None)
    group = None
    if "group" in d:
        gp = f"{p}.group"
        _keys(d["group"], gp, ["generators"], ["include_inverses", "k", "x"])
        gens = []
        for i, g in enumerate(d["group"]["generators"]):
            ip = f"{gp}.generators[{i}]"
            if isinstance(g, dict) and "permutations" in g:
                _keys(g, ip, ["label", "permutations"])
                gens.extend(permutation_matrices(_int(g["permutations"], ip + ".permutations")))
                continue
            _keys(g, ip, ["label", "matrix"])
            gens.append((_str(g["label"], ip + ".label"), _mat(g["matrix"], ip + ".matrix")))
        for i, (lab, m) in enumerate(gens):
            if lat_rank is not None and exact.shape(m) != (lat_rank, lat_rank):
                raise ScenarioError(f"{gp}.generators", f"{lab} is not {lat_rank}x{lat_rank}")
        inv = d["group"].get("include_inverses", True)
        if not isinstance(inv, bool):
            raise ScenarioError(gp + ".include_inverses", "expected a boolean")
        k = _int(d["group"]["k"], gp + ".k") if "k" in d["group"] else None
        x = _vec(d["group"]["x"], gp + ".x", lat_rank) if "x" in d["group"] else None
        group = Group(tuple(gens), inv, k, x)

    expected = _load_expected(d.get("expected", {}), f"{p}.expected", dim)
    return Scenario(name, labels, anti, tuple(curves), ring, H, gram, tuple(sqms), quotient, group, expected)


def builtin_names() -> list[str]:
    return list(BUILTINS)


def load_scenario(source) -> Scenario:
    """Load a builtin by name, a JSON file by path, or an already parsed dict."""
    if isinstance(source, Mapping):
        return scenario_from_dict(source)
    if isinstance(source, str) and source in BUILTINS:
        text = resources.files("k3cones").joinpath("data", BUILTINS[source]).read_text("utf-8")
        return scenario_from_dict(json.loads(text), source)
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(f"no builtin or file named {source!r}")
    try:
        data = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as e:
        raise ScenarioError(str(path), f"invalid JSON: {e}") from None
    return scenario_from_dict(data, path.name)


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class Check:
    id: str
    status: str  # "pass", "fail" or "flagged"
    details: str = ""


def section_of(check_id: str) -> str:
    head = check_id.split(".", 1)[0]
    return {
        "chow": "chow",
        "nef": "nef",
        "mov": "finite",
        "lattice": "infinite",
        "domain": "infinite",
        "lifting": "lifting",
        "note": "notes",
    }[head]


@dataclass(frozen=True)
class Report:
    scenario: str
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def overall(self) -> str:
        return "pass" if self.passed else "fail"

    def flagged(self) -> list[Check]:
        return [c for c in self.checks if c.status == "flagged"]

    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def get(self, check_id: str) -> Check:
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "checks": [{"id": c.id, "status": c.status, "details": c.details} for c in self.checks],
            "overall": self.overall,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"scenario {self.scenario}"]
        width = max((len(c.id) for c in self.checks), default=0)
        for c in self.checks:
            lines.append(f"  {c.status.upper():<7} {c.id:<{width}}  {c.details}".rstrip())
        counts = {s: sum(c.status == s for c in self.checks) for s in ("pass", "fail", "flagged")}
        lines.append(
            f"overall {self.overall.upper()} "
            f"({counts['pass']} passed, {counts['fail']} failed, {counts['flagged']} flagged)"
        )
        return "\n".join(lines)


def _ok(cond: bool) -> str:
    return "pass" if cond else "fail"


def _fmt(v) -> str:
    if isinstance(v, (tuple, list)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _rays(cone: Cone) -> str:
    return _fmt(cone.rays) + (" + lineality " + _fmt(cone.lineality) if cone.lineality else "")


# ---------------------------------------------------------------- sections


def verify_chow(s: Scenario) -> list[Check]:
    if s.chow is None:
        return []
    out = []
    e = s.expected
    ring, H = s.chow, s.H
    gram = fiber_gram(ring, ring.gens(), H)
    if "gram" in e:
        want = tuple(tuple(r) for r in e["gram"])
        out.append(Check("chow.gram", _ok(gram == want), f"derived {_fmt(gram)}, expected {_fmt(want)}"))
    if s.fiber_gram is not None:
        out.append(
            Check("chow.fiber-lattice", _ok(gram == s.fiber_gram), f"derived {_fmt(gram)}, stated {_fmt(s.fiber_gram)}")
        )
    if "genus" in e:
        try:
            g = curve_genus(ring, H)
            out.append(Check("chow.genus", _ok(g == e["genus"]), f"genus {g}, expected {e['genus']}"))
        except ValueError as err:
            out.append(Check("chow.genus", "fail", str(err)))
    if "curve_class" in e:
        c = base_curve_class(ring, H)
        want = ring.parse(e["curve_class"])
        out.append(Check("chow.curve", _ok(c == want), f"H^{ring.dim - 1} = {c}, expected {want}"))
    return out


def verify_nef_duality(s: Scenario) -> list[Check]:
    """Each model's claimed nef cone must be the dual of its curve classes."""
    out = []
    dim = len(s.labels)
    for m in s.sqms:
        curves = [s.curve(c).pairing for c in m.dual_curves]
        dual = cone_from_facets(curves, dim)
        claimed = s.nef_cone(m)
        same = equal(dual, claimed)
        detail = f"dual of {{{', '.join(m.dual_curves)}}} = {_rays(dual)}"
        if not same:
            detail += f"; claimed {_rays(claimed)}"
        out.append(Check(f"nef.{m.name}", _ok(same), detail))
    return out


def _tight(ineqs, ray) -> list[int]:
    return [i for i, h in enumerate(ineqs) if exact.dot(h, ray) == 0]


def verify_finite_case(s: Scenario) -> list[Check]:
    """Compare the claimed movable cone with the cone cut out by the inequalities."""
    if "mov" not in s.expected:
        return []
    mov = s.expected["mov"]
    dim = len(s.labels)
    ineqs = [tuple(h) for h in mov["inequalities"]]
    cut = cone_from_facets(ineqs, dim)
    claimed = cone_from_rays(mov["rays"], dim)
    if mov["mode"] == "exact":
        same = equal(cut, claimed)
        detail = f"inequalities give {_rays(cut)}"
        if not same:
            detail += f"; claimed {_rays(claimed)}"
        return [Check("mov.equal", _ok(same), detail)]
    out = []
    inside = contains_cone(cut, claimed)
    tight = "; ".join(f"{_fmt(r)} tight on {_tight(ineqs, r)}" for r in claimed.rays)
    out.append(Check("mov.contains", _ok(inside), f"claimed rays satisfy the inequalities; {tight}"))
    if equal(cut, claimed):
        out.append(Check("mov.equal", "pass", f"inequalities give {_rays(cut)}"))
    else:
        witness = next((r for r in cut.rays if not member(claimed, r)), None)
        out.append(
            Check(
                "mov.equal",
                "flagged",
                f"inequality cone {_rays(cut)} is strictly larger than the claimed cone; witness {_fmt(witness)}",
            )
        )
    return out


def _surd_root(gram, t: QuadSurd | None) -> bool:
    (g11, g12), (_, g22) = gram
    if t is None:
        return g11 == 0
    return (t * t * g11 + t * (2 * g12) + g22) == 0


def verify_infinite_case(s: Scenario) -> list[Check]:
    """Lattice-level checks on the fiber Picard lattice and the group."""
    e = s.expected
    L = s.lattice
    if L is None:
        return []
    out = []
    if "gram" in e and s.chow is None:
        want = tuple(tuple(r) for r in e["gram"])
        out.append(Check("lattice.gram", _ok(L.gram == want), f"gram {_fmt(L.gram)}, expected {_fmt(want)}"))
    if "norm_vectors" in e:
        nv = e["norm_vectors"]
        found = find_norm_vectors(L, nv["norm"], nv["bound"])
        want = sorted(tuple(v) for v in nv["vectors"])
        out.append(
            Check(
                "lattice.norm-vectors",
                _ok(found == want),
                f"norm {nv['norm']} within bound {nv['bound']}: {_fmt(found) if found else 'none'}",
            )
        )
    if "certificate" in e:
        c = e["certificate"]
        m = certify_no_norm(L, c["norm"], c["max_modulus"])
        box = find_norm_vectors(L, c["norm"], c["bound"])
        extra = [v for v in c.get("valid_moduli", []) if not is_norm_certificate(L, c["norm"], v)]
        ok = m == c["modulus"] and not box and not extra
        detail = f"smallest modulus {m}, expected {c['modulus']}; no norm {c['norm']} vectors within bound {c['bound']}"
        if c.get("valid_moduli"):
            detail += f"; also certified mod {_fmt(c['valid_moduli'])}"
        if box:
            detail += f"; found {_fmt(box[0])}"
        if extra:
            detail += f"; mod {_fmt(extra)} does not certify"
        out.append(Check("lattice.certificate", _ok(ok), detail))
    gens = dict(s.group.generators) if s.group else {}
    if s.group:
        for lab, M in s.group.generators:
            out.append(Check(f"lattice.isometry.{lab}", _ok(is_isometry(L, M)), f"M^T G M == G for {lab}"))
    for lab, want in e.get("orders", {}).items():
        got = element_order(gens[lab])
        out.append(Check(f"lattice.order.{lab}", _ok(got == OrderVerdict.parse(want)), f"{got}, expected {want}"))
    if "disc_factors" in e:
        D = discriminant_group(L)
        want = tuple(e["disc_factors"])
        out.append(
            Check("lattice.disc", _ok(D.factors == want), f"factors {_fmt(D.factors)} (order {D.order}), expected {_fmt(want)}")
        )
    for lab, want in e.get("disc_action", {}).items():
        action, kind = disc_action(L, gens[lab])
        out.append(
            Check(f"lattice.disc-action.{lab}", _ok(str(kind) == want), f"{kind} (matrix {_fmt(action)}), expected {want}")
        )
    for lab, t in e.get("torelli", {}).items():
        v = torelli_check(L, gens[lab], [tuple(n) for n in t.get("nodal", [])])
        out.append(Check(f"lattice.torelli.{lab}", _ok(v.kind == t["verdict"]), f"{v}, expected {t['verdict']}"))
    if "boundary" in e:
        lo, hi = positive_cone_boundary(L)
        got = [str(x) if x is not None else "infinite" for x in (lo, hi)]
        roots = all(_surd_root(L.gram, t) for t in (lo, hi))
        out.append(
            Check(
                "lattice.boundary",
                _ok(got == list(e["boundary"]) and roots),
                f"isotropic slopes a/b = {', '.join(got)}" + ("" if roots else "; not exact roots"),
            )
        )
    for i, sc in enumerate(e.get("spot_checks", [])):
        img = exact.matvec(gens[sc["matrix"]], sc["vector"])
        want = tuple(sc["image"])
        out.append(
            Check(f"lattice.spot.{i + 1}", _ok(img == want), f"{sc['matrix']} {_fmt(sc['vector'])} = {_fmt(img)}, expected {_fmt(want)}")
        )
    if "ray_norms" in e:
        rn = e["ray_norms"]
        vals = [eval_form(L, r) for r in rn["rays"]]
        out.append(
            Check(
                "lattice.ray-norms",
                _ok(vals == list(rn["values"]) and all(v >= 0 for v in vals)),
                f"self-intersections {_fmt(vals)} of {_fmt(rn['rays'])}",
            )
        )
    for t in e.get("translations", []):
        T = translation_isometry(L, t["f"], t["y"])
        want = exact.as_matrix(gens[t["label"]])
        out.append(
            Check(
                f"lattice.translation.{t['label']}",
                _ok(T == want and is_isometry(L, T)),
                f"f={_fmt(t['f'])}, y={_fmt(t['y'])} gives {_fmt(T)}",
            )
        )
    if "domain_rays" in e and s.group and s.group.k is not None:
        dom = dirichlet_domain(L, s.group.x, s.group.generators, s.group.k, s.group.include_inverses)
        want = tuple(sorted(tuple(r) for r in e["domain_rays"]))
        out.append(
            Check(
                "domain.rays",
                _ok(dom.rays == want and not dom.improper),
                f"{len(dom.normals)} halfspaces from words of length <= {s.group.k}; rays {_fmt(dom.rays)}",
            )
        )
        norms = [eval_form(L, r) for r in dom.rays]
        out.append(
            Check(
                "domain.positive",
                _ok(not dom.outside_positive),
                f"ray self-intersections {_fmt(norms)}",
            )
        )
    return out


def verify_lifting_conditions(s: Scenario) -> list[Check]:
    """The four conditions (a)-(d) for lifting a covering domain to N^1(X)."""
    if not s.sqms or s.quotient is None or not s.quotient.target:
        return []
    dim = len(s.labels)
    cones = [(m, s.nef_cone(m)) for m in s.sqms]
    out = []

    bad = []
    for m, C in cones:
        back = cone_from_facets(C.facets, dim, equations=C.equations)
        given = {exact.primitive(r) for r in m.nef_rays}
        if back != C or set(C.rays) != given or not C.is_pointed:
            bad.append(m.name)
    out.append(
        Check(
            "lifting.a",
            _ok(not bad),
            "nef cones rational polyhedral, rays extremal, H/V roundtrip exact" + (f"; fails for {bad}" if bad else ""),
        )
    )

    K = s.anticanonical
    if K is None:
        out.append(Check("lifting.b", "fail", "no anticanonical vector"))
    else:
        missing = [m.name for m, C in cones if not member(C, K)]
        out.append(
            Check(
                "lifting.b",
                _ok(not missing),
                f"-K = {_fmt(K)} lies in every nef cone" if not missing else f"-K = {_fmt(K)} not in {missing}",
            )
        )

    flagged = [c for c in s.curves if c.k_trivial]
    nonzero = [c.name for c in flagged if K is None or exact.dot(c.pairing, K) != 0]
    out.append(
        Check(
            "lifting.c",
            _ok(not nonzero),
            f"K . C = 0 for {', '.join(c.name for c in flagged) or 'no curves'}"
            if not nonzero
            else f"K . C != 0 for {nonzero}",
        )
    )

    q = s.quotient
    target = cone_from_rays(q.target, len(q.matrix))
    images = [quotient_image(C, q.matrix) for _, C in cones]
    verdict = covers(target, images)
    parts = "; ".join(f"q(Nef({m.name})) = {_rays(img)}" for (m, _), img in zip(cones, images))
    if verdict.covered:
        detail = f"{_rays(target)} covered ({verdict.cells} cells); {parts}"
    else:
        detail = f"{_rays(target)} not covered, witness {_fmt(verdict.witness)}; {parts}"
    out.append(Check("lifting.d", _ok(verdict.covered), detail))
    return out


def verify_notes(s: Scenario) -> list[Check]:
    return [Check(f"note.{i + 1}", "flagged", n) for i, n in enumerate(s.expected.get("notes", []))]


PIPELINE: dict[str, Callable[[Scenario], list[Check]]] = {
    "chow": verify_chow,
    "nef": verify_nef_duality,
    "finite": verify_finite_case,
    "infinite": verify_infinite_case,
    "lifting": verify_lifting_conditions,
    "notes": verify_notes,
}


def verify(s: Scenario, sections: Sequence[str] | None = None) -> Report:
    """Run the requested sections (all by default) in their fixed order."""
    if sections is not None:
        unknown = [x for x in sections if x not in PIPELINE]
        if unknown:
            raise ValueError(f"unknown section {unknown[0]!r}; choose from {', '.join(SECTIONS)}")
    checks: list[Check] = []
    for name in SECTIONS:
        if sections is None or name in sections:
            checks.extend(PIPELINE[name](s))
    return Report(s.name, tuple(checks))


def run_builtin(name: str, sections: Sequence[str] | None = None) -> Report:
    if name not in BUILTINS:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
    return verify(load_scenario(name), sections)
