"""Command line: construct family members, audit curve files, compare
instances and draw real loci.

Every command writes canonical JSON (sorted keys, two-space indent).  Exit
status is 0 on success, 2 when a computation or certificate fails and 3 on
bad input or usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import families
from .curvelocal import (ParamCurve, flex_parameters, parse_type_counts,
                         singularity_audit)
from .errors import (BadParams, CertificationFailure, DescriptorMismatch,
                     ParseError, RigidCurveError, UnknownFamily)
from .exactalg import TernForm, UniPoly, rat, scalar_wire
from .projgeom import ImplicitCurve, ProjMap
from .rigidity import Witness, _canonical_descriptor, rigidity_report

FORMAT_VERSION = 1


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# curve files


def component_to_wire(comp) -> dict:
    if isinstance(comp, TernForm):
        return {"implicit": comp.normalize().to_wire()}
    return comp.to_wire()


def component_from_wire(data):
    if not isinstance(data, dict):
        raise ParseError("component must be an object")
    label = data.get("label")
    if "param" in data:
        coords = data["param"]
        if not isinstance(coords, list) or len(coords) != 3:
            raise ParseError("a parametrization has three coordinate polynomials")
        return ParamCurve(*(UniPoly.from_wire(c) for c in coords), label=label)
    if "implicit" in data:
        return ImplicitCurve(TernForm.from_wire(data["implicit"]), label)
    raise ParseError("component needs a 'param' or 'implicit' field")


class CurveFile:
    def __init__(self, components, metadata=None):
        self.components = list(components)
        self.metadata = dict(metadata or {})

    def to_wire(self) -> dict:
        return {"format_version": FORMAT_VERSION,
                "components": [component_to_wire(c) for c in self.components],
                "metadata": self.metadata}

    def dumps(self) -> str:
        return dumps(self.to_wire())

    @classmethod
    def from_wire(cls, data) -> "CurveFile":
        if not isinstance(data, dict):
            raise ParseError("curve file must be a JSON object")
        if data.get("format_version") != FORMAT_VERSION:
            raise ParseError(f"unsupported format_version {data.get('format_version')!r}")
        comps = data.get("components")
        if not isinstance(comps, list):
            raise ParseError("'components' must be a list")
        return cls([component_from_wire(c) for c in comps], data.get("metadata", {}))

    @classmethod
    def loads(cls, text: str) -> "CurveFile":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        return cls.from_wire(data)

    @classmethod
    def read(cls, path: str) -> "CurveFile":
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.loads(fh.read())
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc}") from None


# ---------------------------------------------------------------------------
# construction


def _need(value, name, default=None):
    if value is None:
        if default is None:
            raise BadParams(f"--{name} is required")
        return default
    return value


def _audit_meta(comps) -> dict:
    audit = singularity_audit(comps)
    return {"descriptor": audit.descriptor_string(), "genera": audit.genera,
            "degrees": audit.degrees}


def _construct_toe1(args):
    n = _need(args.n, "n")
    sol = families.solve_toe1(n)
    meta = {"tau": str(sol.tau), "a": [str(x) for x in sol.a],
            "descriptor": sol.audit.descriptor_string(), "genera": sol.audit.genera}
    return [sol.curve], meta


def _construct_add1(args):
    n = _need(args.n, "n")
    audit = families.certify_add1(n)
    curve, line = families.build_add1(n)
    return [curve, line], {"descriptor": audit.descriptor_string(), "genera": audit.genera}


def _check_pair(comps, expected: str):
    meta = _audit_meta(comps)
    got = parse_type_counts(meta["descriptor"])
    if got != parse_type_counts(expected):
        raise CertificationFailure(f"audit gives {meta['descriptor']}, expected {expected}")
    return meta


def _construct_add2(args):
    n = _need(args.n, "n")
    a = args.a if args.a is not None else Fraction(0)
    curve = families.build_add2(n, a)
    meta = _check_pair([curve], f"T({n},{2 * n + 1}) + T({n + 1},{2 * n + 1})")
    meta["tangent_intersection"] = families.add2_tangent_intersection(n, a)
    return [curve], meta


def _construct_add3(args):
    n = _need(args.n, "n")
    a = args.a if args.a is not None else Fraction(0)
    curve = families.build_add3(n, a)
    meta = _check_pair([curve], f"T({2 * n - 1},{4 * n}) + T({2 * n + 1},{4 * n})")
    meta["tangent_intersection"] = families.add3_tangent_intersection(n, a)
    return [curve], meta


def _construct_vn(args):
    m = args.n if args.n is not None else 3
    if not isinstance(m, int) or m < 2:
        raise BadParams("--n must be an integer >= 2")
    curve = families.solve_toe1(2).curve
    steps = []
    while curve.degree < 2 * m:
        step = families.vn_step(curve)
        steps.append({"m": step.m, "dual_type": step.dual_audit.descriptor_string(),
                      "union_type": step.union_audit.descriptor_string()})
        curve = step.next_curve
    audit = singularity_audit([curve])
    return [curve], {"descriptor": audit.descriptor_string(), "genera": audit.genera,
                     "steps": steps}


def _construct_fermat(args):
    n = _need(args.n, "n", 3)
    fd = families.fermat_dual_family(n, args.lines if args.lines is not None else 0)
    return fd.components, {"descriptor": fd.audit.descriptor_string(), "genera": fd.audit.genera,
                           "extra_type": families.format_type_counts(fd.extra_type())}


def _construct_rigit(args):
    n = _need(args.n, "n", 3)
    classes = families.rigit_classes(n)
    meta = {"orbit_count": len(classes),
            "classes": [[list(p) for p in c] for c in classes]}
    comps = []
    if n <= 4:
        fd = families.fermat_dual_family(n, 3)
        comps = fd.components
        meta["descriptor"] = fd.audit.descriptor_string()
    else:
        meta["note"] = "configuration omitted: elimination beyond the supported range"
    return comps, meta


def _construct_catalog(args):
    entries = {e.name: e for e in families.catalog_small_degree()}
    entry = entries[args.family]
    k = args.member if args.member is not None else 0
    if not 0 <= k < len(entry.representatives):
        raise BadParams(f"--member must be in 0..{len(entry.representatives) - 1}")
    comps = entry.representatives[k]
    entry.certify(comps)
    meta = entry.to_wire()
    meta["witnesses"] = [w.to_wire() for w in entry.witnesses]
    return comps, meta


CATALOG_IDS = tuple([f"I{k}" for k in range(1, 25)] + ["II1", "II2"])
BUILDERS = {
    "toe1": _construct_toe1,
    "add1": _construct_add1,
    "add2": _construct_add2,
    "add3": _construct_add3,
    "vn": _construct_vn,
    "fermat-dual": _construct_fermat,
    "rigit": _construct_rigit,
}


def construct(args) -> CurveFile:
    fam = args.family
    if fam in CATALOG_IDS:
        comps, meta = _construct_catalog(args)
    elif fam in BUILDERS:
        comps, meta = BUILDERS[fam](args)
    else:
        raise UnknownFamily(f"unknown family {fam!r}")
    params = {k: (str(v) if isinstance(v, Fraction) else v)
              for k, v in (("n", args.n), ("a", args.a), ("lines", args.lines),
                           ("member", args.member)) if v is not None}
    meta = dict(meta)
    meta["family"] = fam
    meta["params"] = params
    meta["provenance"] = "rigidcurve construct"
    return CurveFile(comps, meta)


def sweep(args) -> dict:
    """Construct and certify the family for every n in the range; failures
    are recorded per n instead of stopping the sweep."""
    lo, _, hi = args.sweep.partition("..")
    try:
        ns = range(int(lo), int(hi or lo) + 1)
    except ValueError:
        raise ParseError(f"--sweep expects a range like 2..6, got {args.sweep!r}") from None
    rows = []
    for n in ns:
        sub = argparse.Namespace(**{**vars(args), "n": n})
        try:
            cf = construct(sub)
            rows.append({"n": n, "status": "pass", "descriptor": cf.metadata.get("descriptor")})
        except RigidCurveError as exc:
            rows.append({"n": n, "status": "fail", "error": type(exc).__name__,
                         "message": str(exc)})
    return {"family": args.family, "sweep": rows,
            "all_pass": all(r["status"] == "pass" for r in rows)}


# ---------------------------------------------------------------------------
# audit, report, plot


def _flex_wire(flexes):
    out = []
    for t, k in flexes:
        if isinstance(t, UniPoly):
            out.append({"roots_of": t.to_wire(), "contact": k})
        else:
            out.append({"t": t if t == "inf" else scalar_wire(t), "contact": k})
    return out


def audit_report(cf: CurveFile) -> dict:
    audit = singularity_audit(cf.components)
    report = audit.to_wire()
    report["flexes"] = {}
    for k, c in enumerate(cf.components):
        if isinstance(c, ParamCurve):
            report["flexes"][audit.labels[k]] = _flex_wire(flex_parameters(c))
    return report


def _audit_text(report: dict) -> str:
    lines = [f"degrees: {report['degrees']}", f"genera: {report['genera']}",
             f"type: {report['descriptor']}"]
    for e in report["entries"]:
        lines.append(f"  {e['count']} x {e['type']} on components {e['components']}")
    for label, fl in sorted(report["flexes"].items()):
        lines.append(f"flexes of {label}: {len(fl)}")
    return "\n".join(lines) + "\n"


def load_witnesses(path: str, files) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read witnesses: {exc}") from None
    out = []
    for item in data.get("witnesses", []) if isinstance(data, dict) else []:
        try:
            i, j = int(item["i"]), int(item["j"])
            h = ProjMap.from_wire(item["map"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad witness entry: {exc}") from None
        if not (0 <= i < len(files) and 0 <= j < len(files)):
            raise ParseError(f"witness indices out of range: {i}, {j}")
        out.append((i, j, Witness(h, files[i].components, files[j].components)))
    return out


def report(files, witnesses=(), names=None) -> dict:
    descs = [_canonical_descriptor(singularity_audit(f.components)) for f in files]
    for k, d in enumerate(descs[1:], start=1):
        if d != descs[0]:
            raise DescriptorMismatch(f"instance {k} has a different singularity type than instance 0")
    return rigidity_report([f.components for f in files], witnesses, names).to_wire()


def _real_points(comp, samples: int = 400):
    """Floating-point samples of the real locus in the affine chart z3 = 1.
    For display only."""
    pts = []
    if isinstance(comp, ParamCurve):
        f = [[float(c) for c in p.coeffs] for p in comp.coords]

        def ev(cs, t):
            acc = 0.0
            for c in reversed(cs):
                acc = acc * t + c
            return acc

        for k in range(samples + 1):
            s = -0.999 + 1.998 * k / samples
            t = s / (1 - s * s)
            x, y, z = (ev(cs, t) for cs in f)
            if abs(z) > 1e-9:
                pts.append((x / z, y / z))
        return [pts]
    form = comp.form if hasattr(comp, "form") else comp
    d = form.degree
    for k in range(samples + 1):
        x = Fraction(-4) + Fraction(8 * k, samples)
        cs = [Fraction(0)] * (d + 1)
        for (i, j, _), v in form.terms.items():
            cs[j] += v * x ** i
        p = UniPoly(cs)
        if p.degree > 0:
            pts.extend((float(x), y) for y in p.real_roots_approx())
    return [[p] for p in pts]


def _visible_runs(runs, window):
    out = []
    for run in runs:
        cur = []
        for p in run:
            if abs(p[0]) <= window and abs(p[1]) <= window:
                cur.append(p)
            elif cur:
                out.append(cur)
                cur = []
        if cur:
            out.append(cur)
    return out


def plot_svg(cf: CurveFile, size: int = 400, window: float = 4.0) -> str:
    scale = size / (2 * window)

    def xy(p):
        return (p[0] + window) * scale, (window - p[1]) * scale

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    colors = ["#1b4f72", "#a93226", "#1e8449", "#7d3c98", "#b9770e", "#424949"]
    for k, comp in enumerate(cf.components):
        color = colors[k % len(colors)]
        for run in _visible_runs(_real_points(comp), window):
            if len(run) == 1:
                x, y = xy(run[0])
                parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="0.8" fill="{color}"/>')
            elif run:
                path = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(xy, run))
                parts.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                             f'stroke-width="1"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _rational_arg(text):
    try:
        return rat(text)
    except (ParseError, TypeError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rigidcurve", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build and certify a family member")
    c.add_argument("family")
    c.add_argument("--n", type=int)
    c.add_argument("--a", type=_rational_arg)
    c.add_argument("--lines", type=int, help="extra lines for fermat-dual (0 or 3)")
    c.add_argument("--member", type=int, help="representative index for catalog entries")
    c.add_argument("--sweep", help="certify every n in a range such as 2..6")
    c.add_argument("--out")
    c.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")

    a = sub.add_parser("audit", help="singularities, genera and flexes of a curve file")
    a.add_argument("file")
    a.add_argument("--json", action="store_true")
    a.add_argument("--out")

    r = sub.add_parser("report", help="rigidity report over several instances")
    r.add_argument("files", nargs="+")
    r.add_argument("--witnesses")
    r.add_argument("--out")
    r.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")

    g = sub.add_parser("plot", help="SVG of the real locus (not certified)")
    g.add_argument("file")
    g.add_argument("--svg")
    g.add_argument("--out")
    return p


def _emit(text: str, path: str | None, stdout):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "construct":
            if args.sweep:
                result = sweep(args)
                _emit(dumps(result), args.out, stdout)
                return 0 if result["all_pass"] else 2
            _emit(construct(args).dumps(), args.out, stdout)
        elif args.command == "audit":
            rep = audit_report(CurveFile.read(args.file))
            _emit(dumps(rep) if args.json else _audit_text(rep), args.out, stdout)
        elif args.command == "report":
            files = [CurveFile.read(f) for f in args.files]
            wits = load_witnesses(args.witnesses, files) if args.witnesses else []
            _emit(dumps(report(files, wits, args.files)), args.out, stdout)
        elif args.command == "plot":
            _emit(plot_svg(CurveFile.read(args.file)), args.svg or args.out, stdout)
        return 0
    except RigidCurveError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        data = getattr(exc, "data", None)
        if data is not None:
            err["data"] = data
        stderr.write(json.dumps(err, sort_keys=True, default=str) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
