"""Projective equivalence of configurations: explicit witnesses, separating
invariants and a per-family report.

A configuration is a list of components (ParamCurve, ImplicitCurve or
TernForm).  Equality of configurations ignores component order: two
configurations are equal when the normalized irreducible factors of their
equations agree with multiplicities.
"""

from __future__ import annotations

from itertools import combinations

from .curvelocal import (
    INF,
    ParamCurve,
    branch_at,
    cross,
    component_form,
    flex_parameters,
    pair_intersection_multiplicity,
    singular_parameter_poly,
    singularity_audit,
    wronskian,
    _strip_common,
)
from .errors import RigidCurveError
from .exactalg import UniPoly, factor_rational, rat
from .projgeom import ProjMap, apply_map


class NotSeparated(RigidCurveError):
    """No invariant in the list tells the two configurations apart."""


def _as_config(x) -> list:
    return list(x) if isinstance(x, (list, tuple)) else [x]


def _factor_key(config):
    out = []
    for comp in _as_config(config):
        for f, e in component_form(comp).factor():
            if f.degree == 0:
                continue
            out.append((str(f.to_wire()), e))
    return sorted(out)


def curves_equal(a, b) -> bool:
    """Equality of the reduced unions, independent of component order."""
    return _factor_key(a) == _factor_key(b)


def _reparametrize(curve: ParamCurve, mobius):
    a, b, c, d = (rat(x) for x in mobius)
    if a * d - b * c == 0:
        raise ValueError("reparametrization is not invertible")
    num, den = UniPoly([b, a]), UniPoly([d, c])
    n = curve.degree
    coords = []
    for z in curve.coords:
        acc = UniPoly()
        for k, ck in enumerate(z.coeffs):
            acc = acc + (num ** k) * (den ** (n - k)) * ck
        coords.append(acc)
    return ParamCurve(*coords, label=curve.label)


class Witness:
    """A projective map claimed to send ``source`` onto ``target``.

    ``reparam`` optionally records the Mobius change t -> (a t + b)/(c t + d)
    that matches the parametrizations; equality is checked on equations, so
    it only matters for ``mapped_parametrization``.
    """

    def __init__(self, map, source, target, reparam=None):
        self.map = map if isinstance(map, ProjMap) else ProjMap(map)
        self.source = _as_config(source)
        self.target = _as_config(target)
        self.reparam = reparam

    def image(self):
        return apply_map(self.map, self.source)

    def mapped_parametrization(self):
        out = []
        for c in self.image():
            if isinstance(c, ParamCurve) and self.reparam is not None:
                c = _reparametrize(c, self.reparam)
            out.append(c)
        return out

    def parametrization_matches(self) -> bool:
        """Whether the reparametrized image equals the target coordinatewise
        up to a common scalar (components in the same order)."""
        mapped = self.mapped_parametrization()
        if len(mapped) != len(self.target):
            return False
        for m, t in zip(mapped, self.target):
            if not (isinstance(m, ParamCurve) and isinstance(t, ParamCurve)):
                if not curves_equal(m, t):
                    return False
                continue
            if not all(c.is_zero() for c in cross(m.coords, t.coords)):
                return False
        return True

    def verify(self) -> bool:
        return curves_equal(self.image(), self.target)

    def to_wire(self) -> dict:
        out = {"map": self.map.to_wire(),
               "source": [_comp_wire(c) for c in self.source],
               "target": [_comp_wire(c) for c in self.target]}
        if self.reparam is not None:
            out["reparam"] = [str(rat(x)) for x in self.reparam]
        return out


def _comp_wire(c):
    if hasattr(c, "to_wire") and not hasattr(c, "terms"):
        return c.to_wire()
    return {"implicit": c.to_wire()}


def verify_witness(w: Witness) -> bool:
    return w.verify()


# ---------------------------------------------------------------------------
# invariants


def _rational_singular_params(curve: ParamCurve):
    """Parameters of the singular branches, or None if some are irrational."""
    d, ord_inf = singular_parameter_poly(curve)
    params = []
    if d.degree > 0:
        for h, _ in factor_rational(d)[1]:
            if h.degree > 1:
                return None
            params.append(-h.coeff(0))
    if ord_inf:
        params.append(INF)
    return params


def tangent_profile(config):
    """For each singular branch of a parametrized component: (degree, e,
    characteristic exponent, intersection of the curve with its tangent line
    at the centre)."""
    out = []
    for comp in _as_config(config):
        if not isinstance(comp, ParamCurve):
            if component_form(comp).degree > 2:
                return None
            continue
        params = _rational_singular_params(comp)
        if params is None:
            return None
        for t0 in params:
            b = branch_at(comp, t0)
            if b.e < 2:
                continue
            i = pair_intersection_multiplicity(comp, tuple(b.tangent), at=tuple(b.center))
            out.append((comp.degree, b.e, b.char, i))
    return sorted(out)


def flex_count(config):
    """Number of flexes (over the algebraic closure) of each parametrized
    component; lines and conics have none."""
    out = []
    for comp in _as_config(config):
        if not isinstance(comp, ParamCurve):
            if component_form(comp).degree > 2:
                return None
            continue
        total = 0
        for t, _ in flex_parameters(comp):
            total += t.degree if isinstance(t, UniPoly) else 1
        out.append((comp.degree, total))
    return sorted(out)


def flex_incidence(config):
    """For each pair (parametrized component, line component): the points of
    intersection as (multiplicity, orbit size, whether the point is a flex
    of the curve)."""
    comps = _as_config(config)
    lines = [component_form(c) for c in comps if component_form(c).degree == 1]
    out = []
    for comp in comps:
        if not isinstance(comp, ParamCurve):
            continue
        w = _strip_common(wronskian(comp.coords), singular_parameter_poly(comp)[0])
        inf_flex = any(t == INF for t, _ in flex_parameters(comp))
        for ln in lines:
            phi = ln.pullback(*comp.coords)
            if phi.is_zero():
                continue
            pts = []
            for h, k in factor_rational(phi)[1]:
                flag = not w.is_zero() and h.divides(w)
                pts.append((k, h.degree, flag))
            k_inf = comp.degree - phi.degree
            if k_inf:
                pts.append((k_inf, 1, inf_flex))
            out.append((comp.degree, tuple(sorted(pts))))
    return sorted(out)


def _canonical_descriptor(audit):
    """Descriptor minimized over relabellings that preserve (degree, genus)."""
    from itertools import permutations

    n = len(audit.degrees)
    keys = [(audit.degrees[i], audit.genera[i]) for i in range(n)]
    best = None
    for perm in permutations(range(n)):
        if any(keys[perm[i]] != keys[i] for i in range(n)):
            continue
        inv = {perm[i]: i for i in range(n)}
        items = sorted((t, tuple(sorted(inv[j] for j in js)), c)
                       for (t, js), c in audit.descriptor.items())
        if best is None or items < best:
            best = items
    return (tuple(sorted(keys)), tuple(best))


def audit_descriptor(config):
    return _canonical_descriptor(singularity_audit(_as_config(config)))


INVARIANTS = (
    ("intersection-multiplicity", tangent_profile),
    ("flex-count", flex_count),
    ("flex-membership", flex_incidence),
    ("descriptor-mismatch", audit_descriptor),
)


class SeparationCertificate:
    def __init__(self, invariant, value_a, value_b):
        self.invariant = invariant
        self.value_a = value_a
        self.value_b = value_b

    def __repr__(self):
        return f"SeparationCertificate({self.invariant}: {self.value_a!r} != {self.value_b!r})"

    def to_wire(self) -> dict:
        return {"invariant": self.invariant, "a": _plain(self.value_a), "b": _plain(self.value_b)}


def _plain(x):
    if isinstance(x, (list, tuple)):
        return [_plain(y) for y in x]
    if isinstance(x, bool) or isinstance(x, int) or x is None or isinstance(x, str):
        return x
    return str(x)


def separating_invariant(a, b) -> SeparationCertificate:
    """First invariant whose values differ on the two configurations.
    Invariants that cannot be computed exactly on either side are skipped."""
    for name, fn in INVARIANTS:
        va, vb = fn(a), fn(b)
        if va is None or vb is None:
            continue
        if va != vb:
            return SeparationCertificate(name, va, vb)
    raise NotSeparated("no invariant separates the configurations")


# ---------------------------------------------------------------------------
# report


class RigidityReport:
    def __init__(self, names, pairs, classes, lower_bound):
        self.names = names
        self.pairs = pairs
        self.classes = classes
        self.lower_bound = lower_bound

    @property
    def upper_bound(self) -> int:
        return len(self.classes)

    @property
    def rigidity_class(self):
        if self.lower_bound == self.upper_bound:
            return self.upper_bound
        return "unknown"

    def status(self, i, j) -> str:
        for p in self.pairs:
            if {p["i"], p["j"]} == {i, j}:
                return p["status"]
        raise KeyError((i, j))

    def to_wire(self) -> dict:
        return {"members": self.names, "pairs": self.pairs,
                "classes": [[self.names[i] for i in c] for c in self.classes],
                "lower_bound": self.lower_bound, "upper_bound": self.upper_bound,
                "rigidity_class": self.rigidity_class}


def rigidity_report(members, witnesses=(), names=None, separate=True) -> RigidityReport:
    """Group family members by verified witnesses and certify distinctness of
    the remaining pairs.

    ``witnesses`` holds (i, j, Witness) triples; a witness that fails
    verification is ignored.  Pairs in one class are "witnessed-equal", pairs
    with a separating invariant "certified-distinct", the rest "undecided".
    """
    members = [_as_config(m) for m in members]
    n = len(members)
    names = list(names) if names else [f"M{k}" for k in range(n)]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    evidence = {}
    for i, j, w in witnesses:
        if w.verify():
            parent[find(i)] = find(j)
            evidence[frozenset((i, j))] = {"witness": w.map.to_wire()}
    for i, j in combinations(range(n), 2):
        if find(i) != find(j) and curves_equal(members[i], members[j]):
            parent[find(i)] = find(j)
            evidence[frozenset((i, j))] = {"witness": ProjMap.identity().to_wire()}
    groups = {}
    for k in range(n):
        groups.setdefault(find(k), []).append(k)
    classes = sorted(groups.values())
    reps = [c[0] for c in classes]
    distinct = set()
    certs = {}
    if separate:
        for x, y in combinations(range(len(reps)), 2):
            try:
                cert = separating_invariant(members[reps[x]], members[reps[y]])
            except NotSeparated:
                continue
            distinct.add((x, y))
            certs[(x, y)] = cert
    cls_of = {k: idx for idx, c in enumerate(classes) for k in c}
    pairs = []
    for i, j in combinations(range(n), 2):
        ci, cj = cls_of[i], cls_of[j]
        if ci == cj:
            pairs.append({"i": i, "j": j, "status": "witnessed-equal",
                          "evidence": evidence.get(frozenset((i, j)), {"via": "class"})})
        elif (min(ci, cj), max(ci, cj)) in distinct:
            pairs.append({"i": i, "j": j, "status": "certified-distinct",
                          "evidence": certs[(min(ci, cj), max(ci, cj))].to_wire()})
        else:
            pairs.append({"i": i, "j": j, "status": "undecided", "evidence": {}})
    return RigidityReport(names, pairs, classes, _max_clique(len(classes), distinct))


def _max_clique(n, edges) -> int:
    if n == 0:
        return 0
    best = 1
    for size in range(2, n + 1):
        if any(all((a, b) in edges for a, b in combinations(sub, 2))
               for sub in combinations(range(n), size)):
            best = size
        else:
            break
    return best
