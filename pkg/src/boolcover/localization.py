"""Systems of Boolean covers, pasting compatibility, and the headline verdict.

A prelocalization system for a quantum observable is a precomposition-closed
family of covering homomorphisms out of the base objects' algebras, i.e. a
subfunctor of the covering Hom-functor.  Injective covers overlap through
pullbacks, and the pasting maps across those overlaps must satisfy the
reflexivity, inverse-compatibility and triple-composition conditions before
the system counts as a localization system.  The end-to-end pipeline then
asks whether the counit on the system's colimit is an isomorphism: if so,
the quantum structure is faithfully represented by its Boolean covers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .adjunction import CounitMap, IsoReport, colimit, counit, counit_is_iso
from .algebra import (
    EventHomomorphism,
    QuantumEventAlgebra,
    compose_homs,
    enumerate_homs,
    validate_homomorphism,
)
from .observables import Observable
from .presheaves import FiniteCategory, Presheaf
from .reports import (
    CheckResult,
    NotInvertible,
    ParseError,
    StructuralError,
    ValidationReport,
)

DEFAULT_BUDGET = 10_000_000


def in_hom_functor(
    obj: Observable, xi_obs: Observable, h: EventHomomorphism
) -> bool:
    """Is h a triangle-commuting homomorphism from obj's algebra into the target?"""
    if not obj.frame.same(xi_obs.frame):
        return False
    if not h.source.same_carrier(obj.target):
        return False
    if not h.target.same_carrier(xi_obs.target):
        return False
    if not validate_homomorphism(h).passed:
        return False
    return all(
        h.mapping[obj.mapping[e]] == xi_obs.mapping[e]
        for e in obj.frame.algebra.elements
    )


@dataclass(eq=False)
class PrelocalizationSystem:
    """Named family of covers per base object, with its generating set."""

    name: str
    base: FiniteCategory
    target: Observable
    covers: dict[str, dict[str, EventHomomorphism]]
    generator_ids: frozenset[tuple[str, str]] = frozenset()

    def all_covers(self) -> list[tuple[str, str, EventHomomorphism]]:
        out = []
        for obj in self.base.objects:
            for cid in sorted(self.covers.get(obj.name, {})):
                out.append((obj.name, cid, self.covers[obj.name][cid]))
        return out

    def cover_count(self) -> int:
        return sum(len(v) for v in self.covers.values())

    def value_index(self, obj_name: str) -> dict[tuple[str, ...], str]:
        """Map from cover value-tuples (in source element order) to ids."""
        obj = self.base.obj(obj_name)
        return {
            tuple(h.mapping[e] for e in obj.target.elements): cid
            for cid, h in self.covers.get(obj_name, {}).items()
        }

    def find_cover(self, h: EventHomomorphism) -> tuple[str, str] | None:
        """Locate a cover equal in value to h, if present."""
        for obj_name, cid, cover in self.all_covers():
            if (
                cover.source.same_carrier(h.source)
                and cover.mapping == h.mapping
            ):
                return (obj_name, cid)
        return None

    def as_presheaf(self) -> Presheaf:
        at = {
            o.name: tuple(sorted(self.covers.get(o.name, {})))
            for o in self.base.objects
        }
        homs = {
            (o.name, cid): self.covers[o.name][cid]
            for o in self.base.objects
            for cid in at[o.name]
        }
        indexes = {o.name: self.value_index(o.name) for o in self.base.objects}
        restrict: dict[str, dict[str, str]] = {}
        for nm in self.base.arrow_order:
            ar = self.base.arrows[nm]
            src_obj = ar.source.name
            src_els = ar.carrier.source.elements
            table = {}
            for cid in at[ar.target.name]:
                h = self.covers[ar.target.name][cid]
                pre = tuple(h.mapping[ar.carrier.mapping[e]] for e in src_els)
                hit = indexes[src_obj].get(pre)
                if hit is None:
                    raise StructuralError(
                        f"{self.name}: not closed under precomposition at {nm}"
                    )
                table[cid] = hit
            restrict[nm] = table
        return Presheaf(f"S[{self.name}]", self.base, at, restrict, section_hom=homs)

    def __repr__(self) -> str:
        return f"PrelocalizationSystem({self.name!r}, {self.cover_count()} covers)"


def generate_system(
    name: str,
    base: FiniteCategory,
    xi_obs: Observable,
    generators: list[tuple[str, str, EventHomomorphism]],
) -> PrelocalizationSystem:
    """Smallest precomposition-closed system containing the generators.

    Each generator is given as (object name, cover id, homomorphism) and
    must lie in the covering Hom-functor at its object; otherwise it is
    rejected by name.  Closure-added covers get ids derived from the object
    and the map encoding; value-equal duplicates are merged.
    """
    covers: dict[str, dict[str, EventHomomorphism]] = {
        o.name: {} for o in base.objects
    }
    value_ids: dict[str, dict[tuple[str, ...], str]] = {
        o.name: {} for o in base.objects
    }

    def value_tuple(obj_name: str, h: EventHomomorphism) -> tuple[str, ...]:
        return tuple(h.mapping[e] for e in base.obj(obj_name).target.elements)

    gen_ids = set()
    work: list[tuple[str, str]] = []
    for obj_name, cid, h in generators:
        if obj_name not in covers:
            raise StructuralError(f"{name}: unknown base object {obj_name!r}")
        if not in_hom_functor(base.obj(obj_name), xi_obs, h):
            raise StructuralError(
                f"{name}: generator {cid!r} is not a cover of "
                f"{xi_obs.name} at {obj_name}"
            )
        t = value_tuple(obj_name, h)
        if t not in value_ids[obj_name]:
            covers[obj_name][cid] = h
            value_ids[obj_name][t] = cid
            gen_ids.add((obj_name, cid))
            work.append((obj_name, cid))

    arrows_into: dict[str, list[str]] = {o.name: [] for o in base.objects}
    for nm in base.arrow_order:
        arrows_into[base.arrows[nm].target.name].append(nm)

    while work:
        obj_name, cid = work.pop(0)
        h = covers[obj_name][cid]
        for nm in arrows_into[obj_name]:
            ar = base.arrows[nm]
            pre = compose_homs(h, ar.carrier)
            src = ar.source.name
            t = value_tuple(src, pre)
            if t not in value_ids[src]:
                new_id = f"{src}::{pre.encoding()}"
                covers[src][new_id] = EventHomomorphism(
                    pre.source, pre.target, pre.mapping, new_id
                )
                value_ids[src][t] = new_id
                work.append((src, new_id))

    return PrelocalizationSystem(
        name, base, xi_obs, covers, frozenset(gen_ids)
    )


def maximal_system(
    name: str, base: FiniteCategory, xi_obs: Observable, budget: int = DEFAULT_BUDGET
) -> PrelocalizationSystem:
    """The full covering Hom-functor as a system."""
    covers: dict[str, dict[str, EventHomomorphism]] = {}
    for obj in base.objects:
        table = {}
        for h in enumerate_homs(obj.target, xi_obs.target, budget):
            if in_hom_functor(obj, xi_obs, h):
                cid = f"{obj.name}::{h.encoding()}"
                table[cid] = EventHomomorphism(h.source, h.target, h.mapping, cid)
        covers[obj.name] = table
    gen_ids = frozenset(
        (o, cid) for o, t in covers.items() for cid in t
    )
    return PrelocalizationSystem(name, base, xi_obs, covers, gen_ids)


def validate_system(system: PrelocalizationSystem) -> ValidationReport:
    """Subfunctor closure, membership in the covering Hom-functor, minimality."""
    checks: list[CheckResult] = []

    w = None
    for obj_name, cid, h in system.all_covers():
        if not in_hom_functor(system.base.obj(obj_name), system.target, h):
            w = (obj_name, cid)
            break
    checks.append(CheckResult("covers-in-hom-functor", w is None, w or ()))

    indexes = {o.name: system.value_index(o.name) for o in system.base.objects}
    w = None
    for nm in system.base.arrow_order:
        ar = system.base.arrows[nm]
        src_els = ar.carrier.source.elements
        for cid, h in system.covers.get(ar.target.name, {}).items():
            pre = tuple(h.mapping[ar.carrier.mapping[e]] for e in src_els)
            if pre not in indexes[ar.source.name]:
                w = (nm, cid)
                break
        if w:
            break
    checks.append(CheckResult("subfunctor-closed", w is None, w or ()))

    # minimality relative to the generators: every non-generator must be
    # producible by precomposing some other member
    w = None
    if system.generator_ids:
        producers: dict[tuple[str, tuple[str, ...]], set[tuple[str, str]]] = {}
        for nm in system.base.arrow_order:
            ar = system.base.arrows[nm]
            src_els = ar.carrier.source.elements
            for cid2, h2 in system.covers.get(ar.target.name, {}).items():
                t = tuple(h2.mapping[ar.carrier.mapping[e]] for e in src_els)
                producers.setdefault((ar.source.name, t), set()).add(
                    (ar.target.name, cid2)
                )
        for obj_name, cid, h in system.all_covers():
            if (obj_name, cid) in system.generator_ids:
                continue
            obj = system.base.obj(obj_name)
            t = tuple(h.mapping[e] for e in obj.target.elements)
            others = producers.get((obj_name, t), set()) - {(obj_name, cid)}
            if not others:
                w = (obj_name, cid)
                break
    checks.append(CheckResult("generator-minimal", w is None, w or ()))

    return ValidationReport(system.name, (), tuple(checks))


# -- pullbacks and pasting ----------------------------------------------------


@dataclass(eq=False)
class CoverPullback:
    """Set-level pullback of two covers over their common target."""

    left: EventHomomorphism
    right: EventHomomorphism
    carrier: tuple[tuple[str, str], ...]

    def proj_left(self) -> tuple[str, ...]:
        seen = []
        for x, _ in self.carrier:
            if x not in seen:
                seen.append(x)
        return tuple(seen)

    def proj_right(self) -> tuple[str, ...]:
        seen = []
        for _, y in self.carrier:
            if y not in seen:
                seen.append(y)
        return tuple(seen)


def pullback(
    psi1: EventHomomorphism, psi2: EventHomomorphism, xi_obs: Observable
) -> CoverPullback:
    """Pairs (x, y) with psi1(x) = psi2(y); projections are the coordinates."""
    if not psi1.target.same_carrier(xi_obs.target) or not psi2.target.same_carrier(
        xi_obs.target
    ):
        raise StructuralError("pullback: covers do not share the target algebra")
    carrier = tuple(
        (x, y)
        for x in psi1.source.elements
        for y in psi2.source.elements
        if psi1.mapping[x] == psi2.mapping[y]
    )
    return CoverPullback(psi1, psi2, carrier)


def pullback_universal_check(
    pb: CoverPullback,
    cone_sources: list[QuantumEventAlgebra],
    budget: int = DEFAULT_BUDGET,
) -> ValidationReport:
    """Finite universal-property check against cones from the given algebras.

    For every pair of homomorphisms (h, g) out of a test algebra with
    psi1 o h = psi2 o g, the mediating function t -> (h(t), g(t)) must land
    in the carrier and be the unique map commuting with both projections.
    """
    from .algebra import as_boolean

    w = None
    checked = 0
    for src in cone_sources:
        homs1 = [
            h
            for h in enumerate_homs(as_boolean(src), pb.left.source, budget)
        ]
        homs2 = [
            g
            for g in enumerate_homs(as_boolean(src), pb.right.source, budget)
        ]
        for h, g in itertools.product(homs1, homs2):
            if any(
                pb.left.mapping[h.mapping[t]] != pb.right.mapping[g.mapping[t]]
                for t in src.elements
            ):
                continue
            checked += 1
            carrier_set = set(pb.carrier)
            mediating = {t: (h.mapping[t], g.mapping[t]) for t in src.elements}
            if any(v not in carrier_set for v in mediating.values()):
                w = (src.name, "mediating-misses-carrier")
                break
            # uniqueness: carrier pairs are determined by their projections
            if any(
                (x1, y1) != (x2, y2)
                for (x1, y1), (x2, y2) in itertools.product(carrier_set, carrier_set)
                if x1 == x2 and y1 == y2
            ):
                w = (src.name, "projections-do-not-separate")
                break
        if w:
            break
    checks = (
        CheckResult("pullback-universal", w is None, w or (str(checked),)),
    )
    return ValidationReport("pullback", (), checks)


@dataclass(eq=False)
class PastingMap:
    """Bijection between overlap images of two injective covers."""

    left: EventHomomorphism
    right: EventHomomorphism
    domain: tuple[str, ...]
    codomain: tuple[str, ...]
    mapping: dict[str, str]

    def is_identity_on_domain(self) -> bool:
        return all(v == k for k, v in self.mapping.items())


def pasting_map(
    psi1: EventHomomorphism, psi2: EventHomomorphism, xi_obs: Observable
) -> PastingMap:
    """Transition map from psi2's overlap image to psi1's, across the pullback.

    Defined only when both covers are injective; the domain is the set of
    psi2-source elements whose value lies in psi1's image.
    """
    for psi in (psi1, psi2):
        if not psi.injective():
            raise NotInvertible(
                f"cover {psi.name or psi.encoding()} is not injective"
            )
    pb = pullback(psi1, psi2, xi_obs)
    mapping: dict[str, str] = {}
    for x, y in pb.carrier:
        if y in mapping and mapping[y] != x:
            raise NotInvertible("pullback projections do not invert")
        mapping[y] = x
    domain = tuple(y for y in psi2.source.elements if y in mapping)
    codomain = tuple(
        x for x in psi1.source.elements if x in set(mapping.values())
    )
    if len(set(mapping.values())) != len(mapping):
        raise NotInvertible("pasting map is not a bijection")
    return PastingMap(psi1, psi2, domain, codomain, mapping)


def cocycle_report(
    covers: list[tuple[str, str, EventHomomorphism]], xi_obs: Observable, subject: str
) -> ValidationReport:
    """Reflexivity, inverse-compatibility and triple composition of pasting maps.

    Pasting maps for all ordered cover pairs are built once and reused by
    the pair and triple scans; overlap gating uses the image intersection
    against the bottom element.
    """
    bottom = xi_obs.target.bottom
    checks: list[CheckResult] = []

    images = {cid: set(h.mapping.values()) for _, cid, h in covers}
    omega: dict[tuple[str, str], PastingMap] = {}
    for (_, cid1, h1), (_, cid2, h2) in itertools.product(covers, covers):
        omega[(cid1, cid2)] = pasting_map(h1, h2, xi_obs)

    def overlap(*cids: str) -> bool:
        common = set.intersection(*(images[c] for c in cids))
        return bool(common - {bottom})

    w = None
    for _, cid, h in covers:
        om = omega[(cid, cid)]
        if not om.is_identity_on_domain() or set(om.domain) != set(
            h.source.elements
        ):
            w = (cid,)
            break
    checks.append(CheckResult("omega-identity", w is None, w or ()))

    w = None
    for (_, cid1, _h1), (_, cid2, _h2) in itertools.permutations(covers, 2):
        if not overlap(cid1, cid2):
            continue
        om12, om21 = omega[(cid1, cid2)], omega[(cid2, cid1)]
        for x in om21.domain:
            if om12.mapping.get(om21.mapping[x]) != x:
                w = (cid1, cid2, x)
                break
        if w:
            break
    checks.append(CheckResult("omega-symmetry", w is None, w or ()))

    w = None
    for (_, cid1, _h1), (_, cid2, _h2), (_, cid3, _h3) in itertools.permutations(
        covers, 3
    ):
        if not overlap(cid1, cid2, cid3):
            continue
        om12, om23, om13 = (
            omega[(cid1, cid2)],
            omega[(cid2, cid3)],
            omega[(cid1, cid3)],
        )
        for x in om23.domain:
            mid = om23.mapping[x]
            if mid not in om12.mapping or x not in om13.mapping:
                continue
            if om12.mapping[mid] != om13.mapping[x]:
                w = (cid1, cid2, cid3, x)
                break
        if w:
            break
    checks.append(CheckResult("omega-cocycle", w is None, w or ()))

    return ValidationReport(subject, (), tuple(checks))


def cocycle_check(system: PrelocalizationSystem) -> ValidationReport:
    """Cocycle conditions for a system whose covers are all injective.

    Refuses (NotInvertible) if any cover is not injective; systems with
    non-injective members get their injective part checked inside
    is_localization_system instead.
    """
    covers = system.all_covers()
    for _, cid, h in covers:
        if not h.injective():
            raise NotInvertible(
                f"{system.name}: cover {cid} is not injective"
            )
    return cocycle_report(covers, system.target, f"cocycle[{system.name}]")


@dataclass(eq=False)
class Verdict:
    """Localization status of a prelocalization system."""

    system: str
    kind: str  # "localization" | "prelocalization-only"
    degenerate: bool
    system_report: ValidationReport
    cocycle: ValidationReport | None
    reason: str = ""

    @property
    def is_localization(self) -> bool:
        return self.kind == "localization"

    def lines(self) -> list[str]:
        status = "PASS" if self.is_localization else "FAIL"
        tail = " degenerate" if self.degenerate else ""
        if self.reason:
            tail += f" {self.reason}"
        return [f"{status} {self.system}.localization{tail}"]


def is_localization_system(system: PrelocalizationSystem) -> Verdict:
    """Prelocalization vs localization verdict.

    Localization requires the subfunctor/membership checks to pass, every
    cover to be a valid structure map (already part of membership), and the
    pasting cocycle to hold on the injective covers.  An empty system is a
    localization vacuously, flagged degenerate.
    """
    sysrep = validate_system(system)
    if system.cover_count() == 0:
        return Verdict(system.name, "localization", True, sysrep, None)
    if not sysrep.passed:
        return Verdict(
            system.name,
            "prelocalization-only",
            False,
            sysrep,
            None,
            reason="system-validation-failed",
        )
    injective = [
        (o, cid, h) for (o, cid, h) in system.all_covers() if h.injective()
    ]
    cocyc = cocycle_report(
        injective, system.target, f"cocycle[{system.name}]"
    )
    if not cocyc.passed:
        return Verdict(
            system.name,
            "prelocalization-only",
            False,
            sysrep,
            cocyc,
            reason="cocycle-failed",
        )
    return Verdict(system.name, "localization", False, sysrep, cocyc)


# -- end-to-end pipeline ------------------------------------------------------


@dataclass(eq=False)
class FullReport:
    """Everything the headline pipeline produces, with one-word verdict."""

    system: str
    verdict: Verdict
    counit_map: CounitMap | None
    iso: IsoReport | None
    headline: str  # "ISO" | "NOT-ISO" | "NOT-LOCALIZATION"

    def lines(self) -> list[str]:
        out = []
        out.extend(self.verdict.system_report.lines())
        if self.verdict.cocycle is not None:
            out.extend(self.verdict.cocycle.lines())
        out.extend(self.verdict.lines())
        if self.iso is not None:
            out.extend(self.iso.lines())
        status = "PASS" if self.headline == "ISO" else "FAIL"
        out.append(f"{status} {self.system}.verdict-iso {self.headline}")
        return out


def boolean_representation_verdict(system: PrelocalizationSystem) -> FullReport:
    """Localization check, colimit, counit, and the isomorphism verdict."""
    verdict = is_localization_system(system)
    if not verdict.is_localization:
        return FullReport(system.name, verdict, None, None, "NOT-LOCALIZATION")
    x = system.as_presheaf()
    cm = counit(x, system.target)
    iso = counit_is_iso(cm)
    headline = "ISO" if iso.is_iso else "NOT-ISO"
    return FullReport(system.name, verdict, cm, iso, headline)


# -- system file format -------------------------------------------------------


def parse_system_file(
    text: str,
    algebras: dict[str, QuantumEventAlgebra],
) -> tuple[str, str, list[tuple[str, str]], dict[str, EventHomomorphism]]:
    """Parse 'system/cover/hom/map' lines.

    Returns (system name, target observable name, [(object, hom name)],
    {hom name: homomorphism}).  The base category and the target observable
    are resolved by the caller.
    """
    from .algebra import _content_lines

    lines = _content_lines(text)
    if not lines or not lines[0].startswith("system "):
        raise ParseError("system file must start with 'system <name> target <obs>'")
    head = lines[0].split()
    if len(head) != 4 or head[2] != "target":
        raise ParseError("system header must be 'system <name> target <obs>'")
    name, target_name = head[1], head[3]
    cover_lines: list[tuple[str, str]] = []
    homs: dict[str, EventHomomorphism] = {}
    current: dict | None = None

    def finish() -> None:
        nonlocal current
        if current is None:
            return
        src, tgt = current["src"], current["tgt"]
        missing = [e for e in src.elements if e not in current["map"]]
        if missing:
            raise ParseError(
                f"hom {current['name']}: map lines missing for {', '.join(missing)}"
            )
        homs[current["name"]] = EventHomomorphism(
            src, tgt, current["map"], current["name"]
        )
        current = None

    for line in lines[1:]:
        parts = line.split()
        if parts[0] == "cover" and len(parts) == 4 and parts[2] == ":":
            cover_lines.append((parts[1], parts[3]))
        elif parts[0] == "hom" and len(parts) == 5 and parts[3] == "->":
            finish()
            hname, src_name, tgt_name = parts[1], parts[2], parts[4]
            if hname in homs:
                raise ParseError(f"duplicate hom name {hname!r}")
            if src_name not in algebras or tgt_name not in algebras:
                raise ParseError(
                    f"hom {hname}: unknown algebra in {src_name!r} -> {tgt_name!r}"
                )
            current = {
                "name": hname,
                "src": algebras[src_name],
                "tgt": algebras[tgt_name],
                "map": {},
            }
        elif parts[0] == "map" and len(parts) == 4 and parts[2] == "->":
            if current is None:
                raise ParseError(f"map line outside hom block: {line!r}")
            if parts[1] in current["map"]:
                raise ParseError(
                    f"hom {current['name']}: duplicate map line for {parts[1]}"
                )
            if parts[1] not in current["src"].index:
                raise ParseError(
                    f"hom {current['name']}: unknown source element {parts[1]!r}"
                )
            if parts[3] not in current["tgt"].index:
                raise ParseError(
                    f"hom {current['name']}: unknown target element {parts[3]!r}"
                )
            current["map"][parts[1]] = parts[3]
        else:
            raise ParseError(f"unrecognized system line {line!r}")
    finish()
    for obj_name, hname in cover_lines:
        if hname not in homs:
            raise ParseError(f"cover references undefined hom {hname!r}")
    return name, target_name, cover_lines, homs
