"""Finite categories of Boolean observables and set-valued presheaves.

Objects of a base category are Boolean-valued observables; arrows are
commuting triangles over a shared frame.  Presheaves assign a finite set of
section ids to each object and a restriction function to each arrow,
contravariantly.  The representable presheaf, the covering Hom-functor of a
quantum observable, the category of elements, and brute-force natural
transformation enumeration all live here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .algebra import (
    EventHomomorphism,
    compose_homs,
    enumerate_homs,
)
from .observables import Observable, ObservableArrow, validate_arrow
from .reports import (
    BudgetExceeded,
    CheckResult,
    ParseError,
    StructuralError,
    ValidationReport,
)

DEFAULT_BUDGET = 10_000_000


@dataclass(eq=False)
class FiniteCategory:
    """Explicitly listed finite category of Boolean observables.

    The composition table is derived from carrier-map composition, so
    associativity is inherited from function composition; construction
    fails if some composite is missing from the arrow list (i.e. the
    listed arrows are not closed).
    """

    name: str
    objects: tuple[Observable, ...]
    arrows: dict[str, ObservableArrow]
    composition: dict[tuple[str, str], str] = field(default_factory=dict)
    identities: dict[str, str] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        name: str,
        objects: list[Observable],
        arrows: list[ObservableArrow],
    ) -> "FiniteCategory":
        names = [o.name for o in objects]
        if len(set(names)) != len(names):
            raise StructuralError(f"{name}: duplicate object names")
        by_name: dict[str, ObservableArrow] = {}
        for ar in arrows:
            if ar.name in by_name:
                raise StructuralError(f"{name}: duplicate arrow name {ar.name}")
            if ar.source.name not in names or ar.target.name not in names:
                raise StructuralError(
                    f"{name}: arrow {ar.name} endpoints not among objects"
                )
            rep = validate_arrow(ar)
            if not rep.passed:
                raise StructuralError(
                    f"{name}: arrow {ar.name} is not a commuting triangle"
                )
            by_name[ar.name] = ar

        # locate arrows by the value of their carrier map
        def key(ar: ObservableArrow) -> tuple:
            return (
                ar.source.name,
                ar.target.name,
                tuple(ar.carrier.mapping[e] for e in ar.carrier.source.elements),
            )

        by_value = {key(ar): ar.name for ar in by_name.values()}
        identities = {}
        for obj in objects:
            ident = (
                obj.name,
                obj.name,
                tuple(obj.target.elements),
            )
            if ident not in by_value:
                raise StructuralError(f"{name}: missing identity on {obj.name}")
            identities[obj.name] = by_value[ident]

        composition: dict[tuple[str, str], str] = {}
        for g in by_name.values():
            for f in by_name.values():
                if f.target.name != g.source.name:
                    continue
                comp = compose_homs(g.carrier, f.carrier)
                k = (
                    f.source.name,
                    g.target.name,
                    tuple(comp.mapping[e] for e in comp.source.elements),
                )
                if k not in by_value:
                    raise StructuralError(
                        f"{name}: not closed under composition "
                        f"({g.name} after {f.name})"
                    )
                composition[(g.name, f.name)] = by_value[k]
        return cls(name, tuple(objects), by_name, composition, identities)

    @classmethod
    def full(
        cls,
        name: str,
        objects: list[Observable],
        budget: int = DEFAULT_BUDGET,
    ) -> "FiniteCategory":
        """Base with every commuting triangle between the given observables."""
        arrows: list[ObservableArrow] = []
        for src in objects:
            for tgt in objects:
                homs = enumerate_homs(src.target, tgt.target, budget)
                idx = 0
                for h in homs:
                    if any(
                        h.mapping[src.mapping[e]] != tgt.mapping[e]
                        for e in src.frame.algebra.elements
                    ):
                        continue
                    if src.name == tgt.name and h.is_identity():
                        nm = f"id_{src.name}"
                    else:
                        nm = f"{src.name}~{idx}~{tgt.name}"
                    arrows.append(ObservableArrow(nm, src, tgt, h))
                    idx += 1
        return cls.build(name, objects, arrows)

    # -- lookups ----------------------------------------------------------

    @cached_property
    def object_index(self) -> dict[str, int]:
        return {o.name: i for i, o in enumerate(self.objects)}

    def obj(self, name: str) -> Observable:
        return self.objects[self.object_index[name]]

    def identity(self, obj_name: str) -> str:
        return self.identities[obj_name]

    def compose(self, g: str, f: str) -> str:
        """Name of g after f."""
        return self.composition[(g, f)]

    @cached_property
    def arrow_order(self) -> tuple[str, ...]:
        def sort_key(nm: str) -> tuple:
            ar = self.arrows[nm]
            return (
                self.object_index[ar.source.name],
                self.object_index[ar.target.name],
                tuple(
                    ar.carrier.mapping[e] for e in ar.carrier.source.elements
                ),
            )

        return tuple(sorted(self.arrows, key=sort_key))

    def hom(self, src: str, tgt: str) -> tuple[str, ...]:
        return tuple(
            nm
            for nm in self.arrow_order
            if self.arrows[nm].source.name == src
            and self.arrows[nm].target.name == tgt
        )

    def __repr__(self) -> str:
        return (
            f"FiniteCategory({self.name!r}, {len(self.objects)} objects, "
            f"{len(self.arrows)} arrows)"
        )


@dataclass(eq=False)
class Presheaf:
    """Contravariant set-valued assignment on a finite base category.

    ``at`` maps object names to section-id tuples; ``restrict`` maps arrow
    names to functions from sections at the arrow's target object to
    sections at its source object.  When sections stand for covering
    homomorphisms, ``section_hom`` carries them, keyed by (object, id).
    """

    name: str
    base: FiniteCategory
    at: dict[str, tuple[str, ...]]
    restrict: dict[str, dict[str, str]]
    section_hom: dict[tuple[str, str], EventHomomorphism] | None = None

    def sections(self, obj: str) -> tuple[str, ...]:
        return self.at.get(obj, ())

    def hom_of(self, obj: str, sid: str) -> EventHomomorphism:
        if self.section_hom is None:
            raise StructuralError(f"{self.name}: sections carry no homomorphisms")
        return self.section_hom[(obj, sid)]

    def total_sections(self) -> int:
        return sum(len(self.sections(o.name)) for o in self.base.objects)

    def __repr__(self) -> str:
        return f"Presheaf({self.name!r} over {self.base.name!r})"


def validate_presheaf(x: Presheaf) -> ValidationReport:
    """Check identity and contravariant composition laws on all arrows."""
    base = x.base
    structural = []
    for nm in base.arrow_order:
        if nm not in x.restrict:
            structural.append(f"restriction missing for arrow {nm}")
            continue
        ar = base.arrows[nm]
        table = x.restrict[nm]
        for sid in x.sections(ar.target.name):
            if sid not in table:
                structural.append(f"restriction {nm} undefined on {sid}")
            elif table[sid] not in x.sections(ar.source.name):
                structural.append(
                    f"restriction {nm} sends {sid} outside sections"
                )
    if structural:
        return ValidationReport(x.name, tuple(structural))

    checks = []
    w = None
    for obj in base.objects:
        ident = base.identity(obj.name)
        for sid in x.sections(obj.name):
            if x.restrict[ident][sid] != sid:
                w = (ident, sid)
                break
        if w:
            break
    checks.append(CheckResult("identity-law", w is None, w or ()))

    w = None
    for (g, f), gf in base.composition.items():
        tgt = base.arrows[g].target.name
        for sid in x.sections(tgt):
            if x.restrict[f][x.restrict[g][sid]] != x.restrict[gf][sid]:
                w = (g, f, sid)
                break
        if w:
            break
    checks.append(CheckResult("composition-law", w is None, w or ()))

    return ValidationReport(x.name, (), tuple(checks))


def empty_presheaf(base: FiniteCategory) -> Presheaf:
    return Presheaf(
        "empty",
        base,
        {o.name: () for o in base.objects},
        {nm: {} for nm in base.arrows},
        section_hom={},
    )


def constant_presheaf(base: FiniteCategory, sections: tuple[str, ...]) -> Presheaf:
    return Presheaf(
        "const",
        base,
        {o.name: sections for o in base.objects},
        {nm: {s: s for s in sections} for nm in base.arrows},
    )


def representable(base: FiniteCategory, xi: str) -> Presheaf:
    """The presheaf of arrows into xi; sections are arrow names."""
    if xi not in base.object_index:
        raise StructuralError(f"{xi} is not an object of {base.name}")
    at = {o.name: base.hom(o.name, xi) for o in base.objects}
    restrict: dict[str, dict[str, str]] = {}
    for nm in base.arrow_order:
        ar = base.arrows[nm]
        restrict[nm] = {
            v: base.compose(v, nm) for v in at[ar.target.name]
        }
    return Presheaf(f"y[{xi}]", base, at, restrict)


def hom_functor_R(
    base: FiniteCategory, xi_obs: Observable, budget: int = DEFAULT_BUDGET
) -> Presheaf:
    """Covering Hom-functor of a quantum observable over a Boolean base.

    At each object the sections are all homomorphisms from the object's
    algebra into the quantum target whose triangle with the two observable
    maps commutes; restriction is precomposition with the arrow carrier.
    Section ids embed the object name and the map encoding, so they are
    globally unique.
    """
    at: dict[str, tuple[str, ...]] = {}
    homs: dict[tuple[str, str], EventHomomorphism] = {}
    for obj in base.objects:
        if not obj.frame.same(xi_obs.frame):
            raise StructuralError(
                f"object {obj.name} and {xi_obs.name} use different frames"
            )
        sids = []
        for h in enumerate_homs(obj.target, xi_obs.target, budget):
            if any(
                h.mapping[obj.mapping[e]] != xi_obs.mapping[e]
                for e in obj.frame.algebra.elements
            ):
                continue
            sid = f"{obj.name}::{h.encoding()}"
            sids.append(sid)
            homs[(obj.name, sid)] = EventHomomorphism(
                h.source, h.target, h.mapping, sid
            )
        at[obj.name] = tuple(sids)

    restrict: dict[str, dict[str, str]] = {}
    for nm in base.arrow_order:
        ar = base.arrows[nm]
        table = {}
        for sid in at[ar.target.name]:
            h = homs[(ar.target.name, sid)]
            pre = compose_homs(h, ar.carrier)
            nsid = f"{ar.source.name}::{pre.encoding()}"
            if (ar.source.name, nsid) not in homs:
                raise StructuralError(
                    f"hom functor not closed under precomposition at {nm}"
                )
            table[sid] = nsid
        restrict[nm] = table
    return Presheaf(f"R[{xi_obs.name}]", base, at, restrict, section_hom=homs)


# -- category of elements ----------------------------------------------------


@dataclass(frozen=True)
class ElementsArrow:
    base_arrow: str
    src: tuple[str, str]
    tgt: tuple[str, str]


@dataclass(eq=False)
class ElementsCategory:
    """Total category of (object, section) pairs over a presheaf.

    Arrows (xi', p') -> (xi, p) are base arrows u: xi' -> xi with
    restrict(u)(p) = p'; projection to the base drops the section.
    """

    presheaf: Presheaf
    pairs: tuple[tuple[str, str], ...]
    arrows: tuple[ElementsArrow, ...]

    def fiber(self, obj: str) -> tuple[tuple[str, str], ...]:
        return tuple(p for p in self.pairs if p[0] == obj)

    def arrows_into(self, pair: tuple[str, str]) -> tuple[ElementsArrow, ...]:
        return tuple(a for a in self.arrows if a.tgt == pair)

    def terminal_objects(self) -> tuple[tuple[str, str], ...]:
        """Pairs receiving exactly one arrow from every pair."""
        out = []
        for cand in self.pairs:
            incoming = self.arrows_into(cand)
            by_src: dict[tuple[str, str], int] = {}
            for a in incoming:
                by_src[a.src] = by_src.get(a.src, 0) + 1
            if all(by_src.get(p, 0) == 1 for p in self.pairs):
                out.append(cand)
        return tuple(out)


def category_of_elements(x: Presheaf) -> ElementsCategory:
    pairs = tuple(
        (o.name, sid) for o in x.base.objects for sid in x.sections(o.name)
    )
    arrows = []
    for nm in x.base.arrow_order:
        ar = x.base.arrows[nm]
        for sid in x.sections(ar.target.name):
            arrows.append(
                ElementsArrow(
                    nm,
                    (ar.source.name, x.restrict[nm][sid]),
                    (ar.target.name, sid),
                )
            )
    return ElementsCategory(x, pairs, tuple(arrows))


def validate_elements_category(g: ElementsCategory) -> ValidationReport:
    """Discreteness of fibers and projection bookkeeping."""
    x = g.presheaf
    checks = []

    w = None
    for a in g.arrows:
        ident = x.base.identity(a.tgt[0])
        if a.base_arrow == ident and a.src != a.tgt:
            w = (a.base_arrow, a.src[1], a.tgt[1])
            break
    checks.append(CheckResult("discrete-fibers", w is None, w or ()))

    ok = len(g.pairs) == x.total_sections()
    checks.append(CheckResult("pair-count", ok))

    w = None
    for a in g.arrows:
        ar = x.base.arrows[a.base_arrow]
        if a.src[0] != ar.source.name or a.tgt[0] != ar.target.name:
            w = (a.base_arrow,)
            break
    checks.append(CheckResult("projection", w is None, w or ()))

    return ValidationReport(f"elements({x.name})", (), tuple(checks))


# -- natural transformations -------------------------------------------------


def nat_transformations(
    x: Presheaf, y: Presheaf, budget: int = DEFAULT_BUDGET
) -> list[dict[tuple[str, str], str]]:
    """All natural transformations x => y by exhaustive component search.

    Components are assigned object by object; naturality squares whose
    other endpoint is already assigned pin component values, so only the
    genuinely free choices are multiplied out.  The budget counts candidate
    component-functions generated across the whole search.
    """
    if x.base is not y.base and x.base.name != y.base.name:
        raise StructuralError("presheaves live over different bases")
    base = x.base
    order = [o.name for o in base.objects]
    arrows_by_endpoint: dict[str, list[str]] = {o: [] for o in order}
    for nm in base.arrow_order:
        ar = base.arrows[nm]
        arrows_by_endpoint[ar.source.name].append(nm)
        if ar.target.name != ar.source.name:
            arrows_by_endpoint[ar.target.name].append(nm)

    results: list[dict[tuple[str, str], str]] = []
    generated = 0

    def consistent(assign: dict[str, dict[str, str]], arrow_name: str) -> bool:
        ar = base.arrows[arrow_name]
        src, tgt = ar.source.name, ar.target.name
        if src not in assign or tgt not in assign:
            return True
        for p in x.sections(tgt):
            lhs = assign[src][x.restrict[arrow_name][p]]
            rhs = y.restrict[arrow_name][assign[tgt][p]]
            if lhs != rhs:
                return False
        return True

    def extend(i: int, assign: dict[str, dict[str, str]]) -> None:
        nonlocal generated
        if i == len(order):
            results.append(
                {
                    (obj, p): assign[obj][p]
                    for obj in order
                    for p in x.sections(obj)
                }
            )
            return
        obj = order[i]
        secs = x.sections(obj)
        ysecs = y.sections(obj)

        # values pinned by squares into already-assigned objects
        pinned: dict[str, str] = {}
        feasible = True
        for nm in arrows_by_endpoint[obj]:
            ar = base.arrows[nm]
            if ar.source.name == obj and ar.target.name in assign and ar.target.name != obj:
                for p in x.sections(ar.target.name):
                    want = y.restrict[nm][assign[ar.target.name][p]]
                    got = x.restrict[nm][p]
                    if got in pinned and pinned[got] != want:
                        feasible = False
                        break
                    pinned[got] = want
            if not feasible:
                break
        if not feasible:
            return

        free = [p for p in secs if p not in pinned]
        total = max(1, len(ysecs)) ** len(free) if free else 1
        generated += total
        if generated > budget:
            raise BudgetExceeded(
                f"Nat({x.name}, {y.name})", generated, budget
            )
        for combo in itertools.product(ysecs, repeat=len(free)):
            comp = dict(pinned)
            comp.update(zip(free, combo))
            assign[obj] = comp
            ok = all(
                consistent(assign, nm) for nm in arrows_by_endpoint[obj]
            )
            if ok:
                extend(i + 1, assign)
            del assign[obj]

    extend(0, {})
    return results


# -- presheaf file format ----------------------------------------------------


def parse_presheaf(text: str, base: FiniteCategory) -> Presheaf:
    from .algebra import _content_lines

    lines = _content_lines(text)
    if not lines or not lines[0].startswith("presheaf "):
        raise ParseError("presheaf file must start with 'presheaf <name> over <cat>'")
    head = lines[0].split()
    if len(head) != 4 or head[2] != "over":
        raise ParseError("presheaf header must be 'presheaf <name> over <cat>'")
    name, catname = head[1], head[3]
    if catname != base.name:
        raise ParseError(
            f"{name}: file targets category {catname!r}, given {base.name!r}"
        )
    at: dict[str, tuple[str, ...]] = {o.name: () for o in base.objects}
    restrict: dict[str, dict[str, str]] = {nm: {} for nm in base.arrows}
    for line in lines[1:]:
        parts = line.split()
        if parts[0] == "sections" and len(parts) >= 3 and parts[2] == ":":
            obj = parts[1]
            if obj not in base.object_index:
                raise ParseError(f"{name}: unknown object {obj!r}")
            at[obj] = tuple(parts[3:])
        elif parts[0] == "restrict" and len(parts) == 6 and parts[2] == ":" and parts[4] == "->":
            arrow, frm, to = parts[1], parts[3], parts[5]
            if arrow not in base.arrows:
                raise ParseError(f"{name}: unknown arrow {arrow!r}")
            restrict[arrow][frm] = to
        else:
            raise ParseError(f"{name}: unrecognized line {line!r}")
    return Presheaf(name, base, at, restrict)
