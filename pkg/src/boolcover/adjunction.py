"""Colimit of coefficient algebras over a presheaf, and the counit test.

The left-adjoint value on a presheaf X is computed at carrier level: the
disjoint union of the coefficient algebras A(xi), one copy per section
p of X(xi), quotiented by the congruence generated by

    (xi', X(v)(p), q')  ~  (xi, p, A(v)(q'))      for v : xi' -> xi.

Union-find builds the quotient; class ids are the canonical minimal
generator.  When X is a subfunctor of the covering Hom-functor of a
quantum observable, evaluating a representative gives the counit, and the
headline question is whether that map is an isomorphism: surjective
(the covers reach everything), injective (overlapping covers agree), and
structure-preserving.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

from .algebra import EventHomomorphism, compose_homs
from .observables import Observable
from .presheaves import FiniteCategory, Presheaf, category_of_elements, hom_functor_R
from .reports import (
    BudgetExceeded,
    CheckResult,
    IllFormedSubfunctor,
    StructuralError,
    ValidationReport,
)

DEFAULT_BUDGET = 10_000_000


class GeneratorTriple(NamedTuple):
    obj: str
    section: str
    element: str


class UnionFind:
    """Disjoint sets over integer indices with path compression."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            # keep the smaller index as root so class ids are canonical
            if ri < rj:
                self.parent[rj] = ri
            else:
                self.parent[ri] = rj


@dataclass(eq=False)
class ColimitCarrier:
    """Quotient of the tensored generators (section, element) pairs."""

    presheaf: Presheaf
    generators: tuple[GeneratorTriple, ...]
    classes: dict[str, tuple[GeneratorTriple, ...]]
    class_of: dict[GeneratorTriple, str]

    def class_of_triple(self, obj: str, section: str, element: str) -> str:
        return self.class_of[GeneratorTriple(obj, section, element)]

    def __repr__(self) -> str:
        return (
            f"ColimitCarrier({self.presheaf.name!r}, "
            f"{len(self.generators)} generators, {len(self.classes)} classes)"
        )


def _class_id(g: GeneratorTriple) -> str:
    return f"{g.obj}:{g.section}:{g.element}"


def colimit(x: Presheaf) -> ColimitCarrier:
    """Carrier-level colimit via union-find over the tensor relation."""
    base = x.base
    gens: list[GeneratorTriple] = []
    index: dict[GeneratorTriple, int] = {}
    for obj in base.objects:
        for p in x.sections(obj.name):
            for q in obj.target.elements:
                g = GeneratorTriple(obj.name, p, q)
                index[g] = len(gens)
                gens.append(g)

    uf = UnionFind(len(gens))
    for nm in base.arrow_order:
        ar = base.arrows[nm]
        src, tgt = ar.source.name, ar.target.name
        for p in x.sections(tgt):
            pv = x.restrict[nm][p]
            for q2 in ar.carrier.source.elements:
                left = GeneratorTriple(src, pv, q2)
                right = GeneratorTriple(tgt, p, ar.carrier.mapping[q2])
                uf.union(index[left], index[right])

    grouped: dict[int, list[GeneratorTriple]] = {}
    for g in gens:
        grouped.setdefault(uf.find(index[g]), []).append(g)
    classes: dict[str, tuple[GeneratorTriple, ...]] = {}
    class_of: dict[GeneratorTriple, str] = {}
    for root in sorted(grouped):
        members = tuple(grouped[root])
        cid = _class_id(members[0])
        classes[cid] = members
        for g in members:
            class_of[g] = cid
    return ColimitCarrier(x, tuple(gens), classes, class_of)


def colimit_dump(carrier: ColimitCarrier) -> str:
    lines = []
    for cid, members in carrier.classes.items():
        body = " ".join(f"({g.section},{g.element})" for g in members)
        lines.append(f"class {cid} : {body}")
    return "\n".join(lines) + "\n"


# -- counit -------------------------------------------------------------------


@dataclass(eq=False)
class CounitMap:
    """Evaluation of colimit classes in the quantum target."""

    carrier: ColimitCarrier
    target: Observable
    value: dict[str, str]


def counit(x: Presheaf, xi_obs: Observable) -> CounitMap:
    """Evaluate each class by its representatives; must be single-valued.

    Every section of x must carry a homomorphism into the target algebra
    (x is a subfunctor of the covering Hom-functor); if two generators of
    one class evaluate differently the input was not a subfunctor and
    IllFormedSubfunctor reports the clash.
    """
    if x.section_hom is None:
        raise StructuralError(f"{x.name}: sections carry no homomorphisms")
    carrier = colimit(x)
    value: dict[str, str] = {}
    for cid, members in carrier.classes.items():
        vals = []
        for g in members:
            h = x.hom_of(g.obj, g.section)
            vals.append((h.mapping[g.element], g))
        distinct = {v for v, _ in vals}
        if len(distinct) > 1:
            (v1, g1), (v2, g2) = vals[0], next(
                (v, g) for v, g in vals if v != vals[0][0]
            )
            raise IllFormedSubfunctor(
                f"{x.name}: class {cid} evaluates to both {v1} at "
                f"({g1.section},{g1.element}) and {v2} at ({g2.section},{g2.element})"
            )
        value[cid] = vals[0][0]
    return CounitMap(carrier, xi_obs, value)


@dataclass(eq=False)
class IsoReport:
    """Three-part verdict on a counit map, with witnesses."""

    subject: str
    surjective: bool
    missing: tuple[str, ...]
    injective: bool
    clash: tuple[str, ...]
    structure_ok: bool
    structure_witness: tuple[str, ...]

    @property
    def is_iso(self) -> bool:
        return self.surjective and self.injective and self.structure_ok

    def lines(self) -> list[str]:
        out = []
        out.append(
            ("PASS" if self.surjective else "FAIL")
            + f" {self.subject}.counit-surjective"
            + ((" " + " ".join(self.missing)) if self.missing else "")
        )
        out.append(
            ("PASS" if self.injective else "FAIL")
            + f" {self.subject}.counit-injective"
            + ((" " + " ".join(self.clash)) if self.clash else "")
        )
        out.append(
            ("PASS" if self.structure_ok else "FAIL")
            + f" {self.subject}.counit-structure"
            + ((" " + " ".join(self.structure_witness)) if self.structure_witness else "")
        )
        return out


def counit_is_iso(cm: CounitMap) -> IsoReport:
    """Surjectivity, injectivity and structure preservation of the counit.

    Structure is induced on classes through representatives sharing one
    (object, section) copy: top goes to top, ortho to ortho, order to
    order, and joins of orthogonal pairs to joins.  For validated covers
    these hold by construction; the scan still verifies them.
    """
    tgt = cm.target.target
    x = cm.carrier.presheaf
    subject = f"counit[{x.name}]"

    image = set(cm.value.values())
    missing = tuple(e for e in tgt.elements if e not in image)
    surjective = not missing

    seen: dict[str, str] = {}
    clash: tuple[str, ...] = ()
    for cid, v in cm.value.items():
        if v in seen:
            clash = (seen[v], cid, v)
            break
        seen[v] = cid
    injective = not clash

    structure_witness: tuple[str, ...] = ()
    for obj in x.base.objects:
        alg = obj.target
        for p in x.sections(obj.name):
            cls = cm.carrier.class_of_triple
            top_val = cm.value[cls(obj.name, p, alg.top)]
            if top_val != tgt.top:
                structure_witness = (obj.name, p, "top")
                break
            for q in alg.elements:
                v = cm.value[cls(obj.name, p, q)]
                vo = cm.value[cls(obj.name, p, alg.ortho[q])]
                if vo != tgt.ortho[v]:
                    structure_witness = (obj.name, p, q, "ortho")
                    break
            if structure_witness:
                break
            for q1, q2 in itertools.product(alg.elements, alg.elements):
                v1 = cm.value[cls(obj.name, p, q1)]
                v2 = cm.value[cls(obj.name, p, q2)]
                if alg.le(q1, q2) and not tgt.le(v1, v2):
                    structure_witness = (obj.name, p, q1, q2, "order")
                    break
                if alg.orthogonal(q1, q2):
                    j = alg.join(q1, q2)
                    if j is None:
                        continue
                    tj = tgt.join(v1, v2)
                    if tj is None or cm.value[cls(obj.name, p, j)] != tj:
                        structure_witness = (obj.name, p, q1, q2, "join")
                        break
            if structure_witness:
                break
        if structure_witness:
            break

    return IsoReport(
        subject,
        surjective,
        missing,
        injective,
        clash,
        not structure_witness,
        structure_witness,
    )


# -- adjunction bijection -----------------------------------------------------


@dataclass(eq=False)
class BijectionReport:
    subject: str
    nat_count: int
    hom_count: int
    bijection_ok: bool
    detail: str = ""

    @property
    def equal(self) -> bool:
        return self.nat_count == self.hom_count

    def lines(self) -> list[str]:
        status = "PASS" if (self.equal and self.bijection_ok) else "FAIL"
        tail = f" {self.nat_count} {self.hom_count}"
        if self.detail:
            tail += f" {self.detail}"
        return [f"{status} {self.subject}.adjunction-bijection{tail}"]


def _hom_side(
    x: Presheaf,
    xi_obs: Observable,
    r: Presheaf,
    carrier_: ColimitCarrier,
    budget: int,
) -> list[tuple[str, ...]]:
    """Structure-respecting maps from the colimit classes to the target.

    A candidate assigns a target element to every class; it is kept iff for
    every (object, section) copy the induced element map lands in the
    covering Hom-functor at that object.  Representative independence is
    built in since candidates are functions on classes.
    """
    tgt = xi_obs.target
    class_ids = list(carrier_.classes)
    n = len(tgt.elements) ** len(class_ids)
    if n > budget:
        raise BudgetExceeded(f"Hom(L{x.name}, {xi_obs.name})", n, budget)

    valid_tuples: dict[str, set[tuple[str, ...]]] = {}
    for obj in x.base.objects:
        algebra = obj.target
        tuples = set()
        for sid in r.sections(obj.name):
            h = r.hom_of(obj.name, sid)
            tuples.add(tuple(h.mapping[e] for e in algebra.elements))
        valid_tuples[obj.name] = tuples

    copies = [
        (obj.name, p, obj.target.elements)
        for obj in x.base.objects
        for p in x.sections(obj.name)
    ]
    out = []
    for combo in itertools.product(tgt.elements, repeat=len(class_ids)):
        f = dict(zip(class_ids, combo))
        ok = True
        for obj_name, p, els in copies:
            induced = tuple(
                f[carrier_.class_of_triple(obj_name, p, q)] for q in els
            )
            if induced not in valid_tuples[obj_name]:
                ok = False
                break
        if ok:
            out.append(combo)
    return out


def adjunction_bijection_check(
    x: Presheaf, xi_obs: Observable, budget: int = DEFAULT_BUDGET
) -> BijectionReport:
    """Compare natural transformations into R with maps out of the colimit.

    Both sides are enumerated exhaustively; each natural family is turned
    into a class function by evaluating representatives (the cocone
    factorization), and the report records whether that translation is a
    bijection between the two enumerations.
    """
    from .presheaves import nat_transformations

    r = hom_functor_R(x.base, xi_obs, budget)
    nats = nat_transformations(x, r, budget)
    carrier_ = colimit(x)
    homs = _hom_side(x, xi_obs, r, carrier_, budget)

    class_ids = list(carrier_.classes)
    translated: set[tuple[str, ...]] = set()
    detail = ""
    ok = True
    for tau in nats:
        values: dict[str, str] = {}
        consistent = True
        for g in carrier_.generators:
            h = r.hom_of(g.obj, tau[(g.obj, g.section)])
            v = h.mapping[g.element]
            cid = carrier_.class_of[g]
            if cid in values and values[cid] != v:
                consistent = False
                detail = f"representative-dependent-at-{cid}"
                break
            values[cid] = v
        if not consistent:
            ok = False
            break
        translated.add(tuple(values[cid] for cid in class_ids))
    if ok:
        hom_set = set(homs)
        if len(translated) != len(nats):
            ok, detail = False, "translation-not-injective"
        elif translated != hom_set:
            ok, detail = False, "translation-not-onto"
    return BijectionReport(
        f"{x.name}|{xi_obs.name}", len(nats), len(homs), ok, detail
    )


def cocone_check(
    x: Presheaf,
    xi_obs: Observable,
    family: dict[tuple[str, str], EventHomomorphism],
) -> ValidationReport:
    """Do the given per-(object, section) legs commute over element arrows?"""
    subject = f"cocone[{x.name}]"
    elements_cat = category_of_elements(x)
    structural = [
        f"family missing leg for ({o}, {p})"
        for (o, p) in elements_cat.pairs
        if (o, p) not in family
    ]
    if structural:
        return ValidationReport(subject, tuple(structural))
    w = None
    for a in elements_cat.arrows:
        ar = x.base.arrows[a.base_arrow]
        outer = family[a.tgt]
        inner = family[a.src]
        composed = compose_homs(outer, ar.carrier)
        if composed.mapping != inner.mapping:
            w = (a.base_arrow, a.tgt[1])
            break
    return ValidationReport(
        subject, (), (CheckResult("cocone", w is None, w or ()),)
    )
