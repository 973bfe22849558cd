"""Boolean-power fibration over covers, Stone spaces, and measurement charts.

The fibers over a base object are all (cover, element) pairs; a pair in one
fiber is related to a pair in another when an arrow carries one cover onto
the other and matches the elements.  The stored relation is the raw one;
all class talk uses its generated equivalence closure, built with the same
union-find machinery as the colimit (and certified against a naive fixpoint
oracle by the tests).  Stone spaces are the finite discrete version: points
are atoms and every element is the clopen set of atoms below it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .adjunction import UnionFind, colimit
from .algebra import (
    BooleanEventAlgebra,
    EventHomomorphism,
    QuantumEventAlgebra,
    as_boolean,
    validate_boolean_algebra,
    validate_homomorphism,
)
from .localization import PrelocalizationSystem
from .observables import Observable
from .presheaves import FiniteCategory, Presheaf, hom_functor_R
from .reports import StructuralError, ValidationReport

DEFAULT_BUDGET = 10_000_000

Pair = tuple[str, str, str]  # (object, cover id, element)


@dataclass(eq=False)
class BooleanPowerFiber:
    """Full product of a fiber's cover set with its algebra carrier."""

    obj: str
    algebra: BooleanEventAlgebra
    pairs: tuple[tuple[str, str], ...]  # (cover id, element)


@dataclass(eq=False)
class FibrationRelation:
    """Disjoint union of fibers with the cover-matching relation.

    ``related`` is the raw relation (left related to right); ``classes``
    partition the carrier by the generated equivalence closure.  Class
    labels name the inclusion-maximal fiber algebra present in the class
    (ties broken by name) followed by the canonical minimal member.
    """

    base: FiniteCategory
    target: Observable
    fibers: dict[str, BooleanPowerFiber]
    carrier: tuple[Pair, ...]
    related: tuple[tuple[Pair, Pair], ...]
    classes: dict[str, tuple[Pair, ...]]
    class_of: dict[Pair, str]


def build_fibration(
    base: FiniteCategory, l_obs: Observable, budget: int = DEFAULT_BUDGET
) -> FibrationRelation:
    """Fibers, raw relation instances, and their equivalence closure."""
    r = hom_functor_R(base, l_obs, budget)
    fibers: dict[str, BooleanPowerFiber] = {}
    carrier: list[Pair] = []
    index: dict[Pair, int] = {}
    for obj in base.objects:
        pairs = tuple(
            (sid, q)
            for sid in r.sections(obj.name)
            for q in obj.target.elements
        )
        fibers[obj.name] = BooleanPowerFiber(obj.name, obj.target, pairs)
        for sid, q in pairs:
            p: Pair = (obj.name, sid, q)
            index[p] = len(carrier)
            carrier.append(p)

    related: list[tuple[Pair, Pair]] = []
    for nm in base.arrow_order:
        ar = base.arrows[nm]
        src, tgt = ar.source.name, ar.target.name
        for sid in r.sections(tgt):
            pre_sid = r.restrict[nm][sid]
            for q2 in ar.carrier.source.elements:
                left: Pair = (src, pre_sid, q2)
                right: Pair = (tgt, sid, ar.carrier.mapping[q2])
                related.append((left, right))

    uf = UnionFind(len(carrier))
    for left, right in related:
        uf.union(index[left], index[right])
    grouped: dict[int, list[Pair]] = {}
    for p in carrier:
        grouped.setdefault(uf.find(index[p]), []).append(p)

    algebras = {o.name: o.target for o in base.objects}

    def label(members: list[Pair]) -> str:
        present = sorted({m[0] for m in members})
        best = None
        for objname in present:
            alg = algebras[objname]
            if best is None:
                best = objname
                continue
            balg = algebras[best]
            if set(balg.elements) < set(alg.elements):
                best = objname
            elif set(balg.elements) == set(alg.elements) and objname < best:
                # equal carriers: keep lexicographically smallest
                best = min(best, objname)
        m = members[0]
        return f"{algebras[best].name}|{m[0]}:{m[1]}:{m[2]}"

    classes: dict[str, tuple[Pair, ...]] = {}
    class_of: dict[Pair, str] = {}
    for root in sorted(grouped):
        members = grouped[root]
        lab = label(members)
        classes[lab] = tuple(members)
        for p in members:
            class_of[p] = lab
    return FibrationRelation(
        base, l_obs, fibers, tuple(carrier), tuple(related), classes, class_of
    )


def fibration_dump(fr: FibrationRelation) -> str:
    lines = []
    for lab, members in fr.classes.items():
        body = " ".join(f"({o},{s},{q})" for o, s, q in members)
        lines.append(f"class {lab} : {body}")
    return "\n".join(lines) + "\n"


# -- Stone representation -----------------------------------------------------


@dataclass(eq=False)
class StoneSpace:
    """Finite Stone space: atoms as points, elements as clopen sets."""

    algebra: BooleanEventAlgebra
    points: tuple[str, ...]
    clopen: dict[str, frozenset[str]]


def stone(b: BooleanEventAlgebra) -> StoneSpace:
    """Atoms-as-points representation, verified to be an isomorphism.

    Checks exhaustively that clopen turns joins into unions, ortho into
    complement, is injective, and lands onto the full powerset of points.
    """
    b = as_boolean(b)
    rep = validate_boolean_algebra(b)
    if not rep.passed:
        raise StructuralError(f"{b.name}: not a Boolean algebra, no Stone space")
    points = b.atoms
    clopen = {x: frozenset(b.atoms_below(x)) for x in b.elements}
    allpts = frozenset(points)
    for x, y in itertools.product(b.elements, b.elements):
        jn = b.join(x, y)
        if clopen[jn] != clopen[x] | clopen[y]:
            raise StructuralError(f"{b.name}: clopen breaks join at ({x}, {y})")
    for x in b.elements:
        if clopen[b.ortho[x]] != allpts - clopen[x]:
            raise StructuralError(f"{b.name}: clopen breaks complement at {x}")
    if len({clopen[x] for x in b.elements}) != len(b.elements):
        raise StructuralError(f"{b.name}: clopen not injective")
    if len(b.elements) != 2 ** len(points):
        raise StructuralError(f"{b.name}: clopen not onto the powerset")
    return StoneSpace(b, points, clopen)


def stone_dump(s: StoneSpace) -> str:
    lines = [f"point {a}" for a in s.points]
    for x in s.algebra.elements:
        members = " ".join(a for a in s.points if a in s.clopen[x])
        lines.append(f"clopen {x} :" + (f" {members}" if members else ""))
    return "\n".join(lines) + "\n"


def powerset_algebra(points: tuple[str, ...], name: str) -> BooleanEventAlgebra:
    """Boolean algebra of all subsets of the given points."""
    n = len(points)
    ids = {}
    elements = []
    for mask in range(2 ** n):
        members = [points[i] for i in range(n) if (mask >> i) & 1]
        ids[mask] = "set_" + "_".join(members) if members else "set_empty"
        elements.append(ids[mask])
    pairs = []
    ortho = {}
    full = 2 ** n - 1
    for mask in range(2 ** n):
        ortho[ids[mask]] = ids[full ^ mask]
        for other in range(2 ** n):
            if mask & other == mask:
                pairs.append((ids[mask], ids[other]))
    return BooleanEventAlgebra.build(name, elements, ids[full], pairs, ortho)


def reconstruct(s: StoneSpace) -> BooleanEventAlgebra:
    return powerset_algebra(s.points, f"{s.algebra.name}_from_points")


def atom_matching_iso(
    b1: BooleanEventAlgebra, b2: BooleanEventAlgebra
) -> EventHomomorphism | None:
    """Isomorphism found by extending an atom bijection, or None.

    Tries the canonical order-preserving matching first, then all other
    atom bijections; the extension maps each element to the join of its
    matched atoms and is validated before being returned.
    """
    b1, b2 = as_boolean(b1), as_boolean(b2)
    a1, a2 = b1.atoms, b2.atoms
    if len(a1) != len(a2) or len(b1.elements) != len(b2.elements):
        return None
    for perm in itertools.permutations(a2):
        match = dict(zip(a1, perm))
        mapping = {}
        good = True
        for x in b1.elements:
            img = b2.join_all([match[a] for a in b1.atoms_below(x)])
            if img is None:
                good = False
                break
            mapping[x] = img
        if not good:
            continue
        h = EventHomomorphism(b1, b2, mapping, f"iso_{b1.name}_{b2.name}")
        if (
            len(set(mapping.values())) == len(b1.elements)
            and validate_homomorphism(h).passed
        ):
            return h
    return None


# -- measurement space charts -------------------------------------------------


@dataclass(eq=False)
class SpaceChart:
    """A local measurement space with its cover into the quantum target."""

    stone_space: StoneSpace
    cover: EventHomomorphism
    at_object: str | None = None


def charts_equivalent(
    system: PrelocalizationSystem,
    chart1: SpaceChart,
    element1: str,
    chart2: SpaceChart,
    element2: str,
) -> bool:
    """Do (cover1, a) and (cover2, b) name the same glued quantum event?

    Equivalence is delegated to the tensor-relation quotient of the
    system's presheaf: the two tagged pairs must fall in one colimit class.
    Raises if either cover does not belong to the system.
    """
    x = system.as_presheaf()
    carrier = colimit(x)

    def locate(chart: SpaceChart, element: str) -> tuple[str, str]:
        if element not in chart.stone_space.algebra.index:
            raise StructuralError(
                f"{element!r} is not an element of {chart.stone_space.algebra.name}"
            )
        if chart.at_object is not None:
            obj_names = [chart.at_object]
        else:
            obj_names = [o.name for o in system.base.objects]
        for obj_name in obj_names:
            for cid, h in system.covers.get(obj_name, {}).items():
                if (
                    h.source.same_carrier(chart.cover.source)
                    and h.mapping == chart.cover.mapping
                ):
                    return (obj_name, cid)
        raise StructuralError(
            f"cover {chart.cover.name or chart.cover.encoding()} "
            f"not in system {system.name}"
        )

    o1, c1 = locate(chart1, element1)
    o2, c2 = locate(chart2, element2)
    return carrier.class_of_triple(o1, c1, element1) == carrier.class_of_triple(
        o2, c2, element2
    )
