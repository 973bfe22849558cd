"""Finite partition frames and observables into event algebras.

A frame stands in for the measurable structure of the real line: a finite
list of rational cut points splits the line into half-open cells, and the
frame's carrier is the Boolean algebra of cell subsets.  An observable is a
structure-preserving map from a frame into an event algebra; arrows between
observables over the same frame are commuting triangles whose legs are
event homomorphisms.  Reinterpreting a Boolean-valued observable as a
quantum one is the identity on carriers, so no wrapper type exists for it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .algebra import (
    BooleanEventAlgebra,
    EventHomomorphism,
    QuantumEventAlgebra,
    as_boolean,
    validate_homomorphism,
)
from .reports import (
    BudgetExceeded,
    CheckResult,
    ConstructionError,
    NotAnArrow,
    ParseError,
    StructuralError,
    ValidationReport,
)

MAX_FRAME_CELLS = 12


@dataclass(frozen=True, eq=False)
class BorelFrame:
    """Partition of the line into k cells; carrier ids are mask-based.

    Cell i is the interval between cut i-1 and cut i (unbounded at the
    ends).  The frame element with id ``m<n>`` is the union of the cells
    whose bits are set in n.  Cut points are labels: only their order
    matters.
    """

    cuts: tuple[Fraction, ...]

    @classmethod
    def build(cls, cuts: list[str | Fraction] | tuple = ()) -> "BorelFrame":
        vals = tuple(Fraction(c) for c in cuts)
        if any(vals[i] >= vals[i + 1] for i in range(len(vals) - 1)):
            raise StructuralError("frame cuts must be strictly increasing")
        if len(vals) + 1 > MAX_FRAME_CELLS:
            raise StructuralError(
                f"frame with {len(vals) + 1} cells exceeds supported size"
            )
        return cls(vals)

    @property
    def k(self) -> int:
        return len(self.cuts) + 1

    @cached_property
    def algebra(self) -> BooleanEventAlgebra:
        n = 2 ** self.k
        elements = [f"m{i}" for i in range(n)]
        pairs = []
        ortho = {}
        for mask in range(n):
            ortho[f"m{mask}"] = f"m{(n - 1) ^ mask}"
            for other in range(n):
                if mask & other == mask:
                    pairs.append((f"m{mask}", f"m{other}"))
        label = ",".join(str(c) for c in self.cuts)
        name = f"frame_k{self.k}" + (f"({label})" if label else "")
        return BooleanEventAlgebra.build(name, elements, f"m{n - 1}", pairs, ortho)

    def atom_id(self, cell: int) -> str:
        if not 0 <= cell < self.k:
            raise StructuralError(f"cell index {cell} out of range for k={self.k}")
        return f"m{1 << cell}"

    def cells_of(self, element_id: str) -> frozenset[int]:
        mask = int(element_id[1:])
        return frozenset(i for i in range(self.k) if (mask >> i) & 1)

    def id_of(self, cells: frozenset[int] | set[int]) -> str:
        mask = 0
        for c in cells:
            mask |= 1 << c
        return f"m{mask}"

    def same(self, other: "BorelFrame") -> bool:
        return self.cuts == other.cuts

    def __repr__(self) -> str:
        return f"BorelFrame(k={self.k}, cuts={list(map(str, self.cuts))})"


@dataclass(frozen=True, eq=False)
class Observable:
    """Map from a frame into an event algebra, one value per cell subset."""

    name: str
    frame: BorelFrame
    target: QuantumEventAlgebra
    mapping: dict[str, str]

    def apply(self, frame_element: str) -> str:
        return self.mapping[frame_element]

    def atom_images(self) -> tuple[str, ...]:
        return tuple(self.mapping[self.frame.atom_id(i)] for i in range(self.frame.k))

    def range_elements(self) -> tuple[str, ...]:
        seen = []
        for e in self.frame.algebra.elements:
            v = self.mapping[e]
            if v not in seen:
                seen.append(v)
        return tuple(seen)

    def __repr__(self) -> str:
        return f"Observable({self.name!r} : k={self.frame.k} -> {self.target.name})"


def validate_observable(obs: Observable) -> ValidationReport:
    """Check the three observable conditions exhaustively on the frame.

    [i] empty set to bottom and full line to top; [ii] disjoint cell sets
    have orthogonal images; [iii] the image of a disjoint union is the join
    of the images.  Checking all disjoint pairs settles all finite unions.
    """
    frame, tgt = obs.frame, obs.target
    structural = []
    for e in frame.algebra.elements:
        if e not in obs.mapping:
            structural.append(f"map undefined on frame element {e}")
        elif obs.mapping[e] not in tgt.index:
            structural.append(f"map({e}) = {obs.mapping[e]} not in target")
    if structural:
        return ValidationReport(obs.name, tuple(structural))

    checks: list[CheckResult] = []
    empty = frame.id_of(frozenset())
    full = frame.algebra.top
    ok = obs.mapping[empty] == tgt.bottom and obs.mapping[full] == tgt.top
    wit = () if ok else (empty, obs.mapping[empty], full, obs.mapping[full])
    checks.append(CheckResult("obs-i", ok, wit))

    els = frame.algebra.elements
    w = None
    for e, f in itertools.product(els, els):
        if frame.cells_of(e) & frame.cells_of(f):
            continue
        if not tgt.orthogonal(obs.mapping[e], obs.mapping[f]):
            w = (e, f)
            break
    checks.append(CheckResult("obs-ii", w is None, w or ()))

    w = None
    for e, f in itertools.product(els, els):
        ce, cf = frame.cells_of(e), frame.cells_of(f)
        if ce & cf:
            continue
        union = frame.id_of(ce | cf)
        jn = tgt.join(obs.mapping[e], obs.mapping[f])
        if jn is None or jn != obs.mapping[union]:
            w = (e, f)
            break
    checks.append(CheckResult("obs-iii", w is None, w or ()))

    return ValidationReport(obs.name, (), tuple(checks))


def observable_from_atoms(
    name: str,
    frame: BorelFrame,
    target: QuantumEventAlgebra,
    atom_images: list[str] | tuple[str, ...],
) -> Observable:
    """Extend cell images to the whole frame by joins.

    The images must be pairwise orthogonal and join to top; every needed
    join must exist in the target.  The result always passes
    validate_observable when the target is a valid event algebra.
    """
    if len(atom_images) != frame.k:
        raise ConstructionError(
            f"{name}: expected {frame.k} atom images, got {len(atom_images)}"
        )
    for img in atom_images:
        if img not in target.index:
            raise ConstructionError(f"{name}: image {img!r} not in {target.name}")
    for i, j in itertools.combinations(range(frame.k), 2):
        if not target.orthogonal(atom_images[i], atom_images[j]):
            raise ConstructionError(
                f"{name}: atom images not orthogonal: "
                f"({atom_images[i]}, {atom_images[j]})"
            )
    mapping = {}
    for mask in range(2 ** frame.k):
        imgs = [atom_images[i] for i in range(frame.k) if (mask >> i) & 1]
        acc = target.bottom
        for img in imgs:
            nxt = target.join(acc, img)
            if nxt is None:
                raise ConstructionError(
                    f"{name}: join undefined for ({acc}, {img})"
                )
            acc = nxt
        mapping[f"m{mask}"] = acc
    if mapping[frame.algebra.top] != target.top:
        raise ConstructionError(f"{name}: atom images do not join to top")
    obs = Observable(name, frame, target, mapping)
    report = validate_observable(obs)
    if not report.passed:
        bad = report.failures()[0]
        raise ConstructionError(
            f"{name}: extension fails {bad.name} at {' '.join(bad.witness)}"
        )
    return obs


def compose_triangle(obs: Observable, h: EventHomomorphism, name: str = "") -> Observable:
    """Push an observable forward along an event homomorphism.

    The composite must itself validate as an observable; if it does not,
    the pair is not an arrow and NotAnArrow carries the failing report.
    """
    if not h.source.same_carrier(obs.target):
        raise StructuralError(
            f"cannot compose {obs.name} with a map out of {h.source.name}"
        )
    hrep = validate_homomorphism(h)
    if not hrep.passed:
        raise NotAnArrow(f"{h.name or 'map'} is not a homomorphism", hrep)
    composite = Observable(
        name or f"{obs.name}_then_{h.name or 'h'}",
        obs.frame,
        h.target,
        {e: h.mapping[obs.mapping[e]] for e in obs.frame.algebra.elements},
    )
    report = validate_observable(composite)
    if not report.passed:
        raise NotAnArrow(
            f"composite of {obs.name} with {h.name or h.encoding()} "
            "is not an observable",
            report,
        )
    return composite


def enumerate_observables(
    frame: BorelFrame,
    target: QuantumEventAlgebra,
    budget: int = 10_000_000,
    prefix: str = "obs",
) -> list[Observable]:
    """All observables from a frame, ordered by atom-image tuples."""
    count = len(target.elements) ** frame.k
    if count > budget:
        raise BudgetExceeded(
            f"observables(k={frame.k}->{target.name})", count, budget
        )
    out = []
    for images in itertools.product(target.elements, repeat=frame.k):
        try:
            obs = observable_from_atoms(
                f"{prefix}{len(out)}", frame, target, images
            )
        except ConstructionError:
            continue
        out.append(obs)
    return out


# -- arrows of the observable categories ------------------------------------


@dataclass(frozen=True, eq=False)
class ObservableArrow:
    """Commuting triangle: target.map = carrier o source.map, same frame."""

    name: str
    source: Observable
    target: Observable
    carrier: EventHomomorphism


def validate_arrow(arrow: ObservableArrow) -> ValidationReport:
    structural = []
    if not arrow.source.frame.same(arrow.target.frame):
        structural.append("source and target observables use different frames")
    if not arrow.carrier.source.same_carrier(arrow.source.target):
        structural.append("carrier source is not the source observable's algebra")
    if not arrow.carrier.target.same_carrier(arrow.target.target):
        structural.append("carrier target is not the target observable's algebra")
    if structural:
        return ValidationReport(arrow.name, tuple(structural))

    checks = []
    carrier_ok = validate_homomorphism(arrow.carrier).passed
    checks.append(CheckResult("carrier-hom", carrier_ok))
    w = None
    for e in arrow.source.frame.algebra.elements:
        if arrow.carrier.mapping[arrow.source.mapping[e]] != arrow.target.mapping[e]:
            w = (e,)
            break
    checks.append(CheckResult("triangle", w is None, w or ()))
    return ValidationReport(arrow.name, (), tuple(checks))


def compose_arrows(
    second: ObservableArrow, first: ObservableArrow, name: str = ""
) -> ObservableArrow:
    """second after first, as a triangle over the shared frame."""
    if first.target is not second.source and first.target.name != second.source.name:
        raise StructuralError(
            f"arrows {first.name} and {second.name} are not composable"
        )
    from .algebra import compose_homs

    carrier = compose_homs(second.carrier, first.carrier)
    return ObservableArrow(
        name or f"{second.name}.{first.name}", first.source, second.target, carrier
    )


# -- observable file format --------------------------------------------------


def parse_observable(
    text: str, algebras: dict[str, QuantumEventAlgebra]
) -> Observable:
    """Parse the observable file format against a set of named algebras."""
    from .algebra import _content_lines

    lines = _content_lines(text)
    if not lines or not lines[0].startswith("observable "):
        raise ParseError("observable file must start with 'observable <name>'")
    name = lines[0].split()[1]
    i = 1
    if i >= len(lines) or not lines[i].startswith("frame "):
        raise ParseError(f"{name}: missing 'frame <k>' line")
    try:
        k = int(lines[i].split()[1])
    except ValueError as exc:
        raise ParseError(f"{name}: bad frame size") from exc
    i += 1
    cuts: list[str] = []
    if i < len(lines) and lines[i].startswith("cuts "):
        cuts = lines[i].split()[1:]
        i += 1
    if k > 1 and len(cuts) != k - 1:
        raise ParseError(f"{name}: frame {k} needs {k - 1} cut points")
    if i >= len(lines) or not lines[i].startswith("target "):
        raise ParseError(f"{name}: missing 'target' line")
    target_name = lines[i].split()[1]
    if target_name not in algebras:
        raise ParseError(f"{name}: unknown target algebra {target_name!r}")
    target = algebras[target_name]
    i += 1
    images: dict[int, str] = {}
    for line in lines[i:]:
        parts = line.split()
        if len(parts) != 4 or parts[0] != "atom" or parts[2] != "->":
            raise ParseError(f"{name}: unrecognized line {line!r}")
        cell = int(parts[1])
        if cell in images:
            raise ParseError(f"{name}: duplicate atom line for cell {cell}")
        images[cell] = parts[3]
    if sorted(images) != list(range(k)):
        raise ParseError(f"{name}: need atom lines for cells 0..{k - 1}")
    frame = BorelFrame.build(cuts)
    try:
        return observable_from_atoms(
            name, frame, target, [images[c] for c in range(k)]
        )
    except ConstructionError as exc:
        raise ParseError(str(exc)) from exc
