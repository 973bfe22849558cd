"""Finite quantum and Boolean event algebras and their structure maps.

A quantum event algebra here is a finite orthoposet: a partially ordered
carrier with a maximal element and an orthocomplementation, satisfying the
axioms checked by :func:`validate_quantum_algebra`.  Meet and join are the
order-theoretic glb/lub and are allowed to be undefined; only orthogonal
pairs are guaranteed a join.  Boolean event algebras are the distributive,
complemented, atomistic special case and act as the coefficient objects of
every covering construction in the package.

All types are immutable after construction and every operation is a pure
function of its inputs, so everything here is safe to use concurrently.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

from .reports import (
    BudgetExceeded,
    CheckResult,
    ParseError,
    StructuralError,
    ValidationReport,
)

DEFAULT_BUDGET = 10_000_000

_ID_RE = re.compile(r"^[A-Za-z0-9_]+$")


def _closure(n: int, pairs: set[tuple[int, int]]) -> list[int]:
    """Reflexive-transitive closure as a list of down-set bitmasks.

    down[i] has bit j set iff j <= i.
    """
    below = [1 << i for i in range(n)]
    for a, b in pairs:
        below[b] |= 1 << a
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = below[i]
            m = acc
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                acc |= below[j]
            if acc != below[i]:
                below[i] = acc
                changed = True
    return below


@dataclass(frozen=True, eq=False)
class QuantumEventAlgebra:
    """Finite orthoposet with top element and orthocomplementation.

    ``leq`` is always stored as its full reflexive-transitive closure;
    use :meth:`build` to construct from an arbitrary pair list.  The bottom
    element is never input: it is ``ortho(top)`` by definition.
    """

    name: str
    elements: tuple[str, ...]
    top: str
    leq: frozenset[tuple[str, str]]
    ortho: dict[str, str]

    @classmethod
    def build(
        cls,
        name: str,
        elements: list[str] | tuple[str, ...],
        top: str,
        leq_pairs: list[tuple[str, str]] | tuple = (),
        ortho: dict[str, str] | None = None,
    ) -> "QuantumEventAlgebra":
        """Construct from raw data, taking the reflexive-transitive closure.

        Raises StructuralError on referentially broken input: duplicate or
        unknown element ids, missing top, a non-total ortho map, or a leq
        closure that is not antisymmetric.
        """
        elements = tuple(elements)
        if not elements:
            raise StructuralError(f"{name}: empty element set")
        if len(set(elements)) != len(elements):
            raise StructuralError(f"{name}: duplicate element ids")
        idx = {e: i for i, e in enumerate(elements)}
        if top not in idx:
            raise StructuralError(f"{name}: top {top!r} is not an element")
        ortho = dict(ortho or {})
        for e in elements:
            if e not in ortho:
                raise StructuralError(f"{name}: ortho undefined on {e!r}")
            if ortho[e] not in idx:
                raise StructuralError(f"{name}: ortho({e}) = {ortho[e]!r} unknown")
        for e in ortho:
            if e not in idx:
                raise StructuralError(f"{name}: ortho defined on unknown id {e!r}")
        pairs = set()
        for a, b in leq_pairs:
            if a not in idx or b not in idx:
                raise StructuralError(f"{name}: leq pair ({a}, {b}) uses unknown id")
            pairs.add((idx[a], idx[b]))
        below = _closure(len(elements), pairs)
        closed = set()
        for i, e in enumerate(elements):
            m = below[i]
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                if i != j and (below[j] >> i) & 1:
                    raise StructuralError(
                        f"{name}: leq closure not antisymmetric "
                        f"({elements[j]} <= {e} <= {elements[j]})"
                    )
                closed.add((elements[j], e))
        return cls(name, elements, top, frozenset(closed), ortho)

    # -- order machinery -------------------------------------------------

    @cached_property
    def index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.elements)}

    @cached_property
    def _down(self) -> list[int]:
        """Bitmask of elements below each element (inclusive)."""
        down = [0] * len(self.elements)
        idx = self.index
        for a, b in self.leq:
            down[idx[b]] |= 1 << idx[a]
        return down

    @cached_property
    def _up(self) -> list[int]:
        up = [0] * len(self.elements)
        idx = self.index
        for a, b in self.leq:
            up[idx[a]] |= 1 << idx[b]
        return up

    @property
    def bottom(self) -> str:
        return self.ortho[self.top]

    def le(self, x: str, y: str) -> bool:
        return (self._down[self.index[y]] >> self.index[x]) & 1 == 1

    def orthogonal(self, x: str, y: str) -> bool:
        return self.le(x, self.ortho[y])

    def _extremum(self, common: int, bound: list[int]) -> str | None:
        m = common
        while m:
            k = (m & -m).bit_length() - 1
            m &= m - 1
            if bound[k] & common == common:
                return self.elements[k]
        return None

    def meet(self, x: str, y: str) -> str | None:
        """Greatest lower bound, or None when it does not exist."""
        common = self._down[self.index[x]] & self._down[self.index[y]]
        return self._extremum(common, self._down)

    def join(self, x: str, y: str) -> str | None:
        """Least upper bound, or None when it does not exist."""
        common = self._up[self.index[x]] & self._up[self.index[y]]
        return self._extremum(common, self._up)

    def join_all(self, xs: list[str] | tuple[str, ...]) -> str | None:
        """Iterated join in the given order; None if any step is undefined."""
        acc = self.bottom
        for x in xs:
            nxt = self.join(acc, x)
            if nxt is None:
                return None
            acc = nxt
        return acc

    def same_carrier(self, other: "QuantumEventAlgebra") -> bool:
        """Value equality of the carrier data, ignoring names."""
        return (
            set(self.elements) == set(other.elements)
            and self.top == other.top
            and self.leq == other.leq
            and self.ortho == other.ortho
        )

    def restrict(self, subset: list[str] | tuple[str, ...], name: str) -> "BooleanEventAlgebra":
        """Induced substructure on a subset (order of self.elements kept)."""
        keep = [e for e in self.elements if e in set(subset)]
        pairs = [(a, b) for a, b in self.leq if a in set(keep) and b in set(keep)]
        ortho = {e: self.ortho[e] for e in keep}
        return BooleanEventAlgebra.build(name, keep, self.top, pairs, ortho)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, {len(self.elements)} elements)"


@dataclass(frozen=True, eq=False)
class BooleanEventAlgebra(QuantumEventAlgebra):
    """Event algebra intended to be Boolean; see validate_boolean_algebra."""

    @cached_property
    def atoms(self) -> tuple[str, ...]:
        """Minimal nonzero elements, in carrier order."""
        out = []
        for e in self.elements:
            if e == self.bottom:
                continue
            strictly_below = [
                x for x in self.elements if x != e and x != self.bottom and self.le(x, e)
            ]
            if not strictly_below:
                out.append(e)
        return tuple(out)

    def atoms_below(self, x: str) -> tuple[str, ...]:
        return tuple(a for a in self.atoms if self.le(a, x))


def as_boolean(alg: QuantumEventAlgebra) -> BooleanEventAlgebra:
    """Reinterpret a carrier as a Boolean event algebra (no checks)."""
    if isinstance(alg, BooleanEventAlgebra):
        return alg
    return BooleanEventAlgebra(alg.name, alg.elements, alg.top, alg.leq, alg.ortho)


# -- homomorphisms --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EventHomomorphism:
    """Total map between event algebra carriers, named for reports."""

    source: QuantumEventAlgebra
    target: QuantumEventAlgebra
    mapping: dict[str, str]
    name: str = ""

    def apply(self, x: str) -> str:
        return self.mapping[x]

    def encoding(self) -> str:
        """Canonical text form of the map, in source element order."""
        return ",".join(f"{e}>{self.mapping[e]}" for e in self.source.elements)

    def key(self) -> tuple:
        return (
            self.source.name,
            self.target.name,
            tuple(self.mapping[e] for e in self.source.elements),
        )

    def image(self) -> tuple[str, ...]:
        seen = []
        for e in self.source.elements:
            v = self.mapping[e]
            if v not in seen:
                seen.append(v)
        return tuple(seen)

    def injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.source.elements)

    def is_identity(self) -> bool:
        return self.source.same_carrier(self.target) and all(
            v == k for k, v in self.mapping.items()
        )

    def __repr__(self) -> str:
        label = self.name or self.encoding()
        return f"EventHomomorphism({self.source.name}->{self.target.name}, {label})"


def identity_hom(alg: QuantumEventAlgebra) -> EventHomomorphism:
    return EventHomomorphism(alg, alg, {e: e for e in alg.elements}, f"id_{alg.name}")


def compose_homs(outer: EventHomomorphism, inner: EventHomomorphism,
                 name: str = "") -> EventHomomorphism:
    """outer after inner; sources and targets must chain up."""
    if not inner.target.same_carrier(outer.source):
        raise StructuralError(
            f"cannot compose {outer.name or outer.encoding()} after "
            f"{inner.name or inner.encoding()}: middle algebras differ"
        )
    mapping = {e: outer.mapping[inner.mapping[e]] for e in inner.source.elements}
    return EventHomomorphism(inner.source, outer.target, mapping, name)


# -- validators -----------------------------------------------------------


def _structural(alg: QuantumEventAlgebra) -> list[str]:
    problems = []
    values = list(alg.ortho.values())
    if len(set(values)) != len(alg.elements):
        problems.append("ortho is not a bijection")
    return problems


def validate_quantum_algebra(alg: QuantumEventAlgebra) -> ValidationReport:
    """Exhaustively check the event-algebra axioms on a finite carrier.

    Checks, in order: every element lies below top; ortho is involutive;
    every element joins with its orthocomplement to top; ortho reverses
    order; orthogonal pairs have a join; an orthogonal complemented pair
    determines the orthocomplement; ortho(top) is the unique minimum.
    Structural problems (non-bijective ortho) suppress the axiom checks.
    """
    structural = _structural(alg)
    if structural:
        return ValidationReport(alg.name, tuple(structural))

    els = alg.elements
    checks: list[CheckResult] = []

    def first_witness(pred_pairs):
        for w in pred_pairs:
            return w
        return None

    w = first_witness((e,) for e in els if not alg.le(e, alg.top))
    checks.append(CheckResult("axiom-a", w is None, w or ()))

    w = first_witness((e,) for e in els if alg.ortho[alg.ortho[e]] != e)
    checks.append(CheckResult("axiom-b", w is None, w or ()))

    w = first_witness((e,) for e in els if alg.join(e, alg.ortho[e]) != alg.top)
    checks.append(CheckResult("axiom-c", w is None, w or ()))

    w = first_witness(
        (x, y)
        for x in els
        for y in els
        if alg.le(x, y) and not alg.le(alg.ortho[y], alg.ortho[x])
    )
    checks.append(CheckResult("axiom-d", w is None, w or ()))

    w = first_witness(
        (x, y)
        for x in els
        for y in els
        if alg.orthogonal(x, y) and alg.join(x, y) is None
    )
    checks.append(CheckResult("axiom-e", w is None, w or ()))

    w = first_witness(
        (x, y)
        for x in els
        for y in els
        if alg.orthogonal(x, y)
        and alg.join(x, y) == alg.top
        and alg.meet(x, y) == alg.bottom
        and x != alg.ortho[y]
    )
    checks.append(CheckResult("axiom-g", w is None, w or ()))

    w = first_witness((e,) for e in els if not alg.le(alg.bottom, e))
    checks.append(CheckResult("bottom-minimum", w is None, w or ()))

    return ValidationReport(alg.name, (), tuple(checks))


def validate_boolean_algebra(alg: BooleanEventAlgebra) -> ValidationReport:
    """Check that a carrier is a finite Boolean algebra.

    Requires total meet/join, distributivity, ortho acting as Boolean
    complementation, atomisticity, and the powerset element count.  The
    computed atoms are reported as an informational check.
    """
    alg = as_boolean(alg)
    structural = _structural(alg)
    if structural:
        return ValidationReport(alg.name, tuple(structural))

    els = alg.elements
    checks: list[CheckResult] = []

    w = None
    for x, y in itertools.product(els, els):
        if alg.meet(x, y) is None or alg.join(x, y) is None:
            w = (x, y)
            break
    checks.append(CheckResult("lattice-total", w is None, w or ()))

    if w is None:
        wd = None
        for a, b, c in itertools.product(els, els, els):
            lhs = alg.meet(a, alg.join(b, c))
            rhs = alg.join(alg.meet(a, b), alg.meet(a, c))
            if lhs != rhs:
                wd = (a, b, c)
                break
        checks.append(CheckResult("distributive", wd is None, wd or ()))
    else:
        checks.append(CheckResult("distributive", False, w))

    wc = None
    for x in els:
        if alg.meet(x, alg.ortho[x]) != alg.bottom or alg.join(x, alg.ortho[x]) != alg.top:
            wc = (x,)
            break
    checks.append(CheckResult("complement", wc is None, wc or ()))

    atoms = alg.atoms
    wa = None
    for x in els:
        if alg.join_all(alg.atoms_below(x)) != x:
            wa = (x,)
            break
    checks.append(CheckResult("atomistic", wa is None, wa or ()))

    ok = len(els) == 2 ** len(atoms)
    checks.append(
        CheckResult("powerset-size", ok, () if ok else (str(len(els)), str(len(atoms))))
    )
    checks.append(CheckResult("atoms", True, atoms))

    return ValidationReport(alg.name, (), tuple(checks))


def validate_homomorphism(h: EventHomomorphism) -> ValidationReport:
    """Check the four structure-map conditions of an event homomorphism.

    [a] preserves top; [b] commutes with ortho; [c] is monotone;
    [d] for orthogonal pairs, the image of the join is below the join of
    the images (the join of the images must exist).
    """
    label = h.name or f"{h.source.name}->{h.target.name}"
    structural = []
    for e in h.source.elements:
        if e not in h.mapping:
            structural.append(f"map undefined on {e}")
        elif h.mapping[e] not in h.target.index:
            structural.append(f"map({e}) = {h.mapping[e]} not in target")
    if structural:
        return ValidationReport(label, tuple(structural))

    src, tgt, m = h.source, h.target, h.mapping
    checks: list[CheckResult] = []

    ok = m[src.top] == tgt.top
    checks.append(CheckResult("hom-a", ok, () if ok else (src.top,)))

    w = None
    for k in src.elements:
        if m[src.ortho[k]] != tgt.ortho[m[k]]:
            w = (k,)
            break
    checks.append(CheckResult("hom-b", w is None, w or ()))

    w = None
    for k, k2 in itertools.product(src.elements, src.elements):
        if src.le(k, k2) and not tgt.le(m[k], m[k2]):
            w = (k, k2)
            break
    checks.append(CheckResult("hom-c", w is None, w or ()))

    w = None
    for k, k2 in itertools.product(src.elements, src.elements):
        if not src.orthogonal(k, k2):
            continue
        j = src.join(k, k2)
        if j is None:
            continue
        tj = tgt.join(m[k], m[k2])
        if tj is None or not tgt.le(m[j], tj):
            w = (k, k2)
            break
    checks.append(CheckResult("hom-d", w is None, w or ()))

    return ValidationReport(label, (), tuple(checks))


# -- block enumeration ----------------------------------------------------


def enumerate_blocks(
    alg: QuantumEventAlgebra, budget: int = DEFAULT_BUDGET
) -> list[BooleanEventAlgebra]:
    """All maximal Boolean subalgebras, in lexicographic canonical order.

    A block is a subset containing 0 and 1, closed under ortho and under
    every defined meet and join, whose induced structure passes
    validate_boolean_algebra; only inclusion-maximal subsets are returned.
    Candidates are generated from ortho-orbits, so the search space is
    2^(orbit count) rather than 2^(element count).
    """
    els = alg.elements
    idx = alg.index
    orbits: list[int] = []
    seen = 0
    for e in els:
        i = idx[e]
        if (seen >> i) & 1:
            continue
        j = idx[alg.ortho[e]]
        mask = (1 << i) | (1 << j)
        seen |= mask
        orbits.append(mask)
    top_orbit = next(m for m in orbits if (m >> idx[alg.top]) & 1)
    rest = [m for m in orbits if m != top_orbit]
    if 2 ** len(rest) > budget:
        raise BudgetExceeded(f"blocks({alg.name})", 2 ** len(rest), budget)

    candidates: list[int] = []
    for combo in range(2 ** len(rest)):
        mask = top_orbit
        for b, orbit in enumerate(rest):
            if (combo >> b) & 1:
                mask |= orbit
        members = [e for e in els if (mask >> idx[e]) & 1]
        closed = True
        for x, y in itertools.product(members, members):
            mt, jn = alg.meet(x, y), alg.join(x, y)
            if mt is None or jn is None or not (mask >> idx[mt]) & 1 or not (mask >> idx[jn]) & 1:
                closed = False
                break
        if not closed:
            continue
        sub = alg.restrict(members, f"{alg.name}_sub")
        if validate_boolean_algebra(sub).passed:
            candidates.append(mask)

    maximal = [
        m for m in candidates if not any(m != o and m & o == m for o in candidates)
    ]
    blocks = []
    for m in maximal:
        members = [e for e in els if (m >> idx[e]) & 1]
        blocks.append((tuple(sorted(members)), members))
    blocks.sort(key=lambda t: t[0])
    return [
        alg.restrict(members, f"{alg.name}_block{i}")
        for i, (_, members) in enumerate(blocks)
    ]


def enumerate_homs(
    source: QuantumEventAlgebra,
    target: QuantumEventAlgebra,
    budget: int = DEFAULT_BUDGET,
) -> list[EventHomomorphism]:
    """All event homomorphisms from a Boolean algebra, canonically ordered.

    A homomorphism from a Boolean source is determined by its atom images,
    which must be pairwise orthogonal and join to top; each candidate
    extension is confirmed with the full validator before being kept.
    Ordering follows the target element order on atom-image tuples.
    """
    source = as_boolean(source)
    atoms = source.atoms
    count = len(target.elements) ** len(atoms)
    if count > budget:
        raise BudgetExceeded(
            f"homs({source.name}->{target.name})", count, budget
        )
    out = []
    for images in itertools.product(target.elements, repeat=len(atoms)):
        ok = True
        for i, j in itertools.combinations(range(len(atoms)), 2):
            if not target.orthogonal(images[i], images[j]):
                ok = False
                break
        if not ok or target.join_all(images) != target.top:
            continue
        img = dict(zip(atoms, images))
        mapping = {}
        defined = True
        for e in source.elements:
            v = target.join_all([img[a] for a in source.atoms_below(e)])
            if v is None:
                defined = False
                break
            mapping[e] = v
        if not defined:
            continue
        h = EventHomomorphism(source, target, mapping)
        if validate_homomorphism(h).passed:
            out.append(h)
    return out


# -- lattice file format ----------------------------------------------------


def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.append(line)
    return out


def _check_id(tok: str, what: str) -> str:
    if not _ID_RE.match(tok):
        raise ParseError(f"bad {what} {tok!r}: ids are alphanumeric/underscore")
    return tok


def parse_lattice(text: str) -> QuantumEventAlgebra:
    """Parse the line-oriented lattice format into an event algebra.

    Rejects duplicate ids, unknown ids, a missing top line, and a
    non-involutive ortho; the leq closure is taken by the constructor.
    """
    lines = _content_lines(text)
    if not lines or not lines[0].startswith("algebra "):
        raise ParseError("lattice file must start with 'algebra <name>'")
    name = _check_id(lines[0].split()[1], "algebra name")
    if len(lines) < 2 or not lines[1].startswith("elements "):
        raise ParseError(f"{name}: missing 'elements' line")
    elements = [_check_id(t, "element id") for t in lines[1].split()[1:]]
    if len(set(elements)) != len(elements):
        raise ParseError(f"{name}: duplicate element ids")
    known = set(elements)
    if len(lines) < 3 or not lines[2].startswith("top "):
        raise ParseError(f"{name}: missing 'top' line")
    top = lines[2].split()[1]
    if top not in known:
        raise ParseError(f"{name}: top {top!r} is not an element")
    leq_pairs = []
    ortho: dict[str, str] = {}
    for line in lines[3:]:
        parts = line.split()
        if parts[0] == "leq" and len(parts) == 3:
            a, b = parts[1], parts[2]
            if a not in known or b not in known:
                raise ParseError(f"{name}: leq uses unknown id in {line!r}")
            leq_pairs.append((a, b))
        elif parts[0] == "ortho" and len(parts) == 3:
            a, b = parts[1], parts[2]
            if a not in known or b not in known:
                raise ParseError(f"{name}: ortho uses unknown id in {line!r}")
            if a in ortho:
                raise ParseError(f"{name}: duplicate ortho line for {a}")
            ortho[a] = b
        else:
            raise ParseError(f"{name}: unrecognized line {line!r}")
    missing = [e for e in elements if e not in ortho]
    if missing:
        raise ParseError(f"{name}: ortho lines missing for {', '.join(missing)}")
    for a, b in ortho.items():
        if ortho.get(b) != a:
            raise ParseError(f"{name}: ortho not involutive at {a}")
    try:
        return QuantumEventAlgebra.build(name, elements, top, leq_pairs, ortho)
    except StructuralError as exc:
        raise ParseError(str(exc)) from exc


def format_lattice(alg: QuantumEventAlgebra) -> str:
    """Render an algebra in the lattice file format (closure included)."""
    lines = [f"algebra {alg.name}", "elements " + " ".join(alg.elements), f"top {alg.top}"]
    for a, b in sorted(alg.leq, key=lambda p: (alg.index[p[0]], alg.index[p[1]])):
        if a != b:
            lines.append(f"leq {a} {b}")
    for e in alg.elements:
        lines.append(f"ortho {e} {alg.ortho[e]}")
    return "\n".join(lines) + "\n"
