"""Curated finite test instances used throughout the suite.

The corpus holds the small standard carriers: the two-element algebra, the
free Boolean algebras on one, two and three atoms, the six-element lantern
MO2 (the smallest non-Boolean orthoposet of interest), and a sixteen-element
three-block lattice made of three eight-element Boolean blocks pasted along
a shared atom.  Seeded corruption helpers produce deterministic broken
variants for dual-path validator agreement tests.
"""

from __future__ import annotations

import random

from .algebra import (
    BooleanEventAlgebra,
    QuantumEventAlgebra,
)


def b2() -> BooleanEventAlgebra:
    return BooleanEventAlgebra.build(
        "b2",
        ["zero", "one"],
        "one",
        [("zero", "one")],
        {"zero": "one", "one": "zero"},
    )


def b4() -> BooleanEventAlgebra:
    return BooleanEventAlgebra.build(
        "b4",
        ["zero", "a", "astar", "one"],
        "one",
        [("zero", "a"), ("zero", "astar"), ("a", "one"), ("astar", "one")],
        {"zero": "one", "one": "zero", "a": "astar", "astar": "a"},
    )


def b8() -> BooleanEventAlgebra:
    """Free Boolean algebra on atoms p, q, r; pq denotes the join of p and q."""
    atoms = ["p", "q", "r"]
    pairs = []
    ortho = {"zero": "one", "one": "zero", "p": "qr", "q": "pr", "r": "pq",
             "pq": "r", "pr": "q", "qr": "p"}
    elements = ["zero", "p", "q", "r", "pq", "pr", "qr", "one"]
    for a in atoms:
        pairs.append(("zero", a))
    for pair, members in [("pq", "pq"), ("pr", "pr"), ("qr", "qr")]:
        for m in members:
            pairs.append((m, pair))
    for co in ["pq", "pr", "qr"]:
        pairs.append((co, "one"))
    return BooleanEventAlgebra.build("b8", elements, "one", pairs, ortho)


def b16() -> BooleanEventAlgebra:
    """Free Boolean algebra on four atoms, for size stress in Stone checks."""
    names = {}
    elements = []
    for mask in range(16):
        nm = "w%d" % mask
        names[mask] = nm
        elements.append(nm)
    pairs = []
    ortho = {}
    for mask in range(16):
        ortho[names[mask]] = names[15 ^ mask]
        for other in range(16):
            if mask & other == mask:
                pairs.append((names[mask], names[other]))
    return BooleanEventAlgebra.build("b16", elements, names[15], pairs, ortho)


def mo2() -> QuantumEventAlgebra:
    """Six-element lantern: two incomparable complement pairs under 0 < 1."""
    elements = ["zero", "a", "astar", "b", "bstar", "one"]
    pairs = [(x, "one") for x in elements] + [("zero", x) for x in elements]
    ortho = {"zero": "one", "one": "zero", "a": "astar", "astar": "a",
             "b": "bstar", "bstar": "b"}
    return QuantumEventAlgebra.build("mo2", elements, "one", pairs, ortho)


def mo3() -> QuantumEventAlgebra:
    """Eight-element lantern with three complement pairs."""
    mid = ["a", "astar", "b", "bstar", "c", "cstar"]
    elements = ["zero"] + mid + ["one"]
    pairs = [(x, "one") for x in elements] + [("zero", x) for x in elements]
    ortho = {"zero": "one", "one": "zero", "a": "astar", "astar": "a",
             "b": "bstar", "bstar": "b", "c": "cstar", "cstar": "c"}
    return QuantumEventAlgebra.build("mo3", elements, "one", pairs, ortho)


def star16() -> QuantumEventAlgebra:
    """Three eight-element Boolean blocks pasted along the shared atom p.

    Blocks have atom sets {p,q,r}, {p,s,t}, {p,u,v}; the coatom pstar is the
    shared join of each block's other two atoms.  Pairwise block overlap is
    {zero, p, pstar, one}.  The result is an orthomodular lattice.
    """
    blocks = [("q", "r"), ("s", "t"), ("u", "v")]
    elements = ["zero", "p", "pstar"]
    ortho = {"zero": "one", "one": "zero", "p": "pstar", "pstar": "p"}
    pairs = [("zero", "p"), ("p", "one" ), ("zero", "pstar"), ("pstar", "one")]
    for x, y in blocks:
        xs, ys = x + "star", y + "star"
        elements.extend([x, y, xs, ys])
        ortho.update({x: xs, xs: x, y: ys, ys: y})
        # atom <= its two coatoms; coatoms below one; x* = p v y, y* = p v x
        pairs.extend(
            [
                ("zero", x), ("zero", y),
                (x, ys), (y, xs),
                ("p", xs), ("p", ys),
                (x, "pstar"), (y, "pstar"),
                (xs, "one"), (ys, "one"),
            ]
        )
    elements.append("one")
    return QuantumEventAlgebra.build("star16", elements, "one", pairs, ortho)


CORPUS_BUILDERS = {
    "b2": b2,
    "b4": b4,
    "b8": b8,
    "mo2": mo2,
    "star16": star16,
}

# Which corpus lattices additionally satisfy the orthomodular law; verified
# against oracles.is_orthomodular by the test suite, never assumed by a
# validator.
ORTHOMODULAR_NOTES = {
    "b2": True,
    "b4": True,
    "b8": True,
    "mo2": True,
    "star16": True,
}


def corpus_algebras() -> dict[str, QuantumEventAlgebra]:
    return {name: fn() for name, fn in CORPUS_BUILDERS.items()}


def frame_k1():
    from .observables import BorelFrame

    return BorelFrame.build([])


def frame_k2():
    from .observables import BorelFrame

    return BorelFrame.build(["0"])


class Family:
    """One quantum algebra with its blocks, observables, base and systems.

    Everything is built over the one-cell frame, where observable triangles
    are vacuous and covering reduces to plain event-algebra covering; the
    base is the full category of all commuting triangles between the block
    observables.
    """

    def __init__(self, algebra, block_names: dict[int, str]):
        from .algebra import EventHomomorphism, enumerate_blocks
        from .observables import observable_from_atoms
        from .presheaves import FiniteCategory

        self.algebra = algebra
        raw_blocks = enumerate_blocks(algebra)
        self.blocks = [
            blk.restrict(blk.elements, block_names.get(i, blk.name))
            for i, blk in enumerate(raw_blocks)
        ]
        k1 = frame_k1()
        self.target = observable_from_atoms(
            f"xi_{algebra.name}", k1, algebra, ["one"]
        )
        self.observables = [
            observable_from_atoms(f"th_{blk.name.split('blk_')[-1]}", k1, blk, ["one"])
            for blk in self.blocks
        ]
        self.inclusions = [
            EventHomomorphism(
                blk, algebra, {e: e for e in blk.elements},
                f"incl_{blk.name.split('blk_')[-1]}",
            )
            for blk in self.blocks
        ]
        self.base = FiniteCategory.full(
            f"{algebra.name}_k1_full", self.observables
        )

    def system_all_blocks(self, name: str):
        from .localization import generate_system

        return generate_system(
            name,
            self.base,
            self.target,
            [
                (obs.name, incl.name, incl)
                for obs, incl in zip(self.observables, self.inclusions)
            ],
        )

    def system_single_block(self, name: str, index: int):
        from .localization import generate_system
        from .presheaves import FiniteCategory

        obs = self.observables[index]
        base = FiniteCategory.full(
            f"{self.algebra.name}_k1_{obs.name}", [obs]
        )
        incl = self.inclusions[index]
        return generate_system(
            name, base, self.target, [(obs.name, incl.name, incl)]
        )


def mo2_family() -> Family:
    return Family(mo2(), {0: "blk_a", 1: "blk_b"})


def b4_family() -> Family:
    return Family(b4(), {0: "blk_b4"})


def star16_family() -> Family:
    return Family(star16(), {0: "blk_pqr", 1: "blk_pst", 2: "blk_puv"})


def corpus_bases() -> dict[str, object]:
    """The registry of base categories used by the acceptance suite."""
    from .observables import observable_from_atoms
    from .presheaves import FiniteCategory

    fams = {
        "mo2": mo2_family(),
        "b4": b4_family(),
        "star16": star16_family(),
    }
    bases: dict[str, object] = {
        f.base.name: f.base for f in fams.values()
    }
    # two-cell-frame base on the MO2 block observables
    k2 = frame_k2()
    m = fams["mo2"]
    th_a2 = observable_from_atoms("th_a_k2", k2, m.blocks[0], ["a", "astar"])
    th_b2 = observable_from_atoms("th_b_k2", k2, m.blocks[1], ["b", "bstar"])
    bases["mo2_k2_full"] = FiniteCategory.full("mo2_k2_full", [th_a2, th_b2])
    return bases


def corrupt(
    alg: QuantumEventAlgebra, rng: random.Random
) -> QuantumEventAlgebra:
    """One random constructible corruption of an algebra.

    Mutations either rewire ortho (possibly breaking involution or
    bijectivity), retarget top, or add a leq pair.  Retries until the
    constructor accepts the data, so the result is always a built object
    that both validator paths can be run on.
    """
    els = list(alg.elements)
    for _ in range(64):
        ortho = dict(alg.ortho)
        top = alg.top
        extra: list[tuple[str, str]] = []
        kind = rng.randrange(3)
        if kind == 0:
            ortho[rng.choice(els)] = rng.choice(els)
        elif kind == 1:
            x, y = rng.choice(els), rng.choice(els)
            ortho[x], ortho[y] = ortho[y], ortho[x]
        else:
            extra.append((rng.choice(els), rng.choice(els)))
        base_pairs = [p for p in alg.leq] + extra
        try:
            return QuantumEventAlgebra.build(
                f"{alg.name}_corrupt", els, top, base_pairs, ortho
            )
        except Exception:
            continue
    raise RuntimeError("could not produce a constructible corruption")


def corrupted_variants(
    alg: QuantumEventAlgebra, count: int, seed: int
) -> list[QuantumEventAlgebra]:
    rng = random.Random(seed)
    return [corrupt(alg, rng) for _ in range(count)]
