"""Event algebra carriers, validators, blocks and homomorphisms."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolcover import corpus, oracles
from boolcover.algebra import (
    EventHomomorphism,
    QuantumEventAlgebra,
    as_boolean,
    compose_homs,
    enumerate_blocks,
    enumerate_homs,
    identity_hom,
    parse_lattice,
    format_lattice,
    validate_boolean_algebra,
    validate_homomorphism,
    validate_quantum_algebra,
)
from boolcover.reports import ParseError, StructuralError


def mo2_corrupted_g():
    """MO2 with ortho replaced by the 3-cycle zero->b->one->zero."""
    els = ["zero", "a", "astar", "b", "bstar", "one"]
    return QuantumEventAlgebra.build(
        "mo2_bad_g",
        els,
        "one",
        [(x, "one") for x in els] + [("zero", x) for x in els],
        {"zero": "b", "a": "astar", "astar": "a",
         "b": "one", "bstar": "bstar", "one": "zero"},
    )


class TestQuantumValidation:
    def test_two_element_algebra_passes_all_axioms(self, algebras):
        report = validate_quantum_algebra(algebras["b2"])
        assert report.passed
        assert [c.name for c in report.checks] == [
            "axiom-a", "axiom-b", "axiom-c", "axiom-d",
            "axiom-e", "axiom-g", "bottom-minimum",
        ]

    def test_mo2_passes_all_axioms(self, algebras):
        assert validate_quantum_algebra(algebras["mo2"]).passed

    @pytest.mark.parametrize("name", ["b2", "b4", "b8", "mo2", "star16"])
    def test_corpus_passes(self, algebras, name):
        assert validate_quantum_algebra(algebras[name]).passed

    def test_corrupted_mo2_fails_axiom_g_with_witness(self):
        report = validate_quantum_algebra(mo2_corrupted_g())
        assert not report.passed
        g = report.check("axiom-g")
        assert not g.passed
        assert g.witness == ("a", "b")
        # the 3-cycle also breaks involution
        assert not report.check("axiom-b").passed

    def test_non_bijective_ortho_is_structural(self, algebras):
        els = ["zero", "a", "astar", "one"]
        alg = QuantumEventAlgebra.build(
            "squash", els, "one",
            [("zero", x) for x in els] + [(x, "one") for x in els],
            {"zero": "one", "a": "one", "astar": "a", "one": "zero"},
        )
        report = validate_quantum_algebra(alg)
        assert report.structural and not report.checks

    def test_unknown_id_rejected_at_build(self):
        with pytest.raises(StructuralError):
            QuantumEventAlgebra.build(
                "bad", ["x", "y"], "y", [("x", "z")], {"x": "y", "y": "x"}
            )

    def test_non_antisymmetric_closure_rejected(self):
        with pytest.raises(StructuralError):
            QuantumEventAlgebra.build(
                "cyc", ["x", "y", "one"], "one",
                [("x", "y"), ("y", "x"), ("x", "one"), ("y", "one")],
                {"x": "y", "y": "x", "one": "one"},
            )


class TestBooleanValidation:
    def test_b2_passes_one_atom(self, algebras):
        report = validate_boolean_algebra(as_boolean(algebras["b2"]))
        assert report.passed
        assert report.check("atoms").witness == ("one",)

    def test_b4_passes_two_atoms(self, algebras):
        report = validate_boolean_algebra(as_boolean(algebras["b4"]))
        assert report.passed
        assert report.check("atoms").witness == ("a", "astar")

    def test_mo2_fails_distributivity(self, algebras):
        report = validate_boolean_algebra(as_boolean(algebras["mo2"]))
        assert not report.passed
        d = report.check("distributive")
        assert not d.passed
        assert d.witness == ("a", "astar", "b")

    def test_lattice_total_on_corpus_booleans(self, algebras):
        for name in ("b2", "b4", "b8"):
            assert validate_boolean_algebra(as_boolean(algebras[name])).passed


class TestMeetJoin:
    def test_mo2_examples(self, algebras):
        m = algebras["mo2"]
        assert m.join("a", "astar") == "one"
        assert m.meet("a", "b") == "zero"
        assert m.join("a", "b") == "one"

    def test_join_idempotent(self, algebras):
        b = algebras["b4"]
        assert b.join("a", "a") == "a"

    def test_meet_join_are_bounds(self, algebras):
        for alg in algebras.values():
            for x, y in itertools.product(alg.elements, alg.elements):
                mt, jn = alg.meet(x, y), alg.join(x, y)
                if mt is not None:
                    assert alg.le(mt, x) and alg.le(mt, y)
                if jn is not None:
                    assert alg.le(x, jn) and alg.le(y, jn)


class TestOrthoAntiIsomorphism:
    @pytest.mark.parametrize("name", ["b2", "b4", "b8", "mo2", "star16"])
    def test_order_reversal_both_ways(self, algebras, name):
        alg = algebras[name]
        for x, y in itertools.product(alg.elements, alg.elements):
            assert alg.le(x, y) == alg.le(alg.ortho[y], alg.ortho[x])


class TestHomomorphisms:
    def test_identity_passes(self, algebras):
        for alg in algebras.values():
            assert validate_homomorphism(identity_hom(alg)).passed

    def test_block_inclusion_passes(self, mo2_fam):
        for incl in mo2_fam.inclusions:
            assert validate_homomorphism(incl).passed

    def test_twisted_map_fails_condition_b(self, mo2_fam):
        blk_a = mo2_fam.blocks[0]
        h = EventHomomorphism(
            blk_a, mo2_fam.algebra,
            {"zero": "zero", "a": "b", "astar": "a", "one": "one"},
        )
        report = validate_homomorphism(h)
        assert not report.passed
        b = report.check("hom-b")
        assert not b.passed and b.witness == ("a",)

    def test_partial_map_is_structural(self, mo2_fam):
        h = EventHomomorphism(
            mo2_fam.blocks[0], mo2_fam.algebra, {"zero": "zero", "one": "one"}
        )
        assert validate_homomorphism(h).structural

    def test_composition_of_valid_homs_is_valid(self, algebras):
        b4 = as_boolean(algebras["b4"])
        mo2 = algebras["mo2"]
        inner = enumerate_homs(b4, b4)
        outer = enumerate_homs(b4, mo2)
        for h1, h2 in itertools.product(inner, outer):
            comp = compose_homs(h2, h1)
            assert validate_homomorphism(comp).passed


class TestBlocks:
    def test_b2_is_its_own_block(self, algebras):
        blocks = enumerate_blocks(algebras["b2"])
        assert [set(b.elements) for b in blocks] == [{"zero", "one"}]

    def test_mo2_two_blocks_canonical_order(self, algebras):
        blocks = enumerate_blocks(algebras["mo2"])
        assert [tuple(sorted(b.elements)) for b in blocks] == [
            ("a", "astar", "one", "zero"),
            ("b", "bstar", "one", "zero"),
        ]

    def test_b8_single_block(self, algebras):
        blocks = enumerate_blocks(algebras["b8"])
        assert len(blocks) == 1
        assert set(blocks[0].elements) == set(algebras["b8"].elements)

    def test_star16_three_blocks(self, algebras):
        blocks = enumerate_blocks(algebras["star16"])
        assert len(blocks) == 3
        for b in blocks:
            assert len(b.elements) == 8

    @pytest.mark.parametrize("name", ["b2", "b4", "b8", "mo2", "star16"])
    def test_block_properties(self, algebras, name):
        alg = algebras[name]
        blocks = enumerate_blocks(alg)
        covered = set()
        for blk in blocks:
            assert validate_boolean_algebra(blk).passed
            covered.update(blk.elements)
        # no block contained in another
        for b1, b2 in itertools.permutations(blocks, 2):
            assert not set(b1.elements) <= set(b2.elements)
        assert covered == set(alg.elements), "element in no block"

    @pytest.mark.parametrize("name", ["b2", "b4", "b8", "mo2", "star16"])
    def test_blocks_match_oracle(self, algebras, name):
        alg = algebras[name]
        lib = [tuple(sorted(b.elements)) for b in enumerate_blocks(alg)]
        assert lib == oracles.oracle_blocks(alg)


class TestHomEnumeration:
    def test_frozen_hom_counts(self, algebras):
        b2 = as_boolean(algebras["b2"])
        b4 = as_boolean(algebras["b4"])
        b8 = as_boolean(algebras["b8"])
        assert len(enumerate_homs(b2, b2)) == 1
        assert len(enumerate_homs(b4, b4)) == 4
        assert len(enumerate_homs(b4, algebras["mo2"])) == 6
        assert len(enumerate_homs(b8, b8)) == 27
        assert len(enumerate_homs(b8, algebras["star16"])) == 63

    def test_enumerated_homs_validate(self, algebras):
        b4 = as_boolean(algebras["b4"])
        for h in enumerate_homs(b4, algebras["star16"]):
            assert validate_homomorphism(h).passed


class TestLatticeFormat:
    def test_round_trip(self, algebras):
        for alg in algebras.values():
            again = parse_lattice(format_lattice(alg))
            assert again.same_carrier(alg)
            assert again.name == alg.name

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ParseError):
            parse_lattice("algebra x\nelements a a\ntop a\northo a a\n")

    def test_missing_top_rejected(self):
        with pytest.raises(ParseError):
            parse_lattice(
                "algebra x\nelements zero one\northo zero one\northo one zero\n"
            )

    def test_unknown_id_rejected(self):
        with pytest.raises(ParseError):
            parse_lattice(
                "algebra x\nelements zero one\ntop one\nleq zero bogus\n"
                "ortho zero one\northo one zero\n"
            )

    def test_non_involutive_ortho_rejected(self):
        with pytest.raises(ParseError):
            parse_lattice(
                "algebra x\nelements zero mid one\ntop one\n"
                "leq zero mid\nleq mid one\n"
                "ortho zero mid\northo mid one\northo one zero\n"
            )

    def test_comment_lines_skipped(self):
        alg = parse_lattice(
            "# a comment\nalgebra c\nelements zero one\ntop one\n"
            "# another\nleq zero one\northo zero one\northo one zero\n"
        )
        assert alg.name == "c"


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_corruption_dual_path_agreement(seed):
    """Both validator paths agree on random constructible corruptions."""
    import random

    base = corpus.mo2()
    bad = corpus.corrupt(base, random.Random(seed))
    lib = validate_quantum_algebra(bad)
    ora = oracles.oracle_axioms(bad)
    assert bool(lib.structural) == bool(ora.structural)
    if not lib.structural:
        assert [c.passed for c in lib.checks] == [c.passed for c in ora.checks]


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=5),
    swaps=st.lists(
        st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=6
    ),
)
def test_permutation_ortho_still_validates_structurally(n, swaps):
    """Permutation orthos always build; validation never crashes."""
    els = [f"e{i}" for i in range(n)] + ["one"]
    perm = list(range(len(els)))
    for i, j in swaps:
        i, j = i % len(els), j % len(els)
        perm[i], perm[j] = perm[j], perm[i]
    ortho = {els[i]: els[perm[i]] for i in range(len(els))}
    # force an involution by symmetrizing
    fixed = dict(ortho)
    for k, v in ortho.items():
        fixed[v] = k
    alg = QuantumEventAlgebra.build(
        "rand", els, "one", [(e, "one") for e in els], fixed
    )
    report = validate_quantum_algebra(alg)
    assert isinstance(report.passed, bool)
