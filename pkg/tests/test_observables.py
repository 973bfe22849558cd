"""Frames, observables, triangle composition and arrow validation."""

import itertools

import pytest

from boolcover.algebra import (
    EventHomomorphism,
    QuantumEventAlgebra,
    as_boolean,
    enumerate_blocks,
    enumerate_homs,
    identity_hom,
)
from boolcover.corpus import frame_k1, frame_k2
from boolcover.observables import (
    BorelFrame,
    Observable,
    ObservableArrow,
    compose_arrows,
    compose_triangle,
    enumerate_observables,
    observable_from_atoms,
    parse_observable,
    validate_arrow,
    validate_observable,
)
from boolcover.oracles import oracle_observable_count
from boolcover.reports import (
    BudgetExceeded,
    ConstructionError,
    NotAnArrow,
    ParseError,
    StructuralError,
)


class TestFrames:
    def test_k1_has_two_elements(self):
        f = frame_k1()
        assert f.k == 1
        assert len(f.algebra.elements) == 2

    def test_k2_algebra_is_boolean_with_two_atoms(self):
        f = frame_k2()
        assert f.k == 2
        assert len(f.algebra.elements) == 4
        assert f.algebra.atoms == ("m1", "m2")

    def test_cells_round_trip(self):
        f = BorelFrame.build(["-1", "1/2"])
        assert f.k == 3
        for e in f.algebra.elements:
            assert f.id_of(f.cells_of(e)) == e

    def test_cuts_must_increase(self):
        with pytest.raises(StructuralError):
            BorelFrame.build(["1", "1"])

    def test_complement_is_cell_complement(self):
        f = frame_k2()
        assert f.cells_of(f.algebra.ortho["m1"]) == frozenset({1})


class TestValidateObservable:
    def test_k1_forced_map_passes(self, algebras):
        obs = observable_from_atoms("o", frame_k1(), algebras["mo2"], ["one"])
        assert validate_observable(obs).passed
        assert obs.mapping == {"m0": "zero", "m1": "one"}

    def test_k2_into_mo2_block_images_pass(self, algebras):
        obs = observable_from_atoms(
            "o", frame_k2(), algebras["mo2"], ["a", "astar"]
        )
        assert validate_observable(obs).passed
        assert obs.range_elements() == ("zero", "a", "astar", "one")

    def test_cross_block_images_fail_orthogonality(self, algebras):
        bad = Observable(
            "bad", frame_k2(), algebras["mo2"],
            {"m0": "zero", "m1": "a", "m2": "b", "m3": "one"},
        )
        report = validate_observable(bad)
        assert not report.passed
        ii = report.check("obs-ii")
        assert not ii.passed and ii.witness == ("m1", "m2")

    def test_broken_top_fails_condition_i(self, algebras):
        bad = Observable(
            "bad", frame_k1(), algebras["b4"], {"m0": "zero", "m1": "a"}
        )
        assert not validate_observable(bad).check("obs-i").passed

    def test_non_additive_map_fails_condition_iii(self, algebras):
        b8 = algebras["b8"]
        bad = Observable(
            "bad", frame_k2(), b8,
            {"m0": "zero", "m1": "p", "m2": "q", "m3": "one"},
        )
        report = validate_observable(bad)
        assert not report.check("obs-iii").passed


class TestFromAtoms:
    def test_b4_is_frame_isomorphism(self, algebras):
        obs = observable_from_atoms("o", frame_k2(), algebras["b4"], ["a", "astar"])
        assert obs.mapping == {"m0": "zero", "m1": "a", "m2": "astar", "m3": "one"}

    def test_non_orthogonal_images_name_the_pair(self, algebras):
        with pytest.raises(ConstructionError, match=r"\(a, b\)"):
            observable_from_atoms("o", frame_k2(), algebras["mo2"], ["a", "b"])

    def test_images_must_join_to_top(self, algebras):
        with pytest.raises(ConstructionError, match="join to top"):
            observable_from_atoms("o", frame_k2(), algebras["b8"], ["p", "q"])

    def test_atom_restriction_is_identity(self, algebras):
        images = ("p", "qr")
        obs = observable_from_atoms("o", frame_k2(), algebras["b8"], images)
        assert obs.atom_images() == images


class TestEnumerateObservables:
    @pytest.mark.parametrize(
        "name,k,expected",
        [
            ("b2", 1, 1), ("b4", 1, 1), ("mo2", 1, 1), ("star16", 1, 1),
            ("b2", 2, 2), ("b4", 2, 4), ("mo2", 2, 6), ("star16", 2, 16),
        ],
    )
    def test_frozen_counts(self, algebras, name, k, expected):
        frame = frame_k1() if k == 1 else frame_k2()
        found = enumerate_observables(frame, algebras[name])
        assert len(found) == expected

    @pytest.mark.parametrize("name,k", [("b2", 2), ("b4", 2), ("mo2", 2)])
    def test_counts_match_oracle(self, algebras, name, k):
        found = enumerate_observables(frame_k2(), algebras[name])
        assert len(found) == oracle_observable_count(k, algebras[name])

    def test_mo2_k2_atom_image_listing(self, algebras):
        found = enumerate_observables(frame_k2(), algebras["mo2"])
        assert [o.atom_images() for o in found] == [
            ("zero", "one"), ("a", "astar"), ("astar", "a"),
            ("b", "bstar"), ("bstar", "b"), ("one", "zero"),
        ]

    def test_generator_validator_agreement(self, algebras):
        for obs in enumerate_observables(frame_k2(), algebras["star16"]):
            assert validate_observable(obs).passed

    def test_budget_refusal_names_bound(self, algebras):
        with pytest.raises(BudgetExceeded, match="budget 10"):
            enumerate_observables(frame_k2(), algebras["star16"], budget=10)

    def test_range_lies_in_a_single_block(self, algebras):
        for name in ("mo2", "star16"):
            alg = algebras[name]
            blocks = [set(b.elements) for b in enumerate_blocks(alg)]
            for obs in enumerate_observables(frame_k2(), alg):
                rng = set(obs.range_elements())
                assert any(rng <= blk for blk in blocks), (name, rng)


class TestComposeTriangle:
    def test_identity_keeps_map(self, mo2_fam):
        obs = mo2_fam.observables[0]
        out = compose_triangle(obs, identity_hom(obs.target))
        assert out.mapping == obs.mapping

    def test_block_inclusion_gives_quantum_observable(self, mo2_fam):
        obs = mo2_fam.observables[0]
        out = compose_triangle(obs, mo2_fam.inclusions[0])
        assert out.target.name == "mo2"
        assert validate_observable(out).passed

    def test_no_valid_pair_fails_on_the_corpus(self, algebras):
        """Exhaustive scan: valid observable + valid hom always compose.

        Recorded as a corpus fact; the failure path needs a broken target.
        """
        b4 = as_boolean(algebras["b4"])
        obs_list = enumerate_observables(frame_k2(), b4)
        for target_name in ("b2", "b4", "mo2"):
            homs = enumerate_homs(b4, algebras[target_name])
            for obs, h in itertools.product(obs_list, homs):
                out = compose_triangle(obs, h)
                assert validate_observable(out).passed

    def test_source_mismatch_is_structural(self, algebras, star16_fam):
        obs = observable_from_atoms("o", frame_k2(), algebras["b4"], ["a", "astar"])
        with pytest.raises(StructuralError):
            compose_triangle(obs, star16_fam.inclusions[0])

    def test_invalid_carrier_raises_not_an_arrow(self, algebras):
        b4 = algebras["b4"]
        obs = observable_from_atoms("o", frame_k2(), b4, ["a", "astar"])
        twisted = EventHomomorphism(
            b4, b4, {"zero": "zero", "a": "a", "astar": "a", "one": "one"}
        )
        with pytest.raises(NotAnArrow):
            compose_triangle(obs, twisted)

    def test_composite_into_lawless_target_fails_additivity(self):
        """A target where an orthogonal pair has no join breaks condition iii.

        Such a target violates the event-algebra axioms, so this state is
        unreachable through validated constructors; the check still has to
        catch it when handed the map directly.
        """
        els = ["zero", "x", "y", "w1", "w2", "one"]
        lawless = QuantumEventAlgebra.build(
            "lawless", els, "one",
            [("zero", e) for e in els] + [(e, "one") for e in els]
            + [("x", "w1"), ("x", "w2"), ("y", "w1"), ("y", "w2")],
            {"zero": "one", "one": "zero",
             "x": "w1", "w1": "x", "y": "w2", "w2": "y"},
        )
        assert lawless.orthogonal("x", "y") and lawless.join("x", "y") is None
        composite = Observable(
            "c", frame_k2(), lawless,
            {"m0": "zero", "m1": "x", "m2": "y", "m3": "one"},
        )
        report = validate_observable(composite)
        assert not report.passed
        assert not report.check("obs-iii").passed


class TestArrows:
    def test_triangle_functoriality(self, mo2_fam):
        """Composing two arrows equals composing their carriers once."""
        base = mo2_fam.base
        names = list(base.arrows)
        for g, f in itertools.product(names, names):
            gar, far = base.arrows[g], base.arrows[f]
            if far.target.name != gar.source.name:
                continue
            comp = compose_arrows(gar, far)
            assert validate_arrow(comp).passed
            table = base.compose(g, f)
            assert base.arrows[table].carrier.mapping == comp.carrier.mapping

    def test_arrow_validation_catches_broken_triangle(self, mo2_fam):
        th_a, th_b = mo2_fam.observables
        h = EventHomomorphism(
            th_a.target, th_b.target,
            {"zero": "zero", "a": "b", "astar": "bstar", "one": "one"},
        )
        good = ObservableArrow("u", th_a, th_b, h)
        assert validate_arrow(good).passed
        broken = ObservableArrow(
            "v", th_a, th_b,
            EventHomomorphism(
                th_a.target, th_b.target,
                {"zero": "one", "a": "b", "astar": "bstar", "one": "one"},
            ),
        )
        report = validate_arrow(broken)
        assert not report.passed


class TestObservableFormat:
    def test_parse_round_trip(self, algebras):
        text = (
            "observable xi\nframe 2\ncuts 0\ntarget mo2\n"
            "atom 0 -> a\natom 1 -> astar\n"
        )
        obs = parse_observable(text, {"mo2": algebras["mo2"]})
        assert obs.name == "xi" and obs.atom_images() == ("a", "astar")

    def test_missing_atom_line_rejected(self, algebras):
        with pytest.raises(ParseError):
            parse_observable(
                "observable xi\nframe 2\ncuts 0\ntarget mo2\natom 0 -> a\n",
                {"mo2": algebras["mo2"]},
            )

    def test_unknown_target_rejected(self, algebras):
        with pytest.raises(ParseError):
            parse_observable(
                "observable xi\nframe 1\ntarget nope\natom 0 -> one\n", {}
            )

    def test_invalid_images_rejected(self, algebras):
        with pytest.raises(ParseError):
            parse_observable(
                "observable xi\nframe 2\ncuts 0\ntarget mo2\n"
                "atom 0 -> a\natom 1 -> b\n",
                {"mo2": algebras["mo2"]},
            )
