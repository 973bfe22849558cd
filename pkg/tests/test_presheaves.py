"""Base categories, presheaves, the covering Hom-functor, elements category."""

import itertools

import pytest

from boolcover.algebra import compose_homs
from boolcover.presheaves import (
    FiniteCategory,
    Presheaf,
    category_of_elements,
    constant_presheaf,
    empty_presheaf,
    hom_functor_R,
    nat_transformations,
    parse_presheaf,
    representable,
    validate_elements_category,
    validate_presheaf,
)
from boolcover.reports import BudgetExceeded, ParseError, StructuralError


class TestFiniteCategory:
    def test_full_base_sizes(self, mo2_fam):
        base = mo2_fam.base
        assert len(base.objects) == 2
        assert len(base.arrows) == 16
        for s, t in itertools.product(["th_a", "th_b"], repeat=2):
            assert len(base.hom(s, t)) == 4

    def test_identities_present(self, mo2_fam):
        base = mo2_fam.base
        for obj in base.objects:
            ident = base.identity(obj.name)
            assert base.arrows[ident].carrier.is_identity()

    def test_composition_total_and_consistent(self, mo2_fam):
        base = mo2_fam.base
        for g, f in itertools.product(base.arrows, base.arrows):
            gar, far = base.arrows[g], base.arrows[f]
            if far.target.name != gar.source.name:
                assert (g, f) not in base.composition
                continue
            comp = base.arrows[base.compose(g, f)]
            expected = compose_homs(gar.carrier, far.carrier)
            assert comp.carrier.mapping == expected.mapping

    def test_unclosed_arrow_set_rejected(self, mo2_fam):
        base = mo2_fam.base
        keep = [
            base.arrows[nm]
            for nm in base.arrow_order
            if base.arrows[nm].carrier.is_identity()
            or base.arrows[nm].source.name != base.arrows[nm].target.name
        ]
        # cross arrows compose to non-identity endos that are now missing
        with pytest.raises(StructuralError, match="not closed"):
            FiniteCategory.build("broken", list(base.objects), keep)


class TestPresheafLaws:
    def test_constant_presheaf_passes(self, mo2_fam):
        x = constant_presheaf(mo2_fam.base, ("s",))
        assert validate_presheaf(x).passed

    def test_representables_pass(self, bases):
        for base in bases.values():
            for obj in base.objects:
                assert validate_presheaf(representable(base, obj.name)).passed

    def test_corrupted_restriction_fails_with_pair(self, mo2_fam):
        y = representable(mo2_fam.base, "th_a")
        broken = {nm: dict(t) for nm, t in y.restrict.items()}
        # misroute one non-identity restriction value
        victim = next(
            nm for nm in mo2_fam.base.arrow_order
            if not mo2_fam.base.arrows[nm].carrier.is_identity()
            and broken[nm]
        )
        key = next(iter(broken[victim]))
        vals = y.sections(mo2_fam.base.arrows[victim].source.name)
        broken[victim][key] = next(v for v in vals if v != broken[victim][key])
        x = Presheaf("bad", mo2_fam.base, y.at, broken)
        report = validate_presheaf(x)
        assert not report.passed

    def test_missing_restriction_is_structural(self, mo2_fam):
        x = constant_presheaf(mo2_fam.base, ("s",))
        partial = dict(x.restrict)
        partial.pop(next(iter(partial)))
        bad = Presheaf("bad", mo2_fam.base, x.at, partial)
        assert validate_presheaf(bad).structural


class TestRepresentable:
    def test_identity_is_a_section(self, mo2_fam):
        y = representable(mo2_fam.base, "th_a")
        assert mo2_fam.base.identity("th_a") in y.sections("th_a")

    def test_restriction_is_precomposition(self, mo2_fam):
        base = mo2_fam.base
        y = representable(base, "th_b")
        for nm in base.arrow_order:
            ar = base.arrows[nm]
            for v in y.sections(ar.target.name):
                assert y.restrict[nm][v] == base.compose(v, nm)

    def test_yoneda_counts_on_k1_base(self, mo2_fam):
        base = mo2_fam.base
        for s, t in itertools.product(["th_a", "th_b"], repeat=2):
            nats = nat_transformations(
                representable(base, s), representable(base, t)
            )
            assert len(nats) == len(base.hom(s, t))

    def test_yoneda_counts_on_k2_base(self, bases):
        base = bases["mo2_k2_full"]
        names = [o.name for o in base.objects]
        for s, t in itertools.product(names, repeat=2):
            nats = nat_transformations(
                representable(base, s), representable(base, t)
            )
            assert len(nats) == len(base.hom(s, t))


class TestHomFunctor:
    def test_identity_cover_present_for_boolean_target(self, b4_fam):
        r = hom_functor_R(b4_fam.base, b4_fam.target)
        obj = b4_fam.observables[0].name
        homs = [r.hom_of(obj, sid) for sid in r.sections(obj)]
        assert any(h.mapping == {e: e for e in h.source.elements} for h in homs)

    def test_k2_block_sections(self, bases, algebras):
        from boolcover.corpus import frame_k2
        from boolcover.observables import observable_from_atoms

        base = bases["mo2_k2_full"]
        xi = observable_from_atoms(
            "xi_k2a", frame_k2(), algebras["mo2"], ["a", "astar"]
        )
        r = hom_functor_R(base, xi)
        # the a-block object carries the inclusion; the b-block the relabel
        assert len(r.sections("th_a_k2")) == 1
        assert len(r.sections("th_b_k2")) == 1
        incl = r.hom_of("th_a_k2", r.sections("th_a_k2")[0])
        assert incl.mapping["a"] == "a"
        relabel = r.hom_of("th_b_k2", r.sections("th_b_k2")[0])
        assert relabel.mapping["b"] == "a"

    def test_sizes_on_k1_bases(self, mo2_fam, star16_fam):
        r = hom_functor_R(mo2_fam.base, mo2_fam.target)
        assert [len(r.sections(o.name)) for o in mo2_fam.base.objects] == [6, 6]
        r16 = hom_functor_R(star16_fam.base, star16_fam.target)
        assert [
            len(r16.sections(o.name)) for o in star16_fam.base.objects
        ] == [63, 63, 63]

    def test_functor_laws_hold(self, mo2_fam):
        r = hom_functor_R(mo2_fam.base, mo2_fam.target)
        assert validate_presheaf(r).passed

    def test_subfunctor_closed_under_precomposition(self, mo2_fam):
        base = mo2_fam.base
        r = hom_functor_R(base, mo2_fam.target)
        for nm in base.arrow_order:
            ar = base.arrows[nm]
            for sid in r.sections(ar.target.name):
                h = r.hom_of(ar.target.name, sid)
                pre = compose_homs(h, ar.carrier)
                assert any(
                    r.hom_of(ar.source.name, sid2).mapping == pre.mapping
                    for sid2 in r.sections(ar.source.name)
                )

    def test_frame_mismatch_rejected(self, mo2_fam, bases, algebras):
        from boolcover.corpus import frame_k2
        from boolcover.observables import observable_from_atoms

        xi_k2 = observable_from_atoms(
            "xi_k2", frame_k2(), algebras["mo2"], ["a", "astar"]
        )
        with pytest.raises(StructuralError):
            hom_functor_R(mo2_fam.base, xi_k2)


class TestElementsCategory:
    def test_constant_presheaf_gives_base_copy(self, mo2_fam):
        x = constant_presheaf(mo2_fam.base, ("s",))
        g = category_of_elements(x)
        assert len(g.pairs) == len(mo2_fam.base.objects)
        assert len(g.arrows) == len(mo2_fam.base.arrows)
        assert validate_elements_category(g).passed

    def test_representable_has_identity_pair_terminal(self, mo2_fam):
        y = representable(mo2_fam.base, "th_a")
        g = category_of_elements(y)
        terminals = g.terminal_objects()
        assert ("th_a", mo2_fam.base.identity("th_a")) in terminals

    def test_pair_count_is_section_total(self, mo2_fam):
        r = hom_functor_R(mo2_fam.base, mo2_fam.target)
        g = category_of_elements(r)
        assert len(g.pairs) == r.total_sections() == 12

    def test_fibers_biject_with_sections(self, mo2_fam):
        r = hom_functor_R(mo2_fam.base, mo2_fam.target)
        g = category_of_elements(r)
        for obj in mo2_fam.base.objects:
            assert len(g.fiber(obj.name)) == len(r.sections(obj.name))

    def test_restriction_direction(self, mo2_fam):
        """Every restriction sends sections at cod(u) into sections at dom(u)."""
        r = hom_functor_R(mo2_fam.base, mo2_fam.target)
        for nm in mo2_fam.base.arrow_order:
            ar = mo2_fam.base.arrows[nm]
            for sid, out in r.restrict[nm].items():
                assert sid in r.sections(ar.target.name)
                assert out in r.sections(ar.source.name)


class TestNatEnumeration:
    def test_empty_source_has_one_transformation(self, mo2_fam):
        r = hom_functor_R(mo2_fam.base, mo2_fam.target)
        assert len(nat_transformations(empty_presheaf(mo2_fam.base), r)) == 1

    def test_budget_guard(self, mo2_fam):
        r = hom_functor_R(mo2_fam.base, mo2_fam.target)
        with pytest.raises(BudgetExceeded):
            nat_transformations(r, r, budget=100)

    def test_naturality_of_every_result(self, mo2_fam):
        base = mo2_fam.base
        y = representable(base, "th_a")
        r = hom_functor_R(base, mo2_fam.target)
        for tau in nat_transformations(y, r):
            for nm in base.arrow_order:
                ar = base.arrows[nm]
                for p in y.sections(ar.target.name):
                    lhs = tau[(ar.source.name, y.restrict[nm][p])]
                    rhs = r.restrict[nm][tau[(ar.target.name, p)]]
                    assert lhs == rhs


class TestPresheafFormat:
    def test_parse_constant(self, mo2_fam):
        base = mo2_fam.base
        lines = [f"presheaf c over {base.name}"]
        for obj in base.objects:
            lines.append(f"sections {obj.name} : s")
        for nm in base.arrow_order:
            lines.append(f"restrict {nm} : s -> s")
        x = parse_presheaf("\n".join(lines) + "\n", base)
        assert validate_presheaf(x).passed

    def test_wrong_category_rejected(self, mo2_fam):
        with pytest.raises(ParseError):
            parse_presheaf("presheaf c over other\n", mo2_fam.base)

    def test_unknown_arrow_rejected(self, mo2_fam):
        with pytest.raises(ParseError):
            parse_presheaf(
                f"presheaf c over {mo2_fam.base.name}\n"
                "restrict nope : s -> s\n",
                mo2_fam.base,
            )
