import pytest

from multisect.diagrams import (CutSystem, DiagramError, FormatError,
                                MultisectionDiagram, SurfaceModel,
                                connected_sum, express_against, format_diagram,
                                format_heegaard, mirror, parse_diagram,
                                parse_heegaard, pi1_of_diagram,
                                presentation_of_pair, read_against,
                                stabilize, standard_alpha_system, validate)
from multisect.constructions import lens_diagram, sphere_bundle_sum_diagram
from multisect.presentations import AbelianInvariants, abelianization
from multisect.words import Word, automorphism, identity_automorphism


def test_surface_model():
    surf = SurfaceModel(2)
    assert surf.rank == 4
    assert surf.a_letter(1) == 1 and surf.b_letter(1) == 2
    assert surf.a_letter(2) == 3 and surf.b_letter(2) == 4
    assert surf.partner(1) == 2 and surf.partner(4) == 3
    with pytest.raises(ValueError):
        SurfaceModel(-1)


def test_cut_system_standard_letters_and_duals():
    surf = SurfaceModel(1)
    system = CutSystem(surf, (Word(2, (2, 2, 1)),),
                       automorphism(2, {1: (-2, -2, 1)}, {1: (2, 2, 1)}),
                       "beta")
    assert system.standard_letters == (1,)
    assert system.surviving_letters == (2,)
    assert system.dual_index == {2: 1}


def test_cut_system_rejects_bad_exponents():
    surf = SurfaceModel(1)
    with pytest.raises(DiagramError):
        # b^2 a^2 has exponent row (2, 2): invariant factor 2
        CutSystem(surf, (Word(2, (2, 2, 1, 1)),), None, "bad")


def test_cut_system_rejects_nonreduced_or_empty():
    surf = SurfaceModel(1)
    with pytest.raises(DiagramError):
        CutSystem(surf, (Word(2, ()),), None, "empty")
    with pytest.raises(DiagramError):
        CutSystem(surf, (Word(2, (1, 2, -1)),), None, "conjugated")


def test_cut_system_rejects_bad_standardizer():
    surf = SurfaceModel(1)
    with pytest.raises(DiagramError):
        CutSystem(surf, (Word(2, (2, 2, 1)),), identity_automorphism(2), "beta")


def test_read_against_lens_curve(lens21):
    alpha = lens21.alpha
    assert read_against(Word(2, (2, 2, 1)), alpha).letters == (1, 1)


def test_read_self_vanishes(lens21):
    beta = lens21.beta
    for c in beta.curves:
        assert read_against(c, beta).is_identity()


def test_read_alpha_curve_against_doubled_cocores(lens21_bisection):
    # the side-0 a-curve reads as the dual of the side-1 a-letter
    beta = lens21_bisection.systems[1]
    out = read_against(Word(4, (1,)), beta)
    assert out.letters == (beta.dual_index[3],)


def test_express_against_keeps_based_words(lens21_bisection):
    gamma = lens21_bisection.systems[2]
    based = express_against(Word(4, (2, -2, 1)), gamma)
    assert based == express_against(Word(4, (1,)), gamma)


def test_presentation_of_pair_examples(lens21_bisection):
    d = lens21_bisection
    p12 = presentation_of_pair(d, 1, 2)
    assert [r.letters for r in p12.relators] == [(), (1, -2)]
    p23 = presentation_of_pair(d, 2, 3)
    assert [r.letters for r in p23.relators] == [(2, 2, 1), (-2, -2, -1)]
    p13 = presentation_of_pair(d, 1, 3)
    assert [r.letters for r in p13.relators] == [(1, 1), (-2, -2)]


def test_pi1_of_diagram_simplifies_to_lens_group(lens21_bisection):
    pres = pi1_of_diagram(lens21_bisection)
    assert abelianization(pres) == AbelianInvariants(0, (2,))


def test_validate_lens(lens21_bisection):
    report = validate(lens21_bisection, budget=200)
    assert report.ok
    assert [v.describe() for _, _, v in report.entries] == \
        ["Verified(1)", "Verified(1)"]
    pair, invariants = report.boundary
    assert pair == (3, 1)
    assert invariants == AbelianInvariants(0, (2, 2))


def test_validate_refutes_corrupted_types(lens21_bisection):
    d = lens21_bisection
    broken = MultisectionDiagram(d.surface, d.systems, False, (0, 1), d.readings)
    report = validate(broken)
    assert not report.ok
    assert report.entries[0][2].status == "refuted_by_homology"


def test_parallel_systems_diagram():
    surf = SurfaceModel(1)
    mk = lambda label: CutSystem(surf, (Word(2, (1,)),),
                                 identity_automorphism(2), label)
    d = MultisectionDiagram(surf, (mk("a"), mk("b"), mk("c")), False, (1, 1))
    report = validate(d)
    assert report.ok
    assert abelianization(pi1_of_diagram(d)) == AbelianInvariants(1, ())


def test_diagram_requires_three_systems():
    surf = SurfaceModel(1)
    mk = lambda label: CutSystem(surf, (Word(2, (1,)),),
                                 identity_automorphism(2), label)
    with pytest.raises(DiagramError):
        MultisectionDiagram(surf, (mk("a"), mk("b")), False, (1,))


def test_cached_reading_mismatch_detected(lens21_bisection):
    d = lens21_bisection
    bad = (((1, 2), (Word(2, (1,)), Word(2, (1, -2)))),)
    with pytest.raises(DiagramError):
        MultisectionDiagram(d.surface, d.systems, False, (1, 1), bad)


def test_connected_sum_examples(lens21):
    s = connected_sum(lens21, lens21)
    assert s.genus == 2
    assert [r.letters for r in s.relators()] == [(1, 1), (2, 2)]
    assert abelianization(s.pi1_presentation()) == AbelianInvariants(0, (2, 2))

    empty = sphere_bundle_sum_diagram(0)
    assert connected_sum(lens21, empty).relators() == lens21.relators()

    n_copies = lens_diagram(5, 1)
    total = n_copies
    for _ in range(2):
        total = connected_sum(total, n_copies)
    assert abelianization(total.pi1_presentation()) == \
        AbelianInvariants(0, (5, 5, 5))


def test_mirror_examples(lens21):
    m = mirror(lens21)
    assert [r.letters for r in m.relators()] == [(-1, -1)]
    assert m.homology() == AbelianInvariants(0, (2,))
    again = mirror(m)
    assert [c.letters for c in again.beta.curves] == \
        [c.letters for c in lens21.beta.curves]


def test_mirror_pairing_with_original(lens21):
    s = connected_sum(lens_diagram(5, 1), mirror(lens_diagram(5, 1)))
    assert abelianization(s.pi1_presentation()) == AbelianInvariants(0, (5, 5))


def test_stabilize_examples(lens21):
    s = stabilize(lens21)
    assert s.genus == 2
    assert [r.letters for r in s.relators()] == [(1, 1), (2,)]
    assert abelianization(s.pi1_presentation()) == lens21.homology()
    double = stabilize(s)
    assert double.genus == 3
    assert [r.letters for r in double.relators()] == [(1, 1), (2,), (3,)]


def test_alpha_system_helper():
    surf = SurfaceModel(2)
    alpha = standard_alpha_system(surf)
    assert [c.letters for c in alpha.curves] == [(1,), (3,)]
    assert alpha.dual_index == {2: 1, 4: 2}


def test_msd_round_trip(lens21_bisection):
    text = format_diagram(lens21_bisection)
    parsed = parse_diagram(text)
    assert parsed == lens21_bisection
    assert format_diagram(parsed) == text


def test_hd_round_trip(lens21):
    text = format_heegaard(lens21)
    parsed = parse_heegaard(text)
    assert parsed == lens21
    assert format_heegaard(parsed) == text


def test_parse_errors_carry_line_numbers():
    with pytest.raises(FormatError) as exc:
        parse_diagram("MSD 1\ngenus x\n")
    assert exc.value.line == 2
    with pytest.raises(FormatError):
        parse_heegaard("HD 2\n")


def test_unreadable_pair_error():
    surf = SurfaceModel(1)
    nothing = CutSystem(surf, (Word(2, (1,)),), None, "bare")
    other = CutSystem(surf, (Word(2, (2,)),), None, "bare2")
    third = CutSystem(surf, (Word(2, (1, 2)),), None, "bare3")
    d = MultisectionDiagram(surf, (nothing, other, third), False, (0, 0))
    with pytest.raises(DiagramError):
        presentation_of_pair(d, 1, 2)


def test_cache_only_diagram_validates_without_standardizers():
    # user-supplied data: no standardizers anywhere, every needed reading
    # cached by hand (a three-system genus-1 diagram of a simply
    # connected closed 4-manifold)
    surf = SurfaceModel(1)
    bare = lambda letters, label: CutSystem(surf, (Word(2, letters),), None, label)
    systems = (bare((1,), "alpha"), bare((2,), "beta"), bare((1, 2), "gamma"))
    one = (Word(1, (1,)),)
    readings = (((1, 2), one), ((2, 3), one), ((3, 1), one), ((1, 3), one))
    d = MultisectionDiagram(surf, systems, True, (0, 0, 0), readings)
    report = validate(d)
    assert report.ok
    assert abelianization(pi1_of_diagram(d)) == AbelianInvariants(0, ())
    with pytest.raises(DiagramError):
        presentation_of_pair(d, 2, 1)  # not cached, no standardizer
    from multisect.nielsen import spine_tuple
    with pytest.raises(DiagramError):
        spine_tuple(d, 1)


def test_genus_zero_diagram():
    surf = SurfaceModel(0)
    mk = lambda label: CutSystem(surf, (), identity_automorphism(0), label)
    d = MultisectionDiagram(surf, (mk("a"), mk("b"), mk("c")), True, (0, 0, 0))
    assert validate(d).ok
    text = format_diagram(d)
    assert parse_diagram(text) == d
