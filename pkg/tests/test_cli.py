import pytest

from multisect.cli import main
from multisect.constructions import bisection_from_heegaard, lens_diagram
from multisect.diagrams import format_diagram, format_heegaard, parse_diagram, \
    validate


@pytest.fixture
def lens_hd(tmp_path):
    path = tmp_path / "lens21.hd"
    path.write_text(format_heegaard(lens_diagram(2, 1)))
    return path


@pytest.fixture
def lens_msd(tmp_path):
    path = tmp_path / "lens21.msd"
    path.write_text(format_diagram(bisection_from_heegaard(lens_diagram(2, 1))))
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_construct_lens_then_bisect(tmp_path):
    hd = tmp_path / "l.hd"
    msd = tmp_path / "l.msd"
    assert run("construct", "lens", "--p", 2, "--q", 1, "-o", hd) == 0
    assert run("construct", "bisect", "-i", hd, "-o", msd) == 0
    d = parse_diagram(msd.read_text())
    assert d.surface.genus == 2
    assert d.claimed_types == (1, 1)


def test_validate_exit_codes(lens_msd, tmp_path, capsys):
    out = tmp_path / "report.txt"
    assert run("validate", "-i", lens_msd, "-o", out) == 0
    text = out.read_text()
    assert "pair 1 2: Verified(1) claimed 1" in text
    assert "pair 3 1: Z/2 + Z/2" in text
    assert "all-verified: true" in text

    corrupted = lens_msd.read_text().replace("types 1 1", "types 0 1")
    bad = tmp_path / "bad.msd"
    bad.write_text(corrupted)
    out2 = tmp_path / "report2.txt"
    assert run("validate", "-i", bad, "-o", out2) == 1
    assert "RefutedByHomology" in out2.read_text()


def test_validate_reports_are_byte_stable(lens_msd, tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    assert run("validate", "-i", lens_msd, "-o", a) == 0
    assert run("validate", "-i", lens_msd, "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_is_thin_adapter(lens_msd, tmp_path):
    out = tmp_path / "report.txt"
    run("validate", "-i", lens_msd, "-o", out)
    report = out.read_text()
    library = validate(parse_diagram(lens_msd.read_text()))
    for (i, j), claimed, verdict in library.entries:
        assert f"pair {i} {j}: {verdict.describe()} claimed {claimed}" in report


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "broken.msd"
    bad.write_text("MSD 1\ngenus two\n")
    assert run("validate", "-i", bad, "-o", tmp_path / "r.txt") == 2
    err = capsys.readouterr().err
    assert "line 2" in err


def test_pi1_and_homology_reports(lens_msd, tmp_path):
    out = tmp_path / "pi1.txt"
    assert run("pi1", "-i", lens_msd, "-o", out) == 0
    text = out.read_text()
    assert "== simplified ==" in text
    assert "gens 1" in text
    assert "group: Z/2" in text

    out2 = tmp_path / "hom.txt"
    assert run("homology", "-i", lens_msd, "-o", out2) == 0
    text2 = out2.read_text()
    assert "== boundary-invariants ==" in text2
    assert "torsion: 2 2" in text2


def test_double_insert_merge_pipeline(lens_msd, tmp_path):
    d4 = tmp_path / "d4.msd"
    assert run("construct", "double", "-i", lens_msd, "-o", d4) == 0
    d5 = tmp_path / "d5.msd"
    assert run("construct", "insert", "-i", d4, "--position", 2, "--count", 1,
               "-o", d5) == 0
    parsed = parse_diagram(d5.read_text())
    assert parsed.claimed_types == (1, 2, 1, 1, 1)
    back = tmp_path / "back.msd"
    assert run("construct", "merge", "-i", d5, "--interface", 3, "-o", back) == 0
    assert parse_diagram(back.read_text()) == parse_diagram(d4.read_text())


def test_glue_cap_pipeline(lens_hd, tmp_path):
    closed = tmp_path / "closed.msd"
    assert run("construct", "glue", "-i", lens_hd, "--copies", 2,
               "--cap", "auto", "-o", closed) == 0
    d = parse_diagram(closed.read_text())
    assert d.closed and len(d.systems) == 6

    bounded = tmp_path / "chain.msd"
    assert run("construct", "glue", "-i", lens_hd, "--copies", 2,
               "--cap", "none", "-o", bounded) == 0
    d2 = parse_diagram(bounded.read_text())
    assert not d2.closed and len(d2.systems) == 5


def test_sum_mirror_stabilize(lens_hd, tmp_path):
    out = tmp_path / "sum.hd"
    assert run("construct", "sum", "-i", lens_hd, "--copies", 3, "-o", out) == 0
    from multisect.diagrams import parse_heegaard
    assert parse_heegaard(out.read_text()).genus == 3
    assert run("construct", "mirror", "-i", lens_hd, "-o", tmp_path / "m.hd") == 0
    assert run("construct", "stabilize", "-i", lens_hd, "--times", 2,
               "-o", tmp_path / "s.hd") == 0
    assert parse_heegaard((tmp_path / "s.hd").read_text()).genus == 3


def test_trisect_restrict(tmp_path):
    from multisect.diagrams import (CutSystem, MultisectionDiagram, SurfaceModel,
                                    standard_alpha_system)
    from multisect.words import Word, automorphism
    surf = SurfaceModel(1)
    alpha = standard_alpha_system(surf, "alpha")
    beta = CutSystem(surf, (Word(2, (2,)),), automorphism(2, {}, {}), "beta")
    gamma = CutSystem(surf, (Word(2, (1, 2)),),
                      automorphism(2, {1: (1, -2)}, {1: (1, 2)}), "gamma")
    tri = MultisectionDiagram(surf, (alpha, beta, gamma), True, (0, 0, 0))
    src = tmp_path / "tri.msd"
    src.write_text(format_diagram(tri))
    out = tmp_path / "restricted.msd"
    assert run("construct", "trisect-restrict", "-i", src, "--drop", 3,
               "-o", out) == 0
    d = parse_diagram(out.read_text())
    assert not d.closed
    assert d.claimed_types == (0, 0)


def test_distinguish_exit_codes(tmp_path, lens_msd):
    pres = tmp_path / "p.txt"
    pres.write_text("gens 2\ng1 g2 g1^-1 g2^-1\ng1 g1 g1 g1 g1\n"
                    "g2 g2 g2 g2 g2\n")
    out = tmp_path / "cert.txt"
    assert run("distinguish", "--presentation", pres,
               "--tuple1", "g1, g2", "--tuple2", "g1, g2 g2",
               "-o", out) == 0
    assert "verdict: distinct" in out.read_text()
    assert "replay-verified: true" in out.read_text()

    assert run("distinguish", "--presentation", pres,
               "--tuple1", "g1, g2", "--tuple2", "g1, g2",
               "-o", out) == 10

    assert run("distinguish", "--presentation", pres,
               "--tuple1", "g1, g2", "--tuple2", "g1, g2 g2",
               "--bound", 20, "-o", out) == 20


def test_distinguish_flip_and_diagram_pair(lens_msd, tmp_path):
    out = tmp_path / "cert.txt"
    assert run("distinguish", "--flip", "--diagram", lens_msd, "-o", out) == 10
    assert run("distinguish", "--diagram", lens_msd, "--diagram2", lens_msd,
               "--sector", 1, "-o", out) == 10
    assert run("distinguish", "--diagram", lens_msd, "--diagram2", lens_msd,
               "--sector", 1, "--sector2", 2, "-o", out) == 10


def test_distinguish_mismatched_diagrams(lens_msd, tmp_path, capsys):
    other = tmp_path / "l31.msd"
    other.write_text(format_diagram(bisection_from_heegaard(lens_diagram(3, 1))))
    assert run("distinguish", "--diagram", lens_msd, "--diagram2", other,
               "-o", tmp_path / "c.txt") == 2


def test_distinguish_reports_are_byte_stable(tmp_path):
    pres = tmp_path / "p.txt"
    pres.write_text("gens 2\ng1 g2 g1^-1 g2^-1\ng1 g1 g1 g1 g1\n"
                    "g2 g2 g2 g2 g2\n")
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    run("distinguish", "--presentation", pres, "--tuple1", "g1, g2",
        "--tuple2", "g1, g2 g2", "-o", a)
    run("distinguish", "--presentation", pres, "--tuple1", "g1, g2",
        "--tuple2", "g1, g2 g2", "-o", b)
    assert a.read_bytes() == b.read_bytes()


def test_render(lens_msd, tmp_path):
    svg = tmp_path / "out.svg"
    assert run("render", "-i", lens_msd, "--svg", svg) == 0
    text = svg.read_text()
    assert text.startswith("<svg")
    assert text.count("<polygon") == 6  # three systems, two curves each
    svg2 = tmp_path / "out2.svg"
    run("render", "-i", lens_msd, "--svg", svg2)
    assert svg.read_bytes() == svg2.read_bytes()


def test_render_genus_zero(tmp_path):
    from multisect.diagrams import CutSystem, MultisectionDiagram, SurfaceModel
    from multisect.words import identity_automorphism
    surf = SurfaceModel(0)
    mk = lambda label: CutSystem(surf, (), identity_automorphism(0), label)
    d = MultisectionDiagram(surf, (mk("a"), mk("b"), mk("c")), True, (0, 0, 0))
    src = tmp_path / "empty.msd"
    src.write_text(format_diagram(d))
    svg = tmp_path / "empty.svg"
    assert run("render", "-i", src, "--svg", svg) == 0
    assert "<circle" in svg.read_text()
