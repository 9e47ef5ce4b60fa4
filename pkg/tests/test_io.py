import random
from fractions import Fraction

import pytest

from blinfty import fixtures
from blinfty import io as bio
from blinfty.cli import main as cli_main
from blinfty.errors import ParseError
from blinfty.structures import Bounds, OperationTable
from blinfty.words import (Element, EWord, Generator, GradedSpace, UNIT_WORD,
                           Word, enumerate_basis, normalize_word)

import io as pyio
from pathlib import Path


def run_cli(tmp_path, *argv):
    buf = pyio.StringIO()
    code = cli_main(list(argv), stream=buf)
    return code, buf.getvalue()


def report_value(text, key):
    for line in text.splitlines():
        if line.startswith(key + ":"):
            return line.split(":", 1)[1].strip()
    return None


PLANAR_DOC = """\
# the simplest finite-torsion structure
format blinfty 1
gen q1 parity 1 action 1
gen q2 parity 0 action 1
table structure p parity 1
op 2 0 : q1·q2 -> 1 1
bounds max_letters 2 max_action 2 action_drop
"""


def test_parse_planar_document():
    doc = bio.parse(PLANAR_DOC)
    assert [g.name for g in doc.space.generators] == ["q1", "q2"]
    alg = bio.algebra_from_document(doc)
    assert alg.table.query(2, Word((0, 1))) == Element.monomial(UNIT_WORD)
    assert doc.bounds.max_letters == 2
    assert doc.bounds.action_drop


def test_round_trip_byte_identity_on_corpus():
    for name, text in fixtures.document_corpus().items():
        doc = bio.parse(text)
        assert bio.serialize(doc) == text, name


def test_parse_serialize_is_canonicalization():
    doc = bio.parse(PLANAR_DOC)
    canon = bio.serialize(doc)
    assert bio.serialize(bio.parse(canon)) == canon
    assert "# the simplest" not in canon


def test_parse_errors_name_the_line():
    bad = PLANAR_DOC.replace("op 2 0 : q1·q2 -> 1 1",
                             "op 2 0 : q1·qX -> 1 1")
    with pytest.raises(ParseError) as exc:
        bio.parse(bad)
    assert exc.value.line_no == 6


def test_parity_violation_rejected():
    bad = PLANAR_DOC.replace("op 2 0 : q1·q2 -> 1 1",
                             "op 1 0 : q2 -> 1 1")
    with pytest.raises(ParseError):
        bio.parse(bad)


def test_duplicate_cell_rejected():
    bad = PLANAR_DOC.replace(
        "op 2 0 : q1·q2 -> 1 1",
        "op 2 0 : q1·q2 -> 1 1\nop 2 0 : q1·q2 -> 2 1")
    with pytest.raises(ParseError):
        bio.parse(bad)


def test_malformed_rational_rejected():
    bad = PLANAR_DOC.replace("-> 1 1", "-> 1/0 1")
    with pytest.raises(ParseError):
        bio.parse(bad)


def test_noncanonical_word_rejected():
    bad = PLANAR_DOC.replace("q1·q2", "q2·q1")
    with pytest.raises(ParseError):
        bio.parse(bad)


def random_document(rng):
    n = rng.randint(1, 4)
    gens = []
    for i in range(n):
        kw = {}
        if rng.random() < 0.4:
            par = rng.randrange(2)
            kw["zgrade"] = 2 * rng.randint(-2, 2) + par
            gens.append(Generator("g%d" % i, par, **kw))
        else:
            gens.append(Generator("g%d" % i, rng.randrange(2),
                                  action=(Fraction(rng.randint(1, 5),
                                                   rng.randint(1, 3))
                                          if rng.random() < 0.5 else None)))
    sp = GradedSpace(gens)
    is_hbar = rng.random() < 0.3
    kind = "ibl" if is_hbar else rng.choice(
        ["structure", "morphism", "augmentation", "pointed", "umodule"])
    parity = 1 if kind in ("structure", "ibl") else 0
    ops = []
    seen = set()
    for _ in range(rng.randint(0, 6)):
        k = rng.randint(1, 3)
        letters = tuple(sorted(rng.randrange(n) for _ in range(k)))
        w_in, sgn = normalize_word(sp, letters)
        if sgn != 1:
            continue
        if kind == "augmentation":
            l = 0
        elif kind == "umodule":
            if k != 1:
                continue
            l = 1
        else:
            l = rng.randint(0, 3)
        g = rng.randint(0, 2) if is_hbar else 0
        if (k, l, g, w_in) in seen:
            continue
        in_par = sp.word_parity(w_in.letters)
        elem = Element()
        for _ in range(rng.randint(1, 2)):
            out = tuple(sorted(rng.randrange(n) for _ in range(l)))
            w_out, osgn = normalize_word(sp, out)
            if osgn != 1:
                continue
            if sp.word_parity(w_out.letters) != (in_par + parity) % 2:
                continue
            elem = elem + Element.monomial(
                w_out, Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
        if not elem:
            continue
        seen.add((k, l, g, w_in))
        ops.append((k, l, g, w_in, elem))
    blocks = [bio.TableBlock(kind, "t0", parity, is_hbar, ops)]
    chains = []
    if rng.random() < 0.3 and n >= 1:
        ew = EWord((Word((0,)),), hbar=rng.randrange(2) if is_hbar else 0)
        from blinfty.words import EElement
        chains.append(bio.ChainBlock(
            "c0", EElement.monomial(ew, Fraction(rng.randint(1, 4)))))
    bounds = None
    if rng.random() < 0.6:
        bounds = Bounds(rng.randint(1, 5),
                        hbar_max=rng.randint(0, 3) if is_hbar else None)
    return bio.Document(sp, blocks, chains, bounds)


def test_random_documents_round_trip():
    rng = random.Random(2024)
    for _ in range(300):
        doc = random_document(rng)
        text = bio.serialize(doc)
        again = bio.serialize(bio.parse(text))
        assert again == text


# ---- CLI ---------------------------------------------------------------------

@pytest.fixture()
def corpus_dir(tmp_path):
    for name, text in fixtures.document_corpus().items():
        (tmp_path / ("%s.blf" % name)).write_text(text, encoding="utf-8")
    return tmp_path


def test_cli_verify_ok(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "verify",
                        str(corpus_dir / "planar-torsion-one.blf"))
    assert code == 0
    assert report_value(out, "verify") == "ok"


def test_cli_verify_failure_exit_one(tmp_path):
    bad = """\
format blinfty 1
gen x parity 0
gen y parity 1
gen z parity 0
table structure p parity 1
op 1 1 : x -> 1 y
op 1 1 : y -> 1 z
bounds max_letters 2
"""
    f = tmp_path / "bad.blf"
    f.write_text(bad, encoding="utf-8")
    code, out = run_cli(tmp_path, "verify", str(f))
    assert code == 1
    assert report_value(out, "verify") == "failed"
    assert report_value(out, "witness") == "(1,1) x"


def test_cli_parse_error_exit_two(tmp_path):
    f = tmp_path / "broken.blf"
    f.write_text("format blinfty 1\ngen q parity 7\n", encoding="utf-8")
    code, out = run_cli(tmp_path, "verify", str(f))
    assert code == 2
    assert "error" in out


def test_cli_torsion_planar(corpus_dir, tmp_path):
    cert = tmp_path / "cert.blf"
    code, out = run_cli(tmp_path, "torsion",
                        str(corpus_dir / "planar-torsion-one.blf"),
                        "--word-bound", "2", "--max-letters", "2",
                        "--certificate", str(cert))
    assert code == 0
    assert report_value(out, "torsion") == "exact 1"
    # round-trip re-verification of the emitted certificate
    merged = (corpus_dir / "planar-torsion-one.blf").read_text() \
        .replace("bounds", cert.read_text().splitlines()[-1] + "\nbounds", 1)
    f2 = tmp_path / "with-cert.blf"
    f2.write_text(merged, encoding="utf-8")
    code2, out2 = run_cli(tmp_path, "verify", str(f2))
    assert code2 == 0
    assert report_value(out2, "certificate-torsion-1") == "ok"


def test_cli_torsion_not_found(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "torsion", str(corpus_dir / "zero-mixed.blf"))
    assert code == 3
    assert report_value(out, "torsion") == "not-found-within-bounds"


def test_cli_order(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "order",
                        str(corpus_dir / "pointed-two.blf"),
                        "--aug", str(corpus_dir / "pointed-two.aug0.blf"),
                        "--pointed", str(corpus_dir / "pointed-two.pointed.blf"))
    assert code == 0
    assert report_value(out, "order") == "exact 2"


def test_cli_order_multi(corpus_dir, tmp_path):
    # two copies of the one-point functional: S1 and S2, empty pair table
    base = (corpus_dir / "pointed-one.pointed.blf").read_text()
    s2 = base.replace("table pointed S1", "table pointed S2")
    (tmp_path / "s2.blf").write_text(s2, encoding="utf-8")
    s12 = "\n".join(line for line in base.splitlines()
                    if not line.startswith("op")) \
        .replace("table pointed S1", "table pointed S12") + "\n"
    (tmp_path / "s12.blf").write_text(s12, encoding="utf-8")
    code, out = run_cli(tmp_path, "order-multi",
                        str(corpus_dir / "pointed-one.blf"),
                        "--aug", str(corpus_dir / "pointed-one.aug0.blf"),
                        "--pointed", str(corpus_dir / "pointed-one.pointed.blf"),
                        "--pointed", str(tmp_path / "s2.blf"),
                        "--pointed", str(tmp_path / "s12.blf"),
                        "--points", "2")
    assert code == 0
    assert report_value(out, "order-multi") == "exact 1"


def test_cli_sd(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "sd", str(corpus_dir / "sd-example.blf"),
                        "--aug", str(corpus_dir / "sd-example.aug0.blf"),
                        "--pointed", str(corpus_dir / "sd-example.pointed.blf"),
                        "--umap", str(corpus_dir / "sd-example.umap.blf"))
    assert code == 0
    assert report_value(out, "sd") == "exact 1"


def test_cli_planarity(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "planarity",
                        str(corpus_dir / "pointed-two.blf"),
                        "--aug", str(corpus_dir / "pointed-two.aug0.blf"),
                        "--pointed", str(corpus_dir / "pointed-two.pointed.blf"))
    assert code == 0
    assert report_value(out, "planarity") == "exact 2"


def test_cli_hierarchy_pt(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "hierarchy",
                        str(corpus_dir / "planar-torsion-one.blf"))
    assert code == 0
    assert report_value(out, "hierarchy") == "1^PT"


def test_cli_combine():
    code, out = run_cli(None, "combine", "2^SD", "3^SD")
    assert code == 0
    assert report_value(out, "combine") == "3^SD"
    code, out = run_cli(None, "combine", "1^PT", "3^SD")
    assert report_value(out, "combine") == "1^PT"


def test_cli_ibl_check(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "ibl-check",
                        str(corpus_dir / "ibl-planar.blf"))
    assert code == 0
    assert report_value(out, "ibl-check") == "ok"


def test_cli_ibl_torsion(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "ibl-torsion",
                        str(corpus_dir / "ibl-planar.blf"), "0", "1")
    assert code == 0
    assert report_value(out, "ibl-torsion") == "exact (0,1)_2"
    assert report_value(out, "flat-transport") == "ok"


def test_cli_subprocess_smoke(corpus_dir, tmp_path):
    import subprocess
    import sys
    import os
    env = dict(os.environ)
    env["PYTHONPATH"] = os.pathsep.join(
        [str(corpus_dir.parent), "src"] +
        env.get("PYTHONPATH", "").split(os.pathsep))
    proc = subprocess.run(
        [sys.executable, "-m", "blinfty", "torsion",
         str(corpus_dir / "planar-torsion-one.blf"),
         "--word-bound", "2", "--max-letters", "2"],
        capture_output=True, text=True, env=env,
        cwd=str(Path(__file__).resolve().parent.parent))
    assert proc.returncode == 0
    assert "torsion: exact 1" in proc.stdout



def test_cli_hierarchy_sd_zero(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "hierarchy",
                        str(corpus_dir / "pointed-one.blf"),
                        "--aug", str(corpus_dir / "pointed-one.aug0.blf"),
                        "--pointed", str(corpus_dir / "pointed-one.pointed.blf"),
                        "--umap", str(corpus_dir / "pointed-one.umap.blf"))
    assert code == 0
    assert report_value(out, "hierarchy") == "0^SD"


def test_cli_hierarchy_planarity_two(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "hierarchy",
                        str(corpus_dir / "pointed-two.blf"),
                        "--aug", str(corpus_dir / "pointed-two.aug0.blf"),
                        "--pointed", str(corpus_dir / "pointed-two.pointed.blf"))
    assert code == 0
    assert report_value(out, "hierarchy") == "2^Pl"


def test_cli_hierarchy_inconclusive_exit_three(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "hierarchy",
                        str(corpus_dir / "mixed-no-aug.blf"))
    assert code == 3
    assert report_value(out, "hierarchy") == "inconclusive"


def test_cli_verify_aug_and_pointed(corpus_dir, tmp_path):
    code, out = run_cli(tmp_path, "verify",
                        str(corpus_dir / "pointed-two.blf"),
                        "--aug", str(corpus_dir / "pointed-two.aug0.blf"),
                        "--pointed", str(corpus_dir / "pointed-two.pointed.blf"))
    assert code == 0
    assert report_value(out, "augmentation") == "ok"
    assert report_value(out, "pointed") == "ok"


def test_cli_verify_bad_augmentation(corpus_dir, tmp_path):
    # the zero functional family fails on the finite-torsion structure
    zero_aug_doc = """\
format blinfty 1
gen q1 parity 1 action 1
gen q2 parity 0 action 1
table augmentation eps parity 0
"""
    f = tmp_path / "zero-aug.blf"
    f.write_text(zero_aug_doc, encoding="utf-8")
    code, out = run_cli(tmp_path, "verify",
                        str(corpus_dir / "planar-torsion-one.blf"),
                        "--aug", str(f))
    assert code == 1
    assert report_value(out, "augmentation") == "failed"
