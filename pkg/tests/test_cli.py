import subprocess
import sys


from jetschemes.cli import main
from jetschemes.corpus import builtin
from jetschemes.fileformats import format_certificate, format_frame, parse_variety
from jetschemes.frames import search_frame
from jetschemes.morphisms import identity_certificate


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute(capsys, tmp_path):
    out_file = tmp_path / "x2.var"
    code, out, _ = run(capsys, "compute", "--variety", "@danielewski-x", "--order", "2", "--out", str(out_file))
    assert code == 0
    assert "variables: 9" in out and "generators: 3" in out
    J = parse_variety(out_file.read_text(), "x2")
    assert len(J.variables) == 9 and str(J.variables[3]) == "x#1"
    code, out, _ = run(capsys, "compute", "--variety", "@affine-1", "--order", "5", "--porcelain")
    assert code == 0 and "info.variables=6" in out and "info.generators=0" in out


def test_malformed_file_is_an_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.var"
    bad.write_text("ring x y\nideal\nx +* y\nend\n")
    code, _, err = run(capsys, "compute", "--variety", str(bad), "--order", "1")
    assert code == 2 and "bad.var:3" in err
    code, _, err = run(capsys, "compute", "--variety", str(tmp_path / "missing.var"), "--order", "1")
    assert code == 2
    code, _, _ = run(capsys, "compute", "--variety", "@nowhere", "--order", "1")
    assert code == 2
    code, _, _ = run(capsys, "compute", "--variety", "@parabola", "--order", "-1")
    assert code == 2


def test_grading_and_fiber(capsys):
    assert run(capsys, "grading", "--variety", "@node", "--order", "3")[0] == 0
    code, out, _ = run(capsys, "fiber", "--variety", "@danielewski-x", "--order", "3")
    assert code == 0 and "OVERALL: PASS" in out
    assert run(capsys, "fiber", "--variety", "@danielewski-x", "--order", "0")[0] == 2


def test_smooth(capsys, tmp_path):
    code, out, _ = run(capsys, "smooth", "--variety", "@cusp")
    assert code == 1 and "FAIL" in out
    assert run(capsys, "smooth", "--variety", "@danielewski-y")[0] == 0
    twisted = tmp_path / "twisted.var"
    twisted.write_text("ring x y z\nideal\ny - x^2\nz - x^3\nend\n")
    assert run(capsys, "smooth", "--variety", str(twisted))[0] == 2
    assert run(capsys, "smooth", "--variety", str(twisted), "--codim", "2")[0] == 0


def test_frame_check(capsys, tmp_path):
    V = builtin("parabola")
    good = tmp_path / "good.frame"
    good.write_text(format_frame(search_frame(V, 1)))
    assert run(capsys, "frame-check", "--variety", "@parabola", "--frame", str(good))[0] == 0
    bad = tmp_path / "bad.frame"
    bad.write_text("frame n=1\nA:\n1, 0\nB:\n1\n2*x\nC:\n0\n0\nend\n")
    assert run(capsys, "frame-check", "--variety", "@parabola", "--frame", str(bad))[0] == 1
    assert run(capsys, "frame-check", "--variety", "@parabola")[0] == 2


def test_search_frame_and_trivialize(capsys, tmp_path):
    frame = tmp_path / "x.frame"
    assert run(capsys, "search-frame", "--variety", "@danielewski-x", "--out", str(frame))[0] == 0
    cert = tmp_path / "x2.cert"
    code, out, _ = run(capsys, "trivialize", "--variety", "@danielewski-x", "--frame", str(frame),
                       "--order", "2", "--out", str(cert))
    assert code == 0 and cert.read_text().startswith("forward")
    code, out, _ = run(capsys, "trivialize", "--variety", "@cusp", "--order", "1")
    assert code == 1 and "CHECK smooth cusp: FAIL" in out


def test_iso_verify_identity(capsys, tmp_path):
    cert = tmp_path / "id.cert"
    cert.write_text(format_certificate(identity_certificate(builtin("circle"))))
    code, out, _ = run(capsys, "iso-verify", "--variety", "@circle", "--target", "@circle", "--cert", str(cert))
    assert code == 0 and "OVERALL: PASS" in out
    broken = tmp_path / "broken.cert"
    broken.write_text(cert.read_text().replace("y -> y", "y -> -y", 1).replace("x -> x", "x -> x + 1", 1))
    assert run(capsys, "iso-verify", "--variety", "@circle", "--target", "@circle", "--cert", str(broken))[0] == 1


def test_danielewski_command(capsys, tmp_path):
    code, out, _ = run(capsys, "danielewski", "--order", "1")
    assert code == 0 and "skipped: no cancellation certificate" in out
    assert run(capsys, "danielewski", "--order", "0")[0] == 2
    cert = tmp_path / "xy1.cert"
    code, out, _ = run(capsys, "danielewski", "--order", "1", "--cert", "@cancellation", "--out", str(cert))
    assert code == 0 and "SKIP" not in out
    code, out, _ = run(capsys, "iso-verify", "--variety", "@danielewski-x", "--target", "@danielewski-y",
                       "--order", "1", "--cert", str(cert))
    assert code == 0
    code, out, _ = run(capsys, "descend", "--variety", "@danielewski-x", "--target", "@danielewski-y",
                       "--order", "1", "--cert", str(cert))
    assert code == 1 and "not weight-preserving" in out


def test_descend_accepts_identity(capsys, tmp_path):
    from jetschemes.jets import jet_equations

    cert = tmp_path / "id.cert"
    cert.write_text(format_certificate(identity_certificate(jet_equations(builtin("parabola"), 2).presentation)))
    base = tmp_path / "base.cert"
    code, out, _ = run(capsys, "descend", "--variety", "@parabola", "--target", "@parabola", "--order", "2",
                       "--cert", str(cert), "--out", str(base))
    assert code == 0 and "x -> x" in base.read_text()


def test_porcelain_output_is_deterministic(capsys):
    a = run(capsys, "danielewski", "--order", "1", "--porcelain")[1]
    b = run(capsys, "danielewski", "--order", "1", "--porcelain")[1]
    assert a == b and a.strip().endswith("overall=pass")


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jetschemes.cli", "smooth", "--variety", "@cusp"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    proc = subprocess.run([sys.executable, "-m", "jetschemes.cli", "bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
