import pytest

from pgakit.cli import main


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_echo(capsys, write):
    code, out, _ = run(capsys, "parse", write("p", "+a;!;#0"))
    assert code == 0 and out.strip() == "+a; !; #0"


def test_parse_dialect_violation(capsys, write):
    code, _, err = run(capsys, "parse", "--dialect", "pgag", write("p", "#2; a"))
    assert code == 2 and "#2" in err


def test_parse_error_position(capsys, write):
    code, _, err = run(capsys, "parse", write("p", "a;"))
    assert code == 2 and "2" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "extract", str(tmp_path / "nope"))
    assert code == 2 and "nope" in err


def test_normalize(capsys, write):
    code, out, _ = run(capsys, "normalize", write("p", "a; (b; a)*"))
    assert code == 0 and out.strip() == "(a; b)*"
    _, out, _ = run(capsys, "normalize", write("q", "c; (a)*"))
    assert out.strip() == "c || (a)*"


def test_equal(capsys, write):
    x = write("x", "(a; #2)*")
    y = write("y", "a; #2; (a; #2)*")
    assert run(capsys, "equal", x, y)[0] == 0
    assert run(capsys, "equal", write("p", "!"), write("q", "#1; !"))[0] == 1


def test_extract(capsys, write):
    code, out, _ = run(capsys, "extract", write("p", "!"))
    assert code == 0 and out.strip() == "X0 = S"


def test_use_divergence(capsys, write):
    code, out, _ = run(capsys, "use", write("p", "(f.get)*"), "--focus", "f", "--service", "br:false")
    assert code == 0 and out.strip() == "X0 = D"


def test_use_unpaired_flags(capsys, write):
    assert run(capsys, "use", write("p", "!"), "--focus", "f")[0] == 2


def test_use_service_file(capsys, write):
    svc = write("svc", "states: on off\ninitial: on\nmethods: get\nget, on -> off, T\nget, off -> off, F\n")
    code, out, _ = run(capsys, "use", write("p", "(-s.get; !; a)*"), "--focus", "s", "--service", "@" + svc)
    assert code == 0
    assert out.strip() == "X0 = a ? X1 : X1\nX1 = S"


def test_compile_use_equiv_pipeline(capsys, write, tmp_path):
    spec = write("spec", "X1 = a ? X2 : X1\nX2 = b ? X1 : X3\nX3 = S\n")
    bank = str(tmp_path / "bank")
    code, program, _ = run(capsys, "compile-jumpfree", spec, "--bank-out", bank)
    assert code == 0 and "#" not in program.split("//")[0]
    assert "// st:1 br:false" in program
    prog = write("prog", program)
    code, wrapped, _ = run(capsys, "use", prog, "--bank", bank)
    assert code == 0
    assert run(capsys, "equiv", write("wrapped", wrapped), spec)[0] == 0
    # the compiled program can also serve as its own manifest
    code, wrapped2, _ = run(capsys, "use", prog, "--bank", prog)
    assert wrapped2 == wrapped


def test_equiv_negative(capsys, write):
    code, out, _ = run(capsys, "equiv", write("p", "a; !"), write("q", "b; !"))
    assert code == 1 and "depth 1" in out


def test_equiv_as_pgag(capsys, write):
    p = write("p", "(%1; a; ##1)*")
    q = write("q", "(a)*")
    assert run(capsys, "equiv", "--as-pgag", p, q)[0] == 0


def test_project_bounded_metrics(capsys, write):
    code, out, err = run(capsys, "project", "--max-label", "2", "--metrics", write("p", "(%1; a; ##1)*"))
    assert code == 0 and "max_jump 5" in err
    code, out, _ = run(capsys, "project", write("p", "(%1; a; ##1)*"))
    assert out.strip() == "(#1; a; #2)*"


def test_collapse(capsys, write):
    code, out, _ = run(capsys, "collapse", write("p", "#1; #2; a; b"))
    assert code == 0 and out.strip() == "#3; #2; a; b"


def test_simulate(capsys, write):
    code, out, _ = run(capsys, "simulate", write("p", "+a; !; #0"), "--replies", "T")
    assert code == 0 and out.strip() == "a -> T\nterminated"
    assert run(capsys, "simulate", write("p", "a"), "--replies", "X")[0] == 2


def test_reproduce_small(capsys, monkeypatch):
    monkeypatch.setenv("PGA_CASES", "60")
    code, out, _ = run(capsys, "reproduce", "--seed", "3")
    assert code == 0 and "7/7 criteria passed" in out
    _, again, _ = run(capsys, "reproduce", "--seed", "3")
    strip = lambda s: [l.split(":")[0] for l in s.splitlines()]
    assert strip(out) == strip(again)
