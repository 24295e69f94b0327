import io
import subprocess
import sys

import pytest

from cases import VERDICT_TABLE, case_id
from qletf import corpus
from qletf.cli import run


def qletf(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def gen_nd(tmp_path):
    p = tmp_path / "gen.nd"
    p.write_text(corpus.text("generalization"))
    return p


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def split_countermodel(text):
    """Pull the structure and choices blocks out of a refute report."""
    lines = text.splitlines()
    start = next(i for i, l in enumerate(lines) if l.startswith("(structure"))
    stop = next(i for i, l in enumerate(lines) if l.startswith("(choices"))
    return "\n".join(lines[start:stop]), lines[stop]


def test_check_accepts_generalization(gen_nd):
    code, out, _ = qletf("check", "--proof", str(gen_nd), "--profile", "qletf")
    assert code == 0 and out.splitlines()[0] == "accepted"


def test_check_rejects_under_qfde_prime(gen_nd):
    code, out, _ = qletf("check", "--proof", str(gen_nd), "--profile", "qfde-prime")
    assert code == 1 and out.startswith("rejected")
    assert "forall-i" in out


def test_check_porcelain(gen_nd):
    code, out, _ = qletf("check", "--proof", str(gen_nd), "--porcelain")
    assert code == 0 and out.splitlines()[0] == "verdict:accepted"
    assert all("\t" in l for l in out.splitlines()[1:])


def test_check_with_signature(tmp_path, gen_nd):
    sig = write(tmp_path, "s.sig", "(signature (constants) (predicates))")
    assert qletf("check", "--proof", str(gen_nd), "--sig", sig)[0] == 0
    bad = write(tmp_path, "p.nd", "(premise (P a))")
    code, out, _ = qletf("check", "--proof", bad, "--sig", sig)
    assert code == 2


def test_parse_error_names_file_and_line(tmp_path):
    p = write(tmp_path, "broken.nd", "(infer and-i (and (P a) (Q))\n  (premise (P a))\n  (premise (P ?x)))")
    code, out, err = qletf("check", "--proof", p)
    assert code == 2 and out == ""
    assert f"{p}:3:" in err and "unbound" in err


def test_missing_file_is_usage_error():
    code, _, err = qletf("eval", "--structure", "/nonexistent.str", "--formula", "(P a)")
    assert code == 2 and "/nonexistent.str" in err


def test_bad_flags_are_usage_errors():
    assert qletf("frobnicate")[0] == 2
    assert qletf("refute")[0] == 2
    assert qletf("refute", "--conclusion", "(P c)", "--max-domain", "0")[0] == 2
    assert qletf("check", "--proof", "x", "--profile", "nope")[0] == 2


def test_eval_hesperus(fixtures):
    hes = str(fixtures / "hesperus.str")
    assert qletf("eval", "--structure", hes, "--formula", "(bull (= a b))", "--all")[1] == "forced 1\n"
    for c in "abc":
        code, out, _ = qletf("eval", "--structure", hes, "--formula", f"(circ (P {c}))", "--all")
        assert code == 0 and sorted(l.split()[0] for l in out.splitlines()) == ["0", "1"]


def test_eval_with_and_without_choices(tmp_path, fixtures):
    hes = str(fixtures / "hesperus.str")
    assert qletf("eval", "--structure", hes, "--formula", "(not (P a))")[1] == "1\n"
    code, _, err = qletf("eval", "--structure", hes, "--formula", "(circ (P a))")
    assert code == 2 and "--choices" in err
    ch = write(tmp_path, "c.ch", "(choices (circ (P #abar) 1))")
    assert qletf("eval", "--structure", hes, "--formula", "(circ (P a))", "--choices", ch)[1] == "1\n"
    bad = write(tmp_path, "bad.ch", "(choices (circ (P #cbar) 1) (circ (= #abar #bbar) 1))")
    code, _, err = qletf("eval", "--structure", hes, "--formula", "(bull (= a b))", "--choices", bad)
    assert code == 2 and "classicality" in err


def test_valuations_lists_then_counts(tmp_path, fixtures):
    hes = str(fixtures / "hesperus.str")
    sents = write(tmp_path, "s.lst", "(circ (P a))\n(circ (P b))\n")
    code, out, _ = qletf("valuations", "--structure", hes, "--sentences", sents)
    lines = out.splitlines()
    assert code == 0 and lines[-1] == "4 valuation(s)" and len(lines) == 5
    out = qletf("valuations", "--structure", hes, "--sentences", sents, "--limit", "2")[1]
    assert out.splitlines()[-1] == "2 valuation(s) (limit reached)"


def test_refute_example(fixtures):
    code, out, _ = qletf("refute", "--profile", "qfde", "--premises", str(fixtures / "pc_negpc.lst"),
                         "--conclusion", "(Q c)", "--max-domain", "1")
    assert code == 1 and out.startswith("countermodel at domain size 1")


def test_refute_valid_so_far():
    code, out, _ = qletf("refute", "--profile", "qlp", "--conclusion", "(or (P c) (not (P c)))")
    assert code == 0 and out == "no countermodel up to 2\n"


def test_refute_rejects_circ_in_qfde():
    code, _, err = qletf("refute", "--profile", "qfde", "--conclusion", "(circ (P c))")
    assert code == 2 and "not available" in err


def replay(tmp_path, premises, conclusion, out):
    st, ch = split_countermodel(out)
    s = write(tmp_path, "cm.str", st)
    c = write(tmp_path, "cm.ch", ch)
    for p in premises:
        assert qletf("eval", "--structure", s, "--choices", c, "--formula", p)[1] == "1\n"
    assert qletf("eval", "--structure", s, "--choices", c, "--formula", conclusion)[1] == "0\n"


@pytest.mark.parametrize("case", VERDICT_TABLE, ids=case_id)
def test_refute_round_trip(tmp_path, case):
    profile, premises, conclusion, expected, n = case
    prem = write(tmp_path, "prem.lst", "\n".join(premises))
    code, out, err = qletf("refute", "--profile", profile, "--premises", prem,
                           "--conclusion", conclusion, "--max-domain", str(n))
    assert err == ""
    if expected == "countermodel":
        assert code == 1
        replay(tmp_path, premises, conclusion, out)
    else:
        assert code == 0 and out == f"no countermodel up to {n}\n"


def test_module_entry_point(fixtures):
    proc = subprocess.run(
        [sys.executable, "-m", "qletf", "eval", "--structure", str(fixtures / "hesperus.str"),
         "--formula", "(bull (= a b))", "--all"],
        capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "forced 1\n"
