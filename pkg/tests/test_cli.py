import subprocess
import sys

import pytest

from myopic.adversary import reference_certificate
from myopic.cli import main, make_policy
from myopic.core import Digraph, format_edge_list


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return _run


@pytest.fixture
def cert_file(tmp_path):
    def _make(variant):
        path = tmp_path / f"{variant}.csv"
        reference_certificate(variant).to_csv(path)
        return path

    return _make


@pytest.fixture
def cycle_file(tmp_path):
    path = tmp_path / "cycle.txt"
    path.write_text(format_edge_list(Digraph.cycle(6)))
    return path


class TestLP:
    def test_solve_writes_certificate(self, run, tmp_path):
        cert = tmp_path / "c.csv"
        code, out, _ = run("lp", "solve", "--variant", "fixed-q2", "--cert", cert)
        assert code == 0 and out.strip() == "c=2.3333 bound=0.4286"
        code, out, _ = run("verify", "--cert", cert)
        assert code == 0 and out.strip().endswith("result=pass")

    def test_export(self, run, tmp_path):
        model = tmp_path / "m.lp"
        code, out, _ = run("lp", "export", "--variant", "adaptive-q2", "--model", model)
        assert code == 0 and "C2-star=420" in out
        assert model.read_text().startswith("\\")

    def test_bad_config(self, run):
        code, _, err = run("lp", "solve", "--n", "8", "--k", "9")
        assert code == 2 and "k must be" in err


class TestVerify:
    def test_fail_reports_witness(self, run, cert_file):
        code, out, _ = run("verify", "--cert", cert_file("fixed-q2"), "--variant", "adaptive-q2")
        assert code == 1
        assert "result=fail" in out and "first failure: cond2_star witness=" in out

    def test_missing_file(self, run, tmp_path):
        code, _, err = run("verify", "--cert", tmp_path / "nope.csv")
        assert code == 2 and err.startswith("error:")

    def test_garbage(self, run, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("hello\n")
        assert run("verify", "--cert", bad)[0] == 2


class TestGame:
    def test_single_policy(self, run, cert_file):
        code, out, _ = run("game", "--cert", cert_file("fixed-q2"), "--policy", "double-greedy", "-v")
        assert code == 0 and out.startswith("alg=1.0000 opt=2.3333 ratio=0.4286")
        assert "# model: QTYPE2" in out

    def test_adaptive_double_greedy(self, run, cert_file):
        code, out, _ = run("game", "--cert", cert_file("adaptive-q2"), "--template", "adaptive")
        ratio = float(out.split("ratio=")[1].split()[0])
        assert code == 0 and ratio <= 0.432

    def test_zoo(self, run, cert_file):
        path = cert_file("fixed-q3")
        code, out, _ = run("game", "--cert", path, "--policy", "zoo", "--zoo-size", 25, "--qtype", 3, "--jobs", 2)
        assert code == 0 and "policies=25" in out and out.strip().endswith("result=pass")

    def test_six_cycle(self, run):
        code, out, _ = run("game", "--six-cycle", "--policy", "zoo", "--zoo-size", 20, "--qtype", 3)
        assert code == 0 and "bound=0.6667" in out

    def test_uncovered_template(self, run, cert_file):
        assert run("game", "--cert", cert_file("fixed-q2"), "--template", "adaptive")[0] == 2

    def test_needs_source(self, run):
        assert run("game")[0] == 2

    def test_unknown_policy(self, run):
        assert run("game", "--six-cycle", "--policy", "psychic")[0] == 2

    def test_deterministic(self, run, cert_file):
        args = ("game", "--cert", cert_file("adaptive-q2"), "--template", "adaptive", "--policy", "random:4", "-v")
        assert run(*args)[1] == run(*args)[1]


class TestDicut:
    def test_doubling(self, run, cycle_file):
        code, out, _ = run("dicut", "--graph", cycle_file, "--order", "1 2 3 4 5 6")
        assert code == 0 and "opt=3.0000" in out

    @pytest.mark.parametrize("alg", ["double-greedy", "randomized-double-greedy", "random-cut"])
    def test_other_algorithms(self, run, cycle_file, alg):
        code, out, _ = run("dicut", "--graph", cycle_file, "--algorithm", alg, "--shuffle", "--seed", 3)
        assert code == 0 and out.startswith(f"algorithm={alg}")

    def test_bad_order(self, run, cycle_file):
        assert run("dicut", "--graph", cycle_file, "--order", "1 1 2 3 4 5")[0] == 2
        assert run("dicut", "--graph", cycle_file, "--order", "one")[0] == 2


class TestEquiv:
    def test_random(self, run):
        code, out, _ = run("equiv", "--random", 50, "--seed", 2)
        assert code == 0 and out.strip() == "agreement=50/50"

    def test_graph(self, run, cycle_file):
        assert run("equiv", "--graph", cycle_file)[1].strip() == "agreement=1/1"

    def test_needs_input(self, run):
        assert run("equiv")[0] == 2


def test_usage_exit_code(run):
    assert run()[0] == 2
    assert run("lp", "dance")[0] == 2


def test_help(run):
    code, out, _ = run("--help")
    assert code == 0 and "verify" in out


@pytest.mark.parametrize(
    "name,attr",
    [("threshold:0.5", "theta"), ("randomized-double-greedy:3", "seed"), ("random", "seed")],
)
def test_make_policy(name, attr):
    assert hasattr(make_policy(name), attr)


def test_make_policy_bad_arg():
    from myopic.cli import UsageError

    with pytest.raises(UsageError):
        make_policy("threshold:abc")


def test_console_script(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "myopic.cli", "equiv", "--random", "3"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "agreement=3/3"
