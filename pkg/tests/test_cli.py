import io
import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from polyrecur.cli import run
from polyrecur.combinat import read_set

FIXTURES = Path(__file__).parent / "fixtures"

# fixture config -> command line (seeded where the command draws random sets)
GOLDEN_RUNS = {
    "nilseq_z4": ["nilseq-verify"],
    "nilseq_torus": ["nilseq-verify"],
    "nilseq_corrupt": ["nilseq-verify"],
    "average_z6": ["average"],
    "gap_torus": ["gap"],
    "khintchine_z7": ["khintchine"],
    "count_bernoulli": ["count", "--seed", "0xF17A"],
    "scan_bernoulli": ["scan", "--seed", "0xF17A"],
    "tightness_champernowne": ["tightness"],
}


def cli(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def golden_args(name):
    return [*GOLDEN_RUNS[name], "--config", str(FIXTURES / f"{name}.json")]


def test_indep():
    code, out = cli("indep", "{n,n^2}")
    assert code == 0 and out.splitlines()[-1] == "independent {[0,1];[0,1,2]}"
    code, out = cli("indep", "{n,2n}")
    assert code == 0 and out.splitlines()[-1].endswith("witness=(2,-1)")
    assert cli("indep", "{n,")[0] == 2
    assert cli("indep")[0] == 2


def test_usage_errors(tmp_path):
    assert cli("frobnicate")[0] == 2
    assert cli("count", "--config", str(FIXTURES / "count_bernoulli.json"))[0] == 2  # no --seed
    assert cli("normal-gen", "--N", "100", "--source", "seeded-coin", "--out", str(tmp_path / "w.txt"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli("average", "--config", str(bad))[0] == 2
    assert cli("average", "--config", str(FIXTURES / "nilseq_z4.json"))[0] == 2  # no system


def test_nilseq_exit_codes():
    code, out = cli(*golden_args("nilseq_z4"))
    assert code == 0 and out.rstrip().endswith("# PASS")
    code, out = cli(*golden_args("nilseq_corrupt"))
    assert code == 1 and "FAIL" in out.splitlines()[-1]


def test_header_and_out_file(tmp_path):
    out = tmp_path / "k.csv"
    code, stdout = cli(*golden_args("khintchine_z7"), "--out", str(out))
    text = out.read_text()
    assert code == 0
    first = text.splitlines()[0]
    assert first.startswith("# run-config: ")
    assert json.loads(first[len("# run-config: "):])["command"] == "khintchine"
    assert stdout.strip() == text.rstrip().splitlines()[-1][2:]


def test_module_examples_through_cli():
    code, out = cli(*golden_args("khintchine_z7"))
    rows = [ln.split(",") for ln in out.splitlines()[2:-1]]
    assert rows[6] == ["7", "3/7", "1"]  # n = 7: every shift is 0 mod 7
    code, out = cli(*golden_args("count_bernoulli"))
    n, _, count, density = out.splitlines()[2].split(",")
    assert n == "0" and Fraction(density) * 100000 == int(count)


def test_normal_gen(tmp_path):
    path = tmp_path / "coin.txt"
    assert cli("normal-gen", "--N", "5000", "--source", "seeded-coin", "--seed", "7", "--out", str(path))[0] == 0
    L = read_set(path)
    assert L.N == 5000 and abs(float(L.density) - 0.5) < 3 / 5000**0.5
    assert path.read_text().splitlines()[1].startswith("# run-config: ")
    path2 = tmp_path / "coin2.txt"
    cli("normal-gen", "--N", "5000", "--source", "seeded-coin", "--seed", "7", "--out", str(path2))
    assert path.read_bytes() == path2.read_bytes()
    champ = tmp_path / "champ.txt"
    assert cli("normal-gen", "--N", "12", "--format", "list", "--out", str(champ))[0] == 0
    assert read_set(champ).elements() == [1, 2, 4, 5, 6, 9, 11, 12]


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden(name):
    code, out = cli(*golden_args(name))
    assert out == (FIXTURES / "golden" / f"{name}.csv").read_text()
    assert code == (1 if name == "nilseq_corrupt" else 0)


@pytest.mark.parametrize("name", ["nilseq_torus", "count_bernoulli", "gap_torus"])
def test_golden_byte_identical_across_processes(name):
    outs = [
        subprocess.run([sys.executable, "-m", "polyrecur", *golden_args(name)], capture_output=True).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1] == (FIXTURES / "golden" / f"{name}.csv").read_bytes()
