import io as _io
import subprocess
import sys

import pytest

from beliefcore import io
from beliefcore.cli import ALGORITHMS, run
from beliefcore.fixtures import fixture
from beliefcore.random_nets import random_network


def call(*argv):
    out, err = _io.StringIO(), _io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_query_polytree():
    code, out, _ = call("query", "fix-chain", "--evidence", "B=t", "--algorithm", "polytree")
    assert code == 0
    assert "A: 0.774193548387 0.225806451613" in out.splitlines()


def test_query_impossible():
    code, out, err = call("query", "fix-zero", "--evidence", "A=t,B=f", "--algorithm", "clustering-jensen")
    assert code == 3 and "impossible evidence" in err and out == ""


def test_solve():
    code, out, _ = call("solve", "fix-id")
    assert code == 0 and out.splitlines() == ["D: take", "EU: 76"]
    code, out, _ = call("solve", "fix-id-info")
    assert out.splitlines()[-1] == "EU: 88"


def test_exact_algorithms_agree(tmp_path):
    path = tmp_path / "net.bn"
    io.save_file(random_network(8, max_parents=3, states_range=(2, 3), seed=21), path)
    outputs = {}
    for alg in ALGORITHMS:
        if alg in ("gibbs", "polytree"):
            continue
        code, out, _ = call("query", str(path), "--evidence", "N7=s1", "--algorithm", alg)
        assert code == 0, alg
        outputs[alg] = [[round(float(x), 9) for x in line.split()[1:]] for line in out.splitlines()]
    first = outputs["oracle"]
    assert all(v == first for v in outputs.values())


def test_target_and_stats():
    code, out, _ = call("query", "fix-diamond", "--evidence", "D=t", "--target", "A", "--algorithm", "reduction")
    assert code == 0 and out.splitlines() == ["A: 0.780901856764 0.219098143236"]
    code, out, _ = call("query", "fix-diamond", "--algorithm", "conditioning-weighted", "--stats")
    assert "total=2 skipped=0 evaluated=2" in out


def test_determinism():
    args = ("query", "fix-diamond", "--evidence", "D=f", "--algorithm", "gibbs", "--sweeps", "500", "--seed", "2")
    assert call(*args) == call(*args)


def test_exit_codes(tmp_path):
    assert call("query", "no-such-thing")[0] == 1
    assert call("query", "fix-chain", "--evidence", "B")[0] == 1
    assert call("query", "fix-chain", "--evidence", "B=x")[0] == 1
    assert call("frobnicate")[0] == 1
    assert call("query", "fix-diamond", "--algorithm", "polytree")[0] == 1
    bad = tmp_path / "bad.bn"
    bad.write_text(io.save(fixture("FIX-CHAIN")).replace("0.3 0.7", "0.3 0.8"))
    assert call("validate", str(bad))[0] == 2
    assert call("query", str(bad))[0] == 2
    garbled = tmp_path / "garbled.bn"
    garbled.write_text("%beliefcore 1\nbogus line\n")
    assert call("describe", str(garbled))[0] == 2
    big = tmp_path / "big.bn"
    io.save_file(random_network(24, max_parents=0, states_range=(3, 3), seed=1), big)
    assert call("query", str(big), "--algorithm", "oracle")[0] == 4


def test_describe_validate_compile_estimate():
    code, out, _ = call("describe", "fix-chain")
    assert code == 0 and "A=t: 0.8 0.2" in out
    code, out, _ = call("describe", "fix-id", "--node", "V")
    assert "W=sun,D=leave: 100" in out
    assert call("validate", "fix-diamond")[0] == 0
    code, out, _ = call("compile", "fix-diamond")
    assert "U0: A B C  S=8 N=1 parent=-" in out and "sepset U0-U1: B C" in out
    code, out, _ = call("estimate", "fix-diamond", "--evidence", "D=t")
    assert out.splitlines() == ["init_estimate: 64", "update_estimate: 88", "evidence_declaration_cost: 8"]


def test_gen_transform(tmp_path):
    net, out_path = tmp_path / "g.bn", tmp_path / "t.bn"
    assert call("gen", "--nodes", "7", "--states", "2-3", "--seed", "5", "--out", str(net))[0] == 0
    assert io.load_file(net) is not None
    assert call("transform", str(net), "--absorb", "N0", "--out", str(out_path))[0] == 0
    assert "N0" not in io.load_file(out_path).nodes
    assert call("transform", "fix-chain", "--reverse-arc", "A", "B", "--out", str(out_path))[0] == 0
    assert io.load_file(out_path)["A"].parents == ("B",)
    assert call("transform", "fix-diamond", "--remove-barren", "--keep", "A", "--out", str(out_path))[0] == 0
    assert list(io.load_file(out_path).nodes) == ["A"]
    assert call("transform", "fix-chain", "--reduce-det", "B", "--out", str(out_path))[0] == 1


def test_bench(tmp_path):
    csv_path = tmp_path / "bench.csv"
    code, out, _ = call("bench", "--gen-count", "4", "--seed", "1", "--repeats", "1", "--out", str(csv_path))
    assert code == 0 and "pearson" in out
    assert csv_path.read_text().splitlines()[0].startswith("net_id,nodes,max_clique_states")


@pytest.mark.parametrize("entry", [["-m", "beliefcore"]])
def test_module_entry_point(entry):
    proc = subprocess.run([sys.executable, *entry, "solve", "fix-id"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[-1] == "EU: 76"
