import json
import subprocess
import sys

import pytest

from hyperfinite import generators
from hyperfinite.bs_statistics import NeighborhoodDistribution, psi
from hyperfinite.cli import main
from hyperfinite.graph import format_edge_list, parse_edge_list
from hyperfinite.local_transfer import ComponentStats
from hyperfinite.partitioners import parse_cut, verify_partition


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


@pytest.fixture
def torus8(tmp_path):
    path = tmp_path / "t8.txt"
    path.write_text(format_edge_list(generators.torus(8)))
    return path


def test_gen_to_stdout_round_trips(capsys):
    code, out, _ = run(capsys, "gen", "torus", "--n", 5)
    assert code == 0
    assert parse_edge_list(out) == generators.torus(5)
    assert "# M=4" in out


def test_gen_then_grid_block(capsys, tmp_path):
    g = tmp_path / "g.txt"
    rep = report(capsys, "gen", "torus", "--n", 8, "--output", g)
    assert rep["result"]["n"] == 64
    rep = report(capsys, "partition", "--input", g, "--k", 16, "--method", "grid-block")
    assert rep["result"]["quality"]["cut_fraction"] == 0.5
    assert rep["result"]["cut_fraction_exact"] == "1/2"
    assert rep["config"]["seed"] == 0 and rep["config"]["k"] == 16


def test_grid_block_needs_torus_and_square_k(capsys, tmp_path, torus8):
    p = tmp_path / "p.txt"
    p.write_text(format_edge_list(generators.path(64)))
    assert run(capsys, "partition", "--input", p, "--k", 16, "--method", "grid-block")[0] == 2
    assert run(capsys, "partition", "--input", torus8, "--k", 8, "--method", "grid-block")[0] == 2


@pytest.mark.parametrize("family", ["path", "cycle", "torus", "binary-tree", "random-regular"])
def test_mtp_deg_edge_exact(capsys, tmp_path, family):
    g = tmp_path / "g.txt"
    report(capsys, "gen", family, "--n", 10, "--seed", 3, "--output", g)
    rep = report(capsys, "mtp", "--input", g, "--f", "deg_edge", "--exact")
    assert rep["result"]["exact"] and rep["result"]["discrepancy"] == "0/1"


def test_mtp_float_and_dist_band(capsys, tmp_path):
    g = tmp_path / "c5.txt"
    g.write_text(format_edge_list(generators.cycle(5)))
    rep = report(capsys, "mtp", "--input", g, "--f", "dist_band:2", "--float")
    assert rep["result"]["lhs"] == 2.0 and not rep["result"]["exact"]


def test_distance_self_is_zero(capsys, torus8):
    rep = report(capsys, "distance", "--input", torus8, "--other", torus8, "--r", 2)
    assert rep["result"]["tv"] == "0/1"


def test_distance_rooted(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text(format_edge_list(generators.cycle(5)))
    b.write_text(format_edge_list(generators.cycle(6)))
    rep = report(capsys, "distance", "--input", a, "--other", b, "--r", 1, "--root-a", 0, "--root-b", 0)
    assert rep["result"]["rho"] == 1.0 and rep["result"]["agree_radius"] == 1
    assert rep["result"]["tv"] == "0/1"


def test_stats_output_round_trips(capsys, tmp_path, torus8):
    out = tmp_path / "d.json"
    rep = report(capsys, "stats", "--input", torus8, "--r", 2, "--output", out)
    d = NeighborhoodDistribution.from_json(json.loads(out.read_text()))
    assert d == psi(generators.torus(8), 2)
    assert rep["result"] == d.to_json()


def test_sampled_stats(capsys, torus8):
    rep = report(capsys, "stats", "--input", torus8, "--r", 1, "--samples", 10, "--seed", 4)
    assert rep["result"]["sample_count"] == 10


def test_partition_cut_file_round_trips(capsys, tmp_path, torus8):
    out = tmp_path / "cut.txt"
    for method in ("greedy", "random"):
        rep = report(capsys, "partition", "--input", torus8, "--k", 5, "--method", method, "--seed", 2, "--output", out)
        cut = parse_cut(out.read_text(), generators.torus(8))
        assert sorted(map(list, cut)) == rep["result"]["cut"]
        assert verify_partition(generators.torus(8), cut, 5).valid


def test_oracle_command(capsys, tmp_path):
    g = tmp_path / "c6.txt"
    g.write_text(format_edge_list(generators.cycle(6)))
    rep = report(capsys, "oracle", "--input", g, "--k", 3)
    assert rep["result"]["cut"] == [[0, 1], [3, 4]]


def test_exit_codes(capsys, tmp_path, torus8):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n1 2\n2 zz\n")
    code, out, err = run(capsys, "stats", "--input", bad, "--r", 1)
    assert code == 2 and out == "" and "line 3" in err
    assert run(capsys, "stats", "--input", tmp_path / "missing.txt")[0] == 2
    assert run(capsys, "oracle", "--input", torus8, "--k", 3)[0] == 3
    assert run(capsys, "mtp", "--input", torus8, "--f", "bogus")[0] == 2


def test_transfer_command(capsys, tmp_path):
    g = tmp_path / "t.txt"
    g.write_text(format_edge_list(generators.torus(6)))
    stats = tmp_path / "stats.json"
    rep = report(
        capsys, "transfer", "--input", g, "--k", 3, "--samples", 3, "--R-max", 6, "--seed", 1, "--runs", 2,
        "--stats-output", stats,
    )
    assert len(rep["result"]["runs"]) == 2
    assert all(r["quality"]["valid"] for r in rep["result"]["runs"])
    loaded = ComponentStats.from_json(json.loads(stats.read_text()))
    assert loaded.R == rep["result"]["runs"][0]["R"]
    assert json.loads(loaded.dumps()) == json.loads(stats.read_text())


@pytest.mark.parametrize(
    "argv",
    [
        ["stats", "--r", "2"],
        ["distance", "--other", "{g}", "--r", "2", "--samples", "20", "--seed", "5"],
        ["mtp", "--f", "paths3", "--exact"],
        ["partition", "--k", "4", "--method", "random", "--seed", "9"],
        ["transfer", "--k", "3", "--samples", "2", "--R-max", "5", "--seed", "2"],
    ],
)
def test_report_replays_bit_for_bit(capsys, tmp_path, argv):
    g = tmp_path / "g.txt"
    g.write_text(format_edge_list(generators.torus(5)))
    argv = [a.format(g=g) for a in argv] + ["--input", str(g)]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    saved = tmp_path / "rep.json"
    saved.write_text(out)
    rep = report(capsys, "report", "--input", saved)
    assert rep["result"]["reproduced"] is True


def test_report_detects_tampering(capsys, tmp_path, torus8):
    code, out, _ = run(capsys, "partition", "--input", torus8, "--k", 4, "--method", "random", "--seed", 1)
    data = json.loads(out)
    data["result"]["quality"]["cut_size"] += 1
    saved = tmp_path / "rep.json"
    saved.write_text(json.dumps(data))
    assert report(capsys, "report", "--input", saved)["result"]["reproduced"] is False


def test_jobs_do_not_change_output(capsys, torus8):
    a = report(capsys, "stats", "--input", torus8, "--r", 2, "--jobs", 1)
    b = report(capsys, "stats", "--input", torus8, "--r", 2, "--jobs", 2)
    assert a == b


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "hyperfinite.cli", "gen", "cycle", "--n", "4"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert parse_edge_list(proc.stdout) == generators.cycle(4)
