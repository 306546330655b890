"""
Tests for the flexnet command line
"""
import pytest

from cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, main
from instances.fileio import read_instance, read_solution
from instances.named import gen_paper
from network.feasibility import check_feasible


def run(capsys, *argv):
    code = main(["--log-level", "WARNING", *argv])
    return code, capsys.readouterr().out


@pytest.fixture
def st22_plus_file(tmp_path, capsys):
    path = tmp_path / "st22plus.txt"
    assert run(capsys, "gen", "FIG-ST22", "--extended", "-o", str(path))[0] == EXIT_OK
    return path


def test_gen_named_to_file(tmp_path, capsys):
    path = tmp_path / "gap2.txt"
    code, out = run(capsys, "gen", "GAP", "--k", "2", "-o", str(path))
    assert code == EXIT_OK
    assert out == ""
    loaded = read_instance(path)
    expected = gen_paper("GAP", k=2)
    assert loaded.graph == expected.graph.canonical()
    assert loaded.requirement == expected.requirement


def test_gen_to_stdout(capsys):
    code, out = run(capsys, "gen", "fig-st22")
    assert code == EXIT_OK
    assert out.startswith("flexnet 1\nn 4\n")
    assert out.rstrip().endswith("req 2 2 pair 0 3")


def test_gen_random(capsys):
    argv = ["gen", "random", "--seed", "3", "--n", "5", "--extra-edges", "6", "--p", "1", "--q", "1", "--scope", "pair"]
    code, out = run(capsys, *argv)
    assert code == EXIT_OK
    assert "req 1 1 pair 0 4" in out
    assert run(capsys, *argv)[1] == out


def test_opt_then_verify(st22_plus_file, tmp_path, capsys):
    solution_path = tmp_path / "opt.sol"
    code, out = run(capsys, "opt", str(st22_plus_file), "-o", str(solution_path))
    assert code == EXIT_OK
    assert "cost 7\n" in out

    code, out = run(capsys, "verify", str(st22_plus_file), str(solution_path))
    assert code == EXIT_OK
    assert out.strip() == "FEASIBLE"


def test_verify_reports_witness(tmp_path, capsys):
    instance_path = tmp_path / "st22.txt"
    run(capsys, "gen", "FIG-ST22", "-o", str(instance_path))
    solution_path = tmp_path / "one.sol"
    solution_path.write_text("sol 0\n")
    code, out = run(capsys, "verify", str(instance_path), str(solution_path))
    assert code == EXIT_VIOLATED
    assert out.startswith("INFEASIBLE witness")


def test_solve_flex_st(st22_plus_file, tmp_path, capsys):
    solution_path = tmp_path / "alg.sol"
    code, out = run(capsys, "solve", str(st22_plus_file), "--algorithm", "flex-st", "-o", str(solution_path))
    assert code == EXIT_OK
    instance = read_instance(st22_plus_file)
    solution = read_solution(solution_path, instance.graph)
    assert check_feasible(instance.graph, solution.edge_ids, instance.requirement)
    assert 7 <= solution.cost <= 35


def test_solve_wrong_regime(st22_plus_file, capsys):
    code, _ = run(capsys, "solve", str(st22_plus_file), "--algorithm", "fgc")
    assert code == EXIT_USAGE


def test_lp_dump(tmp_path, capsys):
    path = tmp_path / "gap2.txt"
    run(capsys, "gen", "GAP", "--k", "2", "-o", str(path))
    code, out = run(capsys, "lp", str(path), "--dump")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("lp ")
    assert float(lines[0].split()[1]) == pytest.approx(6.0, abs=1e-4)
    assert lines[1:] and all(line.startswith("x ") for line in lines[1:])


def test_check_flex_st_family(tmp_path, capsys):
    path = tmp_path / "st22.txt"
    run(capsys, "gen", "FIG-ST22", "-o", str(path))
    code, out = run(capsys, "check", str(path), "--family", "flex-st")
    assert code == EXIT_VIOLATED
    assert "cut 0 1\n" in out
    assert "cut 0 2\n" in out
    assert "CROSSING_PAIR({0,1}, {0,2})" in out


def test_check_needs_matching_scope(tmp_path, capsys):
    path = tmp_path / "st22.txt"
    run(capsys, "gen", "FIG-ST22", "-o", str(path))
    assert run(capsys, "check", str(path), "--family", "stage")[0] == EXIT_USAGE


def test_ratio_single_instance(st22_plus_file, capsys):
    code, out = run(capsys, "ratio", str(st22_plus_file), "--algorithm", "flex-st", "--no-lp")
    assert code == EXIT_OK
    assert "FLEXNET RESULTS" in out
    assert "Optimum: 7" in out


def test_infeasible_instance_prints_witness(tmp_path, capsys):
    path = tmp_path / "single.txt"
    path.write_text("flexnet 1\nn 2\ne 0 1 1 U\nreq 1 1 pair 0 1\n")
    code, out = run(capsys, "opt", str(path))
    assert code == EXIT_VIOLATED
    assert out.startswith("INFEASIBLE")
    assert "witness 0\n" in out


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "opt", str(tmp_path / "missing.txt"))[0] == EXIT_USAGE
    bad = tmp_path / "bad.txt"
    bad.write_text("flexnet 1\nn 2\n")
    assert run(capsys, "opt", str(bad))[0] == EXIT_USAGE
    assert run(capsys, "ratio")[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["solve", "x.txt", "--algorithm", "magic"])
    assert info.value.code == 2
