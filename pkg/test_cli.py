import json
import logging
import sys
from logging.handlers import RotatingFileHandler

import pytest

from src.main import main
from src.utils.logging_config import setup_logging

P3 = "0 1\n1 2\n"
C5 = "0 1\n1 2\n2 3\n3 4\n4 0\n"
CUBE = "0 1\n1 3\n3 2\n2 0\n4 5\n5 7\n7 6\n6 4\n0 4\n1 5\n2 6\n3 7\n"


def run(capsys, *argv):
    code = main([*argv, "--workers", "1"])
    return code, capsys.readouterr()


def exit_code(*argv) -> int:
    with pytest.raises(SystemExit) as info:
        main([*argv, "--workers", "1"])
    return info.value.code


class TestCompute:
    def test_tree_table(self, capsys, graph_file):
        code, out = run(capsys, "compute", graph_file(P3), "--lmax", "3")
        lines = out.out.splitlines()
        assert code == 0
        assert lines[0] == "# maghom-csv v1"
        assert lines[1] == "scope,vertex,k,l,rank,torsion"
        assert "total,,3,3,4," in lines
        assert "total,,0,0,3," in lines

    def test_per_vertex_json(self, capsys, graph_file):
        code, out = run(capsys, "compute", graph_file(C5), "--lmax", "3", "--per-vertex",
                        "--torsion", "--format", "json")
        document = json.loads(out.out)
        assert code == 0
        assert document["torsion_computed"] is True
        assert any(e["k"] == 2 and e["length"] == 3 and e["rank"] > 0 for e in document["entries"])
        assert len(document["per_vertex"]) > 0

    def test_dump_dir(self, capsys, graph_file, tmp_path):
        target = tmp_path / "dump"
        code, _ = run(capsys, "compute", graph_file(C5), "--lmax", "2", "--dump-dir", str(target))
        assert code == 0
        assert (target / "basis_x0_l2.txt").exists()
        assert (target / "matching_x0_l2.txt").exists()
        assert (target / "critical_x0_l2.txt").exists()


class TestGirthAndMagnitude:
    def test_tree_girth_is_inf(self, capsys, graph_file):
        code, out = run(capsys, "girth", graph_file(P3))
        assert code == 0
        assert "graph,G,inf" in out.out.splitlines()
        assert "edge,0-1,inf" in out.out.splitlines()

    def test_magnitude_with_oracle(self, capsys, graph_file):
        code, out = run(capsys, "magnitude", graph_file(P3), "--lmax", "3", "--oracle")
        assert code == 0
        assert out.out.splitlines()[2:] == ["0,3", "1,-4", "2,4", "3,-4"]

    def test_magnitude_json(self, capsys, graph_file):
        code, out = run(capsys, "magnitude", graph_file("0 1\n"), "--lmax", "2", "--format", "json")
        assert json.loads(out.out)["coefficients"] == [2, -2, 2]


class TestDiagonal:
    def test_tree_is_diagonal(self, capsys, graph_file):
        code, out = run(capsys, "diagonal", graph_file(P3), "--lmax", "3")
        assert code == 0
        assert "graph,,Diagonal,AllComponentsForest" in out.out.splitlines()

    def test_five_cycle_is_not(self, capsys, graph_file):
        code, out = run(capsys, "diagonal", graph_file(C5), "--lmax", "3")
        assert code == 1
        assert "GirthWitness(edge=0-1, gir_e=5, bidegree=(2,3))" in out.out

    def test_cube_is_unresolved(self, capsys, graph_file):
        code, out = run(capsys, "diagonal", graph_file(CUBE), "--lmax", "2")
        assert code == 2
        assert "DiagonalUpTo(2)" in out.out


class TestVerify:
    def test_five_cycle(self, capsys, graph_file):
        code, out = run(capsys, "verify", graph_file(C5), "--lmax", "3")
        assert code == 0
        assert out.out.splitlines()[1] == "theorem,locus,k,length,expected,observed,passed"

    def test_random_graphs(self, capsys):
        code, out = run(capsys, "verify", "--random", "8", "--trials", "2", "--lmax", "2")
        assert code == 0
        assert "trial 0: G" in out.out

    def test_needs_a_source(self):
        assert exit_code("verify") == 64


class TestExperiments:
    def test_sim(self, capsys):
        code, out = run(capsys, "er", "sim", "--n", "20", "--c", "0.5", "--trials", "5", "--lmax", "3")
        lines = out.out.splitlines()
        assert code == 0
        assert lines[1].startswith("kind,n,c,trials")
        assert lines[2].startswith("DiagonalityCurveRow,20,0.5,5")

    def test_cycles_grid_and_trial_rows(self, capsys, tmp_path):
        trials = tmp_path / "trials.csv"
        code, out = run(capsys, "er", "cycles", "--n", "20", "--c", "0.5:1.0:0.5", "--trials", "3",
                        "--m", "4", "--trials-out", str(trials))
        assert code == 0
        assert sum(1 for line in out.out.splitlines() if line.startswith("CycleRow")) == 4
        assert len(trials.read_text(encoding="utf-8").splitlines()) == 2 + 2 * 3

    def test_bad_grid(self):
        assert exit_code("er", "sim", "--n", "20", "--c", "abc") == 64

    def test_missing_grid(self):
        assert exit_code("er", "sim", "--n", "20") == 64


class TestErrors:
    def test_self_loop(self, graph_file):
        assert exit_code("compute", graph_file("0 0\n")) == 65

    def test_malformed_line(self, graph_file):
        assert exit_code("girth", graph_file("0 1 2\n")) == 65

    def test_missing_file(self, tmp_path):
        assert exit_code("girth", str(tmp_path / "absent.edges")) == 66

    def test_missing_argument(self):
        assert exit_code("compute") == 64

    def test_lmax_too_small_for_diagonality(self, graph_file):
        assert exit_code("diagonal", graph_file(C5), "--lmax", "1") == 64

    def test_unknown_subcommand(self):
        assert exit_code("frobnicate") == 64


class TestLogging:
    def record(self, name="maghom.test", level=logging.INFO):
        return logging.LogRecord(name, level, __file__, 7, "basis sizes", None, None)

    def test_console_goes_to_stderr(self):
        root = setup_logging("info")
        try:
            [console] = root.handlers
            assert console.stream is sys.stderr
            assert root.level == logging.INFO
            assert console.format(self.record()).endswith(" - maghom.test - INFO - basis sizes")
        finally:
            setup_logging("WARNING")

    def test_unknown_level_falls_back_to_warning(self):
        try:
            assert setup_logging("chatty").level == logging.WARNING
        finally:
            setup_logging("WARNING")

    def test_rotating_file(self, tmp_path):
        root = setup_logging("DEBUG", str(tmp_path / "logs"))
        rotating = [h for h in root.handlers if isinstance(h, RotatingFileHandler)]
        try:
            assert len(rotating) == 1
            assert rotating[0].format(self.record(level=logging.DEBUG)).endswith(
                " - maghom.test - DEBUG - test_cli.py:7 - basis sizes"
            )
            logging.getLogger("maghom.test").debug("written")
            rotating[0].flush()
            assert "written" in (tmp_path / "logs" / "maghom.log").read_text(encoding="utf-8")
        finally:
            for handler in rotating:
                handler.close()
            setup_logging("WARNING")
