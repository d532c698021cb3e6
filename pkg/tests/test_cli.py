import json

from pytest import raises

from congestcut.bench.experiment import COLUMNS, ExperimentSpec
from congestcut.cli import build_parser, main
from congestcut.graph.weighted import WeightedGraph, read_graph, write_graph

SPEC = {
    "generator": "cycle+chords",
    "sizes": [5],
    "seeds": [0, 1],
    "config": {"interest": {"mode": "exact"}},
}


def write_spec(tmp_path, values=None):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(values or SPEC))
    return path


class TestParser:
    def test_overrides(self):
        argv = ["run", "--spec", "s.json", "--trees-k", "4", "--seed", "2"]
        args = build_parser().parse_args(argv)
        assert (args.command, args.trees_k, args.seed, args.budget_words) == ("run", 4, 2, None)

    def test_command_is_required(self):
        with raises(SystemExit):
            build_parser().parse_args([])


class TestCommands:
    def test_gen(self, tmp_path):
        out = tmp_path / "graphs"
        assert main(["gen", "--spec", str(write_spec(tmp_path)), "--out", str(out)]) == 0
        assert sorted(p.name for p in out.iterdir()) == ["graph_0_5.txt", "graph_1_5.txt"]
        assert read_graph(out / "graph_1_5.txt").n == 5

    def test_gen_one_seed(self, tmp_path):
        spec = write_spec(tmp_path)
        assert main(["gen", "--spec", str(spec), "--out", str(tmp_path), "--seed", "7"]) == 0
        assert (tmp_path / "graph_7_5.txt").exists()
        assert ExperimentSpec.load(spec).seeds == (0, 1)

    def test_run(self, tmp_path):
        assert main(["run", "--spec", str(write_spec(tmp_path)), "--out", str(tmp_path)]) == 0
        header = (tmp_path / "report.csv").read_text().splitlines()[0]
        assert header == ",".join(COLUMNS)
        rows = json.loads((tmp_path / "report.json").read_text())
        assert [r["seed"] for r in rows] == [0, 1]
        assert all(r["agree_2resp"] for r in rows)

    def test_verify_graph(self, tmp_path, capsys):
        path = tmp_path / "triangle.txt"
        write_graph(WeightedGraph(3, [(0, 1, 2), (1, 2, 3), (0, 2, 5)]), path)
        assert main(["verify", "--graph", str(path)]) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["value"] == record["stoer_wagner"] == 5

    def test_missing_spec(self):
        with raises(SystemExit):
            main(["run"])

    def test_contract_breach_exits_with_2(self, tmp_path):
        spec = write_spec(tmp_path, {"generator": "lattice"})
        assert main(["run", "--spec", str(spec), "--out", str(tmp_path)]) == 2
        assert not (tmp_path / "report.csv").exists()

    def test_scale(self, tmp_path, capsys):
        spec = write_spec(tmp_path, SPEC | {"sizes": [5, 8]})
        assert main(["scale", "--spec", str(spec), "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "scale.csv").read_text().splitlines()
        assert lines[0] == "n,runs,median_rounds,median_diameter,ratio"
        assert [line.split(",")[:2] for line in lines[1:]] == [["5", "2"], ["8", "2"]]
        c = float(capsys.readouterr().out.strip().removeprefix("C = "))
        assert c >= max(float(line.split(",")[-1]) for line in lines[1:]) > 0
