import json

import pytest
from click.testing import CliRunner

from src.main import cli, load_config, main


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def read_rows(path) -> list[list[str]]:
    return [line.split(",") for line in path.read_text().splitlines()]


class TestEval:
    def test_frechet_ell(self, runner):
        result = runner.invoke(cli, ["eval", "ell", "-f", "frechet", "--theta", "0.5", "--t", "1,1"])
        assert result.exit_code == 0
        assert result.output == "1.414214\n"

    def test_numeric_ell(self, runner):
        result = runner.invoke(cli, ["eval", "ell", "-f", "german-exp", "--unnormalized", "--numeric", "--t", "1,2"])
        assert result.exit_code == 0
        assert result.output == "0.898931\n"

    def test_psi(self, runner):
        result = runner.invoke(cli, ["eval", "psi", "-f", "frechet", "--x", "1,4"])
        assert result.exit_code == 0
        assert result.output.splitlines() == ["x,psi_H", "1,1", "4,2"]

    def test_unknown_family(self, runner):
        result = runner.invoke(cli, ["eval", "ell", "-f", "gumbel", "--t", "1,1"])
        assert result.exit_code == 2

    @pytest.mark.parametrize(
        "arguments",
        [
            ["eval", "ell", "-f", "frechet", "--t", "1,x"],
            ["eval", "ell", "-f", "frechet", "--t", "1,-1"],
            ["eval", "ell", "-f", "frechet", "--theta", "2", "--t", "1,1"],
            ["eval", "ell", "-f", "frechet", "--param", "theta", "--t", "1,1"],
        ],
    )
    def test_usage_errors(self, runner, arguments):
        assert runner.invoke(cli, arguments).exit_code == 2


class TestFamilies:
    def test_list(self, runner):
        result = runner.invoke(cli, ["families", "list"])
        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert lines[0] == "id\tparams\tclosed_forms\tprovenance"
        assert [line.split("\t")[0] for line in lines[1:3]] == ["levy-bernoulli", "standard-poisson"]
        assert len(lines) == 13


class TestSample:
    def test_copula_rows(self, runner, tmp_path):
        output = tmp_path / "copula.csv"
        result = runner.invoke(
            cli, ["sample", "copula", "-f", "frechet", "-d", "3", "-n", "5", "--seed", "4", "-o", str(output)]
        )
        assert result.exit_code == 0
        rows = read_rows(output)
        assert rows[0] == ["seed", "stream", "draw", "u1", "u2", "u3"]
        assert len(rows) == 6
        assert [row[2] for row in rows[1:]] == ["0", "1", "2", "3", "4"]
        assert all(0.0 < float(value) < 1.0 for row in rows[1:] for value in row[3:])

    def test_copula_independent_of_workers(self, runner, tmp_path):
        outputs = []
        for workers in (1, 3):
            output = tmp_path / f"copula-{workers}.csv"
            arguments = ["sample", "copula", "-f", "german-exp", "-n", "50", "--chunk-size", "7"]
            arguments += ["--workers", str(workers), "--seed", "8", "-o", str(output)]
            assert runner.invoke(cli, arguments).exit_code == 0
            outputs.append(output.read_text())
        assert outputs[0] == outputs[1]
        assert [row[1] for row in read_rows(tmp_path / "copula-1.csv")[1:9]] == ["0"] * 7 + ["1"]

    def test_seed_from_environment(self, runner, tmp_path):
        from_flag, from_env = tmp_path / "flag.csv", tmp_path / "env.csv"
        base = ["sample", "copula", "-f", "frechet", "-n", "3"]
        runner.invoke(cli, base + ["--seed", "12", "-o", str(from_flag)])
        runner.invoke(cli, base + ["-o", str(from_env)], env={"IDT_SEED": "12"})
        assert from_flag.read_text() == from_env.read_text()

    def test_path_rows(self, runner, tmp_path):
        output = tmp_path / "path.csv"
        arguments = ["sample", "path", "-f", "german-linear", "--sampler", "direct", "-n", "2"]
        arguments += ["--grid", "4", "-o", str(output)]
        assert runner.invoke(cli, arguments).exit_code == 0
        rows = read_rows(output)
        assert rows[0] == ["seed", "stream", "draw", "t", "value"]
        first = [row for row in rows[1:] if row[2] == "0"]
        assert float(first[0][3]) == 0.0
        assert float(first[0][4]) == 0.0

    def test_infdiv_rows(self, runner, tmp_path):
        output = tmp_path / "infdiv.csv"
        arguments = ["sample", "infdiv", "-f", "bondesson-45", "--law", "cp", "-n", "4", "-o", str(output)]
        assert runner.invoke(cli, arguments).exit_code == 0
        rows = read_rows(output)
        assert rows[0] == ["seed", "stream", "draw", "value"]
        assert len(rows) == 5

    def test_infdiv_needs_stieltjes(self, runner):
        result = runner.invoke(cli, ["sample", "infdiv", "-f", "frechet", "--law", "bondesson"])
        assert result.exit_code == 2


class TestConfig:
    def test_load_config(self, tmp_path):
        path = tmp_path / "idt.cfg"
        path.write_text("# defaults\nfamily = frechet\nchunk-size = 10  # small\n\n")
        assert load_config(str(path)) == {"family": "frechet", "chunk_size": "10"}

    def test_defaults_from_file(self, runner, tmp_path):
        path = tmp_path / "idt.cfg"
        path.write_text("family = frechet\ntheta = 0.5\n")
        result = runner.invoke(cli, ["--config", str(path), "eval", "ell", "--t", "1,1"])
        assert result.exit_code == 0
        assert result.output == "1.414214\n"

    def test_malformed_file(self, runner, tmp_path):
        path = tmp_path / "idt.cfg"
        path.write_text("family frechet\n")
        result = runner.invoke(cli, ["--config", str(path), "families", "list"])
        assert result.exit_code == 2


class TestVerify:
    def test_report(self, runner, tmp_path):
        output = tmp_path / "report.json"
        curve = tmp_path / "curve.csv"
        arguments = ["verify", "-f", "frechet", "-n", "2000", "--seed", "3"]
        arguments += ["-o", str(output), "--curve", str(curve)]
        result = runner.invoke(cli, arguments)
        assert result.exit_code in (0, 1)
        report = json.loads(output.read_text())
        assert report["model_id"] == "frechet"
        assert report["seed"] == 3
        assert (result.exit_code == 0) == report["overall_pass"]
        assert curve.read_text().splitlines()[0] == "x,theoretical,empirical,se"

    def test_csv_report(self, runner, tmp_path):
        output = tmp_path / "report.csv"
        arguments = ["verify", "-f", "german-linear", "-n", "1000", "--format", "csv", "-o", str(output)]
        result = runner.invoke(cli, arguments)
        assert result.exit_code in (0, 1)
        assert output.read_text().splitlines()[0] == "check,statistic,threshold,pass,n,seed"


class TestMain:
    def test_returns_zero(self, capsys):
        assert main(["eval", "ell", "-f", "frechet", "--t", "1,1"]) == 0
        assert capsys.readouterr().out == "1.414214\n"

    def test_returns_two_on_usage_error(self, capsys):
        assert main(["eval", "ell", "-f", "gumbel", "--t", "1"]) == 2
        assert "gumbel" in capsys.readouterr().err
