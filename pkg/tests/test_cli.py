import pytest

from srgrand.cli import main, parse_decoder
from srgrand.decoder import EntropyTypical, MaxQueries, MaxWeight
from srgrand.harness import CSV_HEADER, ConfigError, read_csv


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    rc = main(["sweep", "--code", "rm:1,4", "--decoder", "grandab:w=2", "--decoder", "srgrandab:matched",
               "--eps", "0.01,0.05", "--qp", "0.5,0.1", "--trials", "50", "--seed", "1", "--out", str(out)])
    assert rc == 0
    res = read_csv(out)
    assert len(res.rows) == 6
    again = tmp_path / "t.csv"
    main(["sweep", "--code", "rm:1,4", "--decoder", "grandab:w=2", "--decoder", "srgrandab:matched",
          "--eps", "0.01,0.05", "--qp", "0.5,0.1", "--trials", "50", "--seed", "1", "--out", str(again)])
    assert out.read_bytes() == again.read_bytes()


def test_sweep_stdout(capsys):
    assert main(["sweep", "--code", "rlc:8,4", "--decoder", "srgrand", "--eps", "0", "--trials", "3", "--seed", "0"]) == 0
    assert capsys.readouterr().out.startswith(CSV_HEADER)


@pytest.mark.parametrize("argv", [
    ["sweep", "--code", "rm:1,4", "--decoder", "grand", "--eps", "0.1"],  # no seed
    ["sweep", "--code", "rm:1,4", "--decoder", "grand", "--seed", "1"],  # no grid
    ["sweep", "--code", "rm:9,4", "--decoder", "grand", "--eps", "0.1", "--seed", "1"],
    ["sweep", "--code", "rm:1,4", "--decoder", "grand:x=1", "--eps", "0.1", "--seed", "1"],
    ["sweep", "--code", "rm:1,4", "--decoder", "grand", "--eps", "abc", "--seed", "1"],
    ["sweep", "--code", "rm:1,4", "--decoder", "grand", "--qp", "2,0.1", "--seed", "1"],
    ["quantize", "--ebno", "3"],
    ["bogus"],
])
def test_config_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "error" in capsys.readouterr().err


def test_io_error_exit_2(tmp_path):
    assert main(["codegen", "--code", "rm:1,3", "--out", str(tmp_path / "no" / "x")]) == 2
    assert main(["sweep", "--code", f"file:{tmp_path / 'absent.txt'}", "--decoder", "grand",
                 "--eps", "0.1", "--seed", "1"]) == 2


def test_codegen_round_trip(tmp_path):
    path = tmp_path / "c.txt"
    assert main(["codegen", "--code", "rlc:20,10", "--seed", "4", "--out", str(path)]) == 0
    assert path.read_text().startswith("20 10\n")
    assert main(["sweep", "--code", f"file:{path}", "--decoder", "srgrand", "--eps", "0.05",
                 "--trials", "10", "--seed", "2", "--out", str(tmp_path / "o.csv")]) == 0


def test_curves_and_svg(tmp_path, capsys):
    svg = tmp_path / "c.svg"
    assert main(["curves", "--kind", "error_exponents", "--pq", "0.05", "--qs", "1,0.5", "--svg", str(svg)]) == 0
    assert svg.read_text().startswith("<svg")
    assert main(["curves", "--kind", "capacity", "--p", "0.1", "--grid", "0,1"]) == 0
    assert main(["curves", "--kind", "approx_perf", "--qp", "0.5,0.02", "--log-y", "--svg", str(svg)]) == 0


def test_quantize(capsys):
    assert main(["quantize", "--ebno", "3", "--threshold", "2", "--bits", "10000"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 2 and lines[1].startswith("3,2,")


def test_parse_decoder():
    assert parse_decoder("grandab:w=4").rule == MaxWeight(4)
    assert parse_decoder("srgrandab:q=9").rule == MaxQueries(9)
    assert parse_decoder("srgrandab:typical=0.1/mean").rule == EntropyTypical(0.1, "mean")
    assert parse_decoder("srgrandab:matched").rule == "matched"
    with pytest.raises(ConfigError):
        parse_decoder("grandab:w=x")
