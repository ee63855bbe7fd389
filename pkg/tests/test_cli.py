import math
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdram.channels import CoherentLeakage, Markovian, Noiseless
from qdram.cli import CSV_HEADER, cmd_capacity, cmd_zeno, main, std_path
from qdram.config import ExperimentConfig, parse_config
from qdram.errors import ParseError, ValidationError
from qdram.measure import PhasePolicy
from qdram.memory import Erasure, MeasureRecreate, Zeno

SMALL = """
[memory]
redundancy = 20
cycles = 4
repetitions = 5
[noise]
model = noiseless
"""


class TestParseConfig:
    def test_defaults(self):
        cfg = parse_config("")
        assert cfg == ExperimentConfig()
        assert cfg.redundancy == 100 and cfg.cycles == 100 and cfg.repetitions == 1000
        assert cfg.noise == Markovian(2e-6, 1e-6)
        assert cfg.policy == MeasureRecreate(1e-7, PhasePolicy.UniformRandom)

    def test_full_document(self):
        cfg = parse_config(
            """
            [protocol]
            name = zeno       # comment
            period = 0.25
            [noise]
            model = coherent_leakage
            omega = 2.0
            [state]
            p_up = 1
            [run]
            seed = 18446744073709551615
            output = out/x.csv
            """.replace("            ", "")
        )
        assert cfg.policy == Zeno(0.25) and cfg.noise == CoherentLeakage(2.0)
        assert cfg.seed == 2**64 - 1 and cfg.output_path == "out/x.csv" and cfg.p_up == 1.0

    def test_redundancy_zero(self):
        with pytest.raises(ValidationError) as info:
            parse_config("[memory]\nredundancy = 0\n")
        assert "redundancy" in str(info.value)

    def test_unknown_key_suggests(self):
        with pytest.raises(ValidationError) as info:
            parse_config("[memory]\nredundency = 3\n")
        assert "redundency" in info.value.key and "did you mean 'redundancy'" in str(info.value)

    def test_unknown_section(self):
        with pytest.raises(ValidationError, match="did you mean 'noise'"):
            parse_config("[nosie]\nmodel = noiseless\n")

    @pytest.mark.parametrize(
        "doc, key",
        [
            ("[noise]\nt1 = 1\nt2 = 3\n", "noise"),
            ("[state]\np_up = 1.5\n", "state.p_up"),
            ("[protocol]\nperiod = -1\n", "protocol.period"),
            ("[protocol]\nname = zeon\n", "protocol.name"),
            ("[run]\nseed = -1\n", "run.seed"),
            ("[memory]\ncycles = many\n", "memory.cycles"),
            ("[protocol]\nname = erasure\nphase_policy = zero\n", "protocol.phase_policy"),
        ],
    )
    def test_validation_errors(self, doc, key):
        with pytest.raises(ValidationError) as info:
            parse_config(doc)
        assert info.value.key == key

    def test_parse_error(self):
        with pytest.raises(ParseError):
            parse_config("redundancy = 3\n")

    def test_period_defaults_to_tenth_of_t2(self):
        assert parse_config("[noise]\nt2 = 5e-6\n").policy.period == pytest.approx(5e-7)

    @given(
        st.sampled_from(["measure_recreate", "zeno", "erasure"]),
        st.sampled_from(["markovian", "coherent_leakage", "noiseless"]),
        st.integers(1, 500),
        st.floats(0, 1),
        st.floats(1e-9, 1e-3),
    )
    def test_round_trip(self, proto, model, r, p, t2):
        doc = f"[protocol]\nname = {proto}\n[noise]\nmodel = {model}\nt2 = {t2!r}\nomega = 3.0\n[memory]\nredundancy = {r}\n[state]\np_up = {p!r}\n"
        cfg = parse_config(doc)
        assert parse_config(cfg.to_text()) == cfg


def run_sim(tmp_path, doc, *extra, name="out.csv"):
    cfg = tmp_path / "c.ini"
    cfg.write_text(doc)
    out = tmp_path / name
    code = main(["simulate", "--config", str(cfg), "--out", str(out), *extra])
    return code, out


class TestSimulate:
    def test_zero_cycles_header_only(self, tmp_path):
        code, out = run_sim(tmp_path, SMALL.replace("cycles = 4", "cycles = 0"))
        assert code == 0
        assert out.read_text() == ",".join(CSV_HEADER) + "\n"

    def test_csv_shape(self, tmp_path, capsys):
        code, out = run_sim(tmp_path, SMALL, "--seed", "7")
        lines = out.read_text().splitlines()
        assert code == 0 and lines[0] == ",".join(CSV_HEADER) and len(lines) == 5
        assert [l.split(",")[0] for l in lines[1:]] == ["1", "2", "3", "4"]
        assert std_path(out).exists()
        printed = capsys.readouterr().out
        assert "redundancy = 20" in printed and "seed = 7" in printed and "phase_policy = uniform_random" in printed

    def test_byte_identical(self, tmp_path):
        _, a = run_sim(tmp_path, SMALL, "--seed", "3", name="a.csv")
        _, b = run_sim(tmp_path, SMALL, "--seed", "3", name="b.csv")
        _, c = run_sim(tmp_path, SMALL, "--seed", "4", name="c.csv")
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes() != c.read_bytes()

    def test_thread_count_independent(self, tmp_path):
        _, a = run_sim(tmp_path, SMALL, "--threads", "1", name="a.csv")
        _, b = run_sim(tmp_path, SMALL, "--threads", "3", name="b.csv")
        assert a.read_bytes() == b.read_bytes()

    def test_erasure_markovian_exit_2(self, tmp_path, capsys):
        doc = "[memory]\ncycles = 3\nrepetitions = 2\nredundancy = 5\n[protocol]\nname = erasure\n"
        code, _ = run_sim(tmp_path, doc)
        assert code == 2
        err = capsys.readouterr().err
        assert "cycle 1" in err and "mixed state" in err

    def test_bad_config_exit_1(self, tmp_path):
        code, _ = run_sim(tmp_path, "[memory]\nredundancy = 0\n")
        assert code == 1

    def test_missing_config_exit_1(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.ini")]) == 1

    def test_unwritable_output_exit_1(self, tmp_path):
        code, _ = run_sim(tmp_path, SMALL, name="missing_dir/out.csv")
        assert code == 1

    def test_usage_error_exit_1(self):
        with pytest.raises(SystemExit) as info:
            main(["frobnicate"])
        assert info.value.code == 1

    def test_seventeen_digits(self, tmp_path):
        _, out = run_sim(tmp_path, SMALL.replace("model = noiseless", "model = markovian"))
        row = out.read_text().splitlines()[1].split(",")
        assert all(float(format(float(v), ".17g")) == float(v) for v in row[1:])


class TestZenoCommand:
    def test_full_flip(self, capsys):
        assert cmd_zeno(math.pi, 1.0, [1], 1000, 0) == 0
        row = capsys.readouterr().out.splitlines()[-1].split()
        assert float(row[1]) == 0

    def test_table(self, capsys):
        assert cmd_zeno(math.pi / 2, 1.0, [1, 10, 100], 20_000, 1) == 0
        rows = [l.split() for l in capsys.readouterr().out.splitlines()[2:]]
        analytic = [float(r[1]) for r in rows]
        assert analytic == sorted(analytic) and analytic[-1] == pytest.approx(0.99385, abs=1e-5)
        for _, a, mc, sigma in rows:
            assert abs(float(mc) - float(a)) < 3 * float(sigma) + 1e-12

    def test_invalid(self):
        assert cmd_zeno(1.0, 1.0, [0], 10, 0) == 1
        assert main(["zeno", "--trials", "0"]) == 1


class TestCapacityCommand:
    def test_giga(self, capsys):
        assert cmd_capacity(1e11, 100, 1.0) == 0
        out = capsys.readouterr().out
        assert "1000000000 logical qubits" in out and "log2(state-space size) = 1000000000" in out

    def test_pitch(self, capsys):
        assert main(["capacity", "--pitch", "100", "--redundancy", "100"]) == 0
        n = int(capsys.readouterr().out.split("\n")[1].split()[0])
        assert n == pytest.approx(1.155e8, rel=1e-3)

    def test_zero_redundancy(self):
        assert main(["capacity", "--density", "1e11", "--redundancy", "0"]) == 1

    def test_module_entry_point(self):
        res = subprocess.run(
            [sys.executable, "-m", "qdram", "capacity", "--density", "1e11"], capture_output=True, text=True
        )
        assert res.returncode == 0 and "1000000000 logical qubits" in res.stdout
