import pytest

from qcaseq import cli
from qcaseq.circuits import build
from qcaseq.formats import netlists_isomorphic, parse_netlist, trace_from_csv


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_truthtable_cpg(capsys):
    code, out, _ = run(capsys, "truthtable", "cpg")
    assert code == 0 and out


def test_truthtable_cff_prints_published_table(capsys):
    code, out, _ = run(capsys, "truthtable", "cff")
    assert code == 0
    assert "Qt" in out


def test_truthtable_unknown_is_usage_error(capsys):
    code, _, err = run(capsys, "truthtable", "nope")
    assert code == 2 and "nope" in err


def test_verify_counter(capsys):
    code, out, _ = run(capsys, "verify", "counter_shift", "--n", "2", "--runs", "10", "--seed", "3")
    assert code == 0
    assert out.splitlines()[0] == "seed 3"


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("QCA_SEED", "41")
    code, out, _ = run(capsys, "verify", "cff", "--runs", "2")
    assert code == 0 and out.startswith("seed 41")
    monkeypatch.setenv("QCA_SEED", "abc")
    assert run(capsys, "verify", "cff")[0] == 2


def test_same_seed_same_report(capsys):
    a = run(capsys, "verify", "ecff", "--runs", "3", "--seed", "9")[1]
    b = run(capsys, "verify", "ecff", "--runs", "3", "--seed", "9")[1]
    assert a == b


def test_verify_needs_a_name(capsys):
    assert run(capsys, "verify")[0] == 2


def test_simulate_missing_file(capsys):
    code, _, err = run(capsys, "simulate", "missing.net", "--stimuli", "missing.txt")
    assert code == 2 and "missing.net" in err


def test_unknown_command_and_no_args(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2


def test_build_to_file_round_trips(capsys, tmp_path):
    path = tmp_path / "ecff.net"
    code, _, _ = run(capsys, "build", "ecff", "-o", str(path))
    assert code == 0
    text = path.read_text()
    assert text.startswith("# ecff: latency 15")
    assert netlists_isomorphic(parse_netlist(text), build("ecff").netlist)


def test_build_counter_with_n(capsys):
    code, out, _ = run(capsys, "build", "counter_shift", "--n", "3")
    assert code == 0 and "counter_shift:3" in out


def test_build_then_simulate(capsys, tmp_path):
    net, stim = tmp_path / "xnor.net", tmp_path / "s.txt"
    run(capsys, "build", "xnor", "-o", str(net))
    stim.write_text("A C2\n1 1\n1 1\n0 1\n0 1\n")
    code, out, _ = run(capsys, "simulate", str(net), "--stimuli", str(stim))
    assert code == 0
    tr = trace_from_csv(out)
    assert tr.n_ticks == 16 and "F1" in tr.signals


def test_simulate_vcd_by_extension(capsys, tmp_path):
    net, stim, wave = tmp_path / "mv.net", tmp_path / "s.txt", tmp_path / "w.vcd"
    run(capsys, "build", "mv", "-o", str(net))
    inputs = build("mv").inputs
    stim.write_text(" ".join(inputs) + "\n" + " ".join("1" for _ in inputs) + "\n")
    assert run(capsys, "simulate", str(net), "--stimuli", str(stim), "-o", str(wave))[0] == 0
    assert wave.read_text().startswith("$")


def test_simulate_parse_error_is_usage(capsys, tmp_path):
    net, stim = tmp_path / "bad.net", tmp_path / "s.txt"
    net.write_text("input a @7\n")
    stim.write_text("a\n1\n")
    code, _, err = run(capsys, "simulate", str(net), "--stimuli", str(stim))
    assert code == 2 and "line 1" in err


def test_simulate_missing_inputs(capsys, tmp_path):
    net, stim = tmp_path / "x.net", tmp_path / "s.txt"
    run(capsys, "build", "xnor", "-o", str(net))
    stim.write_text("A\n1\n")
    assert run(capsys, "simulate", str(net), "--stimuli", str(stim))[0] == 2


@pytest.mark.parametrize("extra", [[], ["--csv"]])
def test_metrics(capsys, extra):
    code, out, _ = run(capsys, "metrics", "cff", *extra)
    assert code == 0 and "PaperReported" in out and "2.75" in out


def test_layout_sim_primitive(capsys, tmp_path):
    stim = tmp_path / "s.txt"
    stim.write_text("in\n1\n1\n0\n0\n")
    code, out, err = run(capsys, "layout-sim", "primitive:wire", "--stimuli", str(stim))
    assert code == 0
    assert "converged" in err
    assert out.startswith("tick,")


def test_layout_sim_unknown_primitive(capsys, tmp_path):
    stim = tmp_path / "s.txt"
    stim.write_text("in\n1\n")
    assert run(capsys, "layout-sim", "primitive:nope", "--stimuli", str(stim))[0] == 2


def test_counter_defaults_to_two_stages(capsys):
    code, out, _ = run(capsys, "build", "counter_shift")
    assert code == 0 and out.startswith("# counter_shift:2: latency 27")
    assert run(capsys, "build", "counter_shift", "--n", "0")[0] == 2
