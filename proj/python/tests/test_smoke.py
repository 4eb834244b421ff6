import json
import pathlib

import pytest

import bpmp_cim

DATA = pathlib.Path(__file__).resolve().parents[2] / "tests" / "data"


def test_fixture_chain():
    s = bpmp_cim.run_table_speedups(
        str(DATA / "table2_original_node_arc_n20.csv"),
        str(DATA / "table3_conditional_arc_flow_n20.csv"),
    )
    assert s["ticks"]["median"] == pytest.approx(9.5211038332103026, abs=1e-12)
    c, t, r, i = s["indices"]
    assert i == pytest.approx(8.9100576700100742, abs=1e-12)
    gci = bpmp_cim.grand_composite({10: bpmp_cim.size_index(1.52, 1.35, 1.72), 20: i}, {10: 1, 20: 10, 30: 12})
    assert gci == pytest.approx(8.2392259810008941, abs=1e-12)


def test_summarize_even_median():
    assert bpmp_cim.summarize([4.0, 1.0, 3.0, 2.0]) == {"min": 1.0, "mean": 2.5, "median": 2.5, "max": 4.0}
    with pytest.raises(ValueError):
        bpmp_cim.grand_composite({40: 1.0}, {10: 1.0})


@pytest.mark.parametrize("preset", [("node-arc", ""), ("node-arc", "t1,t2,t4,t5"), ("triples", ""), ("triples", "t10,t11")])
def test_solve_matches_oracle(preset):
    inst = bpmp_cim.generate(5, 3)
    exact = bpmp_cim.solve_exact(inst)
    got = bpmp_cim.solve(inst, *preset)
    assert got["status"] == "optimal"
    assert got["objective"] == pytest.approx(exact["objective"], abs=1e-6)


def test_cli_in_process():
    code, out, err = bpmp_cim.run_cli(["gen", "--n", "4", "--seed", "1"])
    assert code == 0 and err == ""
    assert json.loads(out) == json.loads(bpmp_cim.generate(4, 1))
    assert bpmp_cim.run_cli(["gen", "--n", "4"])[0] == 1


def _highs_objectives(path):
    highspy = pytest.importorskip("highspy")
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    assert h.readModel(str(path)) == highspy.HighsStatus.kOk
    h.run()
    assert h.getModelStatus() == highspy.HighsModelStatus.kOptimal
    mip = h.getInfo().objective_function_value
    lp = h.getLp()
    h.changeColsIntegrality(lp.num_col_, list(range(lp.num_col_)), [highspy.HighsVarType.kContinuous] * lp.num_col_)
    h.run()
    assert h.getModelStatus() == highspy.HighsModelStatus.kOptimal
    return mip, h.getInfo().objective_function_value


@pytest.mark.parametrize("fmt", ["lp", "mps"])
@pytest.mark.parametrize("formulation,techniques", [("node-arc", ""), ("node-arc", "t1,t2,t6"), ("triples", "t10")])
def test_emitted_models_agree_with_highs(tmp_path, fmt, formulation, techniques):
    inst = bpmp_cim.generate(5, 3)
    path = tmp_path / f"model.{fmt}"
    path.write_text(bpmp_cim.emit(inst, formulation, techniques, fmt))
    mip, lp = _highs_objectives(path)
    assert mip == pytest.approx(bpmp_cim.solve_exact(inst)["objective"], abs=1e-6)
    assert lp == pytest.approx(bpmp_cim.lp_relaxation(inst, formulation, techniques), abs=1e-6)
