from __future__ import annotations

import math

import pytest

from gridctl import case_io
from gridctl.case_io import (DanglingBranch, MalformedCase, SamplingConfig,
                             build_grid, parse_case)
from gridctl.pwl import NonConvexCost

from conftest import ALL_CASES, get_case

# (buses, distinct lines, generators, total demand) per bundled case
EXPECTED = {
    "case6ww": (6, 11, 3, 210.00),
    "case9": (9, 9, 3, 315.00),
    "case14": (14, 20, 5, 259.00),
    "case30": (30, 41, 6, 189.20),
    "case39": (39, 46, 10, 6254.23),
    "case57": (57, 78, 7, 1250.80),
    "case118": (118, 179, 54, 4242.00),
}

MINI = """
function mpc = mini
mpc.baseMVA = 100;
mpc.bus = [
    1 3 0   0 0 0 1 1 0 0 1 1.1 0.9;
    2 1 10  5 0 0 1 1 0 0 1 1.1 0.9;  % consumer
];
mpc.gen = [
    1 0 0 10 -10 1 100 1 50 0;
];
mpc.branch = [
    1 2 0.01 0.1 0 25 25 25 0 0 1;
];
mpc.gencost = [
    2 0 0 3 0.02 2 0;
];
"""


def test_case30_raw_counts():
    raw = parse_case(case_io.read_case_text("case30"))
    assert len(raw.buses) == 30
    assert len(raw.branches) == 41
    assert len(raw.generators) == 6


def test_case57_total_demand():
    raw = parse_case(case_io.read_case_text("case57"))
    assert raw.total_demand == pytest.approx(1250.80, abs=5e-3)


@pytest.mark.parametrize("name", ALL_CASES)
def test_built_grids_match_instance_statistics(name):
    nb, nl, ng, pd = EXPECTED[name]
    grid = get_case(name)
    assert len(grid.buses) == nb
    assert len(grid.branches) == nl
    assert len(grid.generators) == ng
    assert grid.total_demand == pytest.approx(pd, abs=5e-3)


def test_demand_round_trip_is_exact():
    for name in ALL_CASES:
        raw = parse_case(case_io.read_case_text(name))
        grid = get_case(name)
        assert grid.total_demand == sum(b.demand for b in raw.buses)


def test_dangling_branch_rejected():
    bad = MINI.replace("1 2 0.01 0.1", "1 999 0.01 0.1")
    with pytest.raises(DanglingBranch):
        parse_case(bad)


def test_missing_matrix_rejected():
    bad = MINI.replace("mpc.gencost", "mpc.ignored")
    with pytest.raises(MalformedCase, match="gencost"):
        parse_case(bad)


def test_non_numeric_cell_reports_line():
    bad = MINI.replace("1 2 0.01 0.1 0 25", "1 2 oops 0.1 0 25")
    with pytest.raises(MalformedCase, match="line"):
        parse_case(bad)


def test_short_row_rejected():
    bad = MINI.replace("1 2 0.01 0.1 0 25 25 25 0 0 1", "1 2 0.01")
    with pytest.raises(MalformedCase, match="column"):
        parse_case(bad)


def test_mini_grid_shapes():
    grid = build_grid(parse_case(MINI), SamplingConfig(points=3))
    assert grid.buses == (1, 2)
    assert grid.consumers == {2: 10.0}
    assert set(grid.generators) == {1}
    br = grid.branches[0]
    assert br.capacity == 25.0
    assert br.susceptance == pytest.approx(100.0 / 0.1)


def test_generator_cost_sampling_secant_construction():
    grid = build_grid(parse_case(MINI), SamplingConfig(points=3))
    cost = grid.generators[1].cost
    # 0.02 p^2 + 2 p on [0, 50]: secants over [0,25] and [25,50]
    assert len(cost.pieces) == 2
    assert cost.pieces[0][0] == pytest.approx(2 + 0.02 * 25)
    assert cost.pieces[1][0] == pytest.approx(2 + 0.02 * 75)
    slopes = [a for a, _ in cost.pieces]
    assert slopes == sorted(slopes)


def test_linear_gencost_single_piece():
    text = MINI.replace("2 0 0 3 0.02 2 0", "2 0 0 2 5 0")
    grid = build_grid(parse_case(text))
    assert grid.generators[1].cost.pieces == ((5.0, 0.0),)


def test_pwl_gencost_model_1():
    text = MINI.replace("2 0 0 3 0.02 2 0", "1 0 0 3 0 0 20 50 50 200")
    grid = build_grid(parse_case(text))
    cost = grid.generators[1].cost
    assert cost(20.0) == pytest.approx(50.0)
    assert cost(50.0) == pytest.approx(200.0)


def test_unsupported_cost_model_rejected():
    text = MINI.replace("2 0 0 3 0.02 2 0", "3 0 0 3 0.02 2 0")
    with pytest.raises(MalformedCase, match="cost model"):
        parse_case(text)


def test_nonconvex_cost_rejected():
    text = MINI.replace("2 0 0 3 0.02 2 0", "2 0 0 3 -0.02 9 0")
    with pytest.raises(NonConvexCost):
        build_grid(parse_case(text))


def test_zero_resistance_line_is_lossless():
    text = MINI.replace("1 2 0.01 0.1", "1 2 0 0.1")
    grid = build_grid(parse_case(text))
    assert grid.branches[0].loss(17.3) == 0.0


def test_zero_rate_a_means_unlimited():
    text = MINI.replace("1 2 0.01 0.1 0 25", "1 2 0.01 0.1 0 0")
    grid = build_grid(parse_case(text))
    assert math.isinf(grid.branches[0].capacity)


def test_loss_curve_is_sampled_ohmic_loss():
    grid = build_grid(parse_case(MINI), SamplingConfig(points=5))
    loss = grid.branches[0].loss
    # domain capped at min(capacity, 2 * total demand) = min(25, 20) = 20
    assert loss.domain_max == pytest.approx(20.0)
    for k in range(5):
        f = 20.0 * k / 4
        assert loss(f) == pytest.approx(0.01 * f * f / 100.0, abs=1e-12)


def test_parallel_circuits_merge():
    text = MINI.replace(
        "    1 2 0.01 0.1 0 25 25 25 0 0 1;",
        "    1 2 0.01 0.1 0 25 25 25 0 0 1;\n    1 2 0.02 0.2 0 15 15 15 0 0 1;",
    )
    grid = build_grid(parse_case(text))
    assert len(grid.branches) == 1
    br = grid.branches[0]
    assert br.susceptance == pytest.approx(100 / 0.1 + 100 / 0.2)
    assert br.capacity == pytest.approx(40.0)
    # parallel resistances: 1/(1/0.01 + 1/0.02); PWL exact at sample points
    r_eq = 1.0 / (1 / 0.01 + 1 / 0.02)
    assert br.loss.domain_max == pytest.approx(20.0)  # min(40, 2 * demand)
    assert br.loss(15.0) == pytest.approx(r_eq * 15 * 15 / 100, rel=1e-9)


def test_case57_and_case118_have_merged_parallels():
    raw57 = parse_case(case_io.read_case_text("case57"))
    raw118 = parse_case(case_io.read_case_text("case118"))
    assert len(raw57.branches) == 80  # two parallel circuit pairs in the file
    assert len(raw118.branches) == 186  # seven parallel circuit pairs


def test_bundled_case_names():
    assert case_io.bundled_case_names() == sorted(ALL_CASES)
