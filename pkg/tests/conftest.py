from __future__ import annotations

import math

import pytest

from gridctl import load_case
from gridctl.grid_model import Branch, Generator, PowerGrid
from gridctl.pwl import PiecewiseLinearConvex, constant_zero

ALL_CASES = ["case6ww", "case9", "case14", "case30", "case39", "case57", "case118"]
SMALL_CASES = ["case6ww", "case9", "case14", "case30"]

_cache: dict[str, object] = {}


def get_case(name: str):
    """Build each bundled case once per session (grids are immutable)."""
    if name not in _cache:
        _cache[name] = load_case(name)
    return _cache[name]


@pytest.fixture(params=ALL_CASES)
def ieee_grid(request):
    return get_case(request.param)


def linear_cost(slope: float, cap: float = math.inf) -> PiecewiseLinearConvex:
    return PiecewiseLinearConvex(((slope, 0.0),), cap)


def two_bus_grid(capacity: float = 20.0, demand: float = 10.0, slope: float = 1.0) -> PowerGrid:
    """One generator at bus 1, one consumer at bus 2, one lossless line."""
    return PowerGrid(
        buses=[1, 2],
        branches=[Branch(1, 2, susceptance=100.0, capacity=capacity)],
        generators={1: Generator(100.0, linear_cost(slope, 100.0))},
        consumers={2: demand},
    )


def triangle_grid(b=(100.0, 100.0, 100.0), caps=(math.inf, math.inf, math.inf)) -> PowerGrid:
    """3-cycle with a generator at bus 1 and a consumer at bus 2."""
    return PowerGrid(
        buses=[1, 2, 3],
        branches=[
            Branch(1, 2, b[0], caps[0], constant_zero()),
            Branch(2, 3, b[1], caps[1], constant_zero()),
            Branch(3, 1, b[2], caps[2], constant_zero()),
        ],
        generators={1: Generator(50.0, linear_cost(2.0, 50.0))},
        consumers={2: 10.0},
    )
