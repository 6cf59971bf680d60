"""Anti-dissipative cell-average updates and their flux algebra."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from slub.grids import Alignment, Field, build_grid, init_cell_averages
from slub.problems import ic_jump
from slub.ultrabee import (
    CourantNumbers,
    LimiterState,
    VelocityPair,
    cfl_check,
    ub_flux_left,
    ub_flux_limited,
    ub_flux_right,
    ub_step,
    ub_step_single,
    ub_step_values,
)

TRIPLES = st.tuples(
    st.floats(min_value=-5.0, max_value=5.0),
    st.floats(min_value=-5.0, max_value=5.0),
    st.floats(min_value=-5.0, max_value=5.0),
)
CELLS = hnp.arrays(
    dtype=np.float64,
    shape=st.integers(min_value=4, max_value=60),
    elements=st.floats(min_value=-10.0, max_value=10.0, allow_nan=False),
)


def test_flux_left_pinned_values() -> None:
    assert ub_flux_left(0.0, 1.0, 1.0, 0.5) == 1.0
    assert ub_flux_left(0.0, 0.0, 1.0, 0.5) == 0.0
    # downwind value clamps to the steep interpolating bracket
    assert ub_flux_left(0.0, 1.0, 5.0, 0.5) == 2.0
    # at rest: pass the downwind value through unless the cell is flat
    assert ub_flux_left(0.0, 1.0, 5.0, 0.0) == 5.0
    assert ub_flux_left(1.0, 1.0, 5.0, 0.0) == 1.0
    with pytest.raises(ValueError):
        ub_flux_left(0.0, 1.0, 1.0, -0.5)


def test_flux_right_pinned_values() -> None:
    assert ub_flux_right(5.0, 1.0, 0.0, -0.5) == 2.0
    assert ub_flux_right(1.0, 0.0, 0.0, -0.5) == 0.0
    with pytest.raises(ValueError):
        ub_flux_right(0.0, 1.0, 1.0, 0.5)


@given(triple=TRIPLES, nu=st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=300, deadline=None)
def test_flux_brackets_interpolating_pair(triple, nu: float) -> None:
    """Either flux stays between the two cell values it interpolates
    (the cell and its downwind neighbor)."""
    prev, cur, nxt = triple
    f = ub_flux_left(prev, cur, nxt, nu)
    assert min(cur, nxt) - 1e-12 <= f <= max(cur, nxt) + 1e-12
    g = ub_flux_right(nxt, cur, prev, -nu)
    assert min(cur, nxt) - 1e-12 <= g <= max(cur, nxt) + 1e-12


@given(v=CELLS, nu=st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=200, deadline=None)
def test_step_mirror_symmetry(v: np.ndarray, nu: float) -> None:
    """Reversing space and negating the velocity commute with the step."""
    forward = ub_step_values(v, nu)
    mirrored = ub_step_values(v[::-1], -nu)[::-1]
    np.testing.assert_allclose(forward, mirrored, rtol=0, atol=1e-12)


@given(v=CELLS, nu=st.floats(min_value=-1.0, max_value=1.0))
@settings(max_examples=200, deadline=None)
def test_step_is_tvd_and_conservative(v: np.ndarray, nu: float) -> None:
    v = np.concatenate([[0.0, 0.0], v, [0.0, 0.0]])  # compact support
    out = ub_step_values(v, nu)
    tv = lambda u: np.sum(np.abs(np.diff(u)))
    assert tv(out) <= tv(v) + 1e-10 * (1.0 + tv(v))
    assert out.sum() == pytest.approx(v.sum(), abs=1e-9 * (1.0 + np.abs(v).sum()))


def test_step_transports_interface_aligned_jump_exactly() -> None:
    """Cell averages of a step profile translate without smearing for any
    admissible Courant number."""
    g = build_grid(-2.0, 4.0, 60)  # room downstream so the box stays interior
    nu = 0.7
    steps = 20
    v = init_cell_averages(g, ic_jump).values
    for _ in range(steps):
        v = ub_step_values(v, nu)
    shift = nu * steps * g.dx
    prim = ic_jump.antiderivative
    exact = np.diff(prim(g.nodes - shift)) / g.dx
    np.testing.assert_allclose(v, exact, atol=1e-13)


def test_step_rejects_cfl_violation() -> None:
    with pytest.raises(ValueError, match="CFL"):
        ub_step_values(np.zeros(6), 1.2)


def test_step_accepts_per_cell_courant_numbers() -> None:
    v = np.array([0.0, 1.0, 1.0, 0.0, 0.0])
    nus = np.array([0.5, 0.5, 0.5, 0.5, 0.5])
    np.testing.assert_allclose(ub_step_values(v, nus), ub_step_values(v, 0.5))


def test_ub_step_single_requires_cell_alignment() -> None:
    g = build_grid(0.0, 1.0, 4)
    f = Field(g, Alignment.CELL, np.array([0.0, 1.0, 0.0, 0.0]))
    out = ub_step_single(f, 0.5)
    assert out.alignment is Alignment.CELL
    with pytest.raises(ValueError, match="cell-aligned"):
        ub_step_single(Field(g, Alignment.NODE, np.zeros(5)), 0.5)


def test_velocity_pair_samples_constants_and_callables() -> None:
    pair = VelocityPair(f_min=-1.0, f_max=lambda x: np.asarray(x) ** 2)
    lo, hi = pair.sample(np.array([0.0, 2.0]))
    np.testing.assert_array_equal(lo, [-1.0, -1.0])
    np.testing.assert_array_equal(hi, [0.0, 4.0])


def test_cfl_check_builds_courant_numbers() -> None:
    g = build_grid(0.0, 1.0, 10)
    cn = cfl_check(VelocityPair(-1.0, 1.0), g, dt=0.05)
    np.testing.assert_allclose(cn.nu_min, -0.5)
    np.testing.assert_allclose(cn.nu_max, 0.5)
    nmin, nmax = cn.per_cell(g.n_cells)
    assert nmin.size == g.n_cells == nmax.size
    with pytest.raises(ValueError, match="CFL"):
        cfl_check(VelocityPair(-1.0, 1.0), g, dt=0.2)
    with pytest.raises(ValueError):
        cfl_check(VelocityPair(-1.0, 1.0), g, dt=0.0)


def test_two_velocity_step_is_min_of_singles() -> None:
    g = build_grid(-2.0, 2.0, 20)
    f = init_cell_averages(g, ic_jump)
    cn = cfl_check(VelocityPair(-1.0, 1.0), g, dt=0.1)
    out = ub_step(f, cn)
    lo = ub_step_values(f.values, cn.nu_min[:-1])
    hi = ub_step_values(f.values, cn.nu_max[:-1])
    np.testing.assert_array_equal(out.values, np.minimum(lo, hi))


def test_limited_flux_matches_clamp_form_on_monotone_data() -> None:
    """On the monotone triple (0, 1, 2) with nu = 1/2 the limited form
    gives 1 + (1/2)/phi with phi = 2/(1-nu)... = 1.125."""
    g = build_grid(0.0, 1.0, 3)
    f = Field(g, Alignment.CELL, np.array([0.0, 1.0, 2.0]))
    flux, state = ub_flux_limited(f, 1, 0.5)
    assert flux == pytest.approx(1.125)
    assert not state.fell_back and state.r == pytest.approx(1.0)
    clamp = ub_flux_left(0.0, 1.0, 2.0, 0.5)
    assert min(1.0, 2.0) <= flux <= max(1.0, 2.0)
    assert min(1.0, 2.0) <= clamp <= max(1.0, 2.0)


def test_limited_flux_flags_degenerate_cases() -> None:
    g = build_grid(0.0, 1.0, 3)
    # flat downwind difference: r undefined, flux = cell value
    flux, state = ub_flux_limited(Field(g, Alignment.CELL, np.array([0.0, 1.0, 1.0])), 1, 0.5)
    assert flux == 1.0 and state.phi == 0.0
    # slope-sign change: phi = 0, falls back to the clamp form
    f = Field(g, Alignment.CELL, np.array([2.0, 1.0, 3.0]))
    flux, state = ub_flux_limited(f, 1, 0.5)
    assert state.fell_back
    assert flux == ub_flux_left(2.0, 1.0, 3.0, 0.5)
    with pytest.raises(ValueError):
        ub_flux_limited(f, 1, 0.0)


@given(triple=TRIPLES, nu=st.floats(min_value=0.01, max_value=0.99))
@settings(max_examples=200, deadline=None)
def test_limited_flux_always_in_local_range(triple, nu: float) -> None:
    """Whether the limited formula or the fallback fires, the returned
    flux stays within the three-cell range."""
    g = build_grid(0.0, 1.0, 3)
    f = Field(g, Alignment.CELL, np.array(triple, dtype=float))
    flux, state = ub_flux_limited(f, 1, nu)
    prev, cur, nxt = triple
    lo = min(cur, nxt) - 1e-12
    hi = max(cur, nxt) + 1e-12
    if not state.fell_back and not np.isnan(state.r):
        lo = min(prev, cur, nxt) - 1e-12
        hi = max(prev, cur, nxt) + 1e-12
    assert lo <= flux <= hi
