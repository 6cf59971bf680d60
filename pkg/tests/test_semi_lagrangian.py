"""Node-value transport updates and the Hopf-Lax machinery."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from slub.grids import Alignment, Field, build_grid, init_point_values
from slub.semi_lagrangian import (
    ControlSet,
    Hamiltonian,
    LegendreTable,
    advect_const_values,
    hj_update_values,
    legendre_transform,
    p1_interpolate,
    sl_advection_step,
    sl_advection_step_var,
    sl_hj_step,
)

FIELDS = hnp.arrays(
    dtype=np.float64,
    shape=st.integers(min_value=3, max_value=60),
    elements=st.floats(min_value=-10.0, max_value=10.0, allow_nan=False),
)
COURANTS = st.floats(min_value=-1.0, max_value=1.0)


def test_advect_const_convex_combination() -> None:
    v = np.array([0.0, 1.0, 0.0, 2.0])
    out = advect_const_values(v, 0.25)
    np.testing.assert_allclose(out, [0.0, 0.75, 0.25, 1.5])
    out_neg = advect_const_values(v, -0.25)
    np.testing.assert_allclose(out_neg, [0.25, 0.75, 0.5, 2.0])


def test_advect_const_unit_courant_shifts_exactly() -> None:
    v = np.array([3.0, 1.0, 4.0, 1.0, 5.0])
    np.testing.assert_array_equal(advect_const_values(v, 1.0), [3.0, 3.0, 1.0, 4.0, 1.0])
    np.testing.assert_array_equal(advect_const_values(v, -1.0), [1.0, 4.0, 1.0, 5.0, 5.0])
    np.testing.assert_array_equal(advect_const_values(v, 0.0), v)


def test_advect_const_rejects_cfl_violation() -> None:
    with pytest.raises(ValueError, match="Courant"):
        advect_const_values(np.zeros(4), 1.5)


@given(v=FIELDS, nu=COURANTS)
@settings(max_examples=200, deadline=None)
def test_advect_const_is_monotone_and_tvd(v: np.ndarray, nu: float) -> None:
    """Each output lies in the hull of its two upwind inputs; total
    variation does not grow."""
    out = advect_const_values(v, nu)
    p = np.pad(v, 1, mode="edge")
    other = p[:-2] if nu >= 0 else p[2:]
    lo = np.minimum(v, other) - 1e-12
    hi = np.maximum(v, other) + 1e-12
    assert np.all(out >= lo) and np.all(out <= hi)
    tv = lambda u: np.sum(np.abs(np.diff(u)))
    assert tv(out) <= tv(v) + 1e-10 * (1.0 + tv(v))


def test_sl_advection_step_wraps_field() -> None:
    g = build_grid(0.0, 1.0, 4)
    f = Field(g, Alignment.NODE, np.array([0.0, 1.0, 0.0, 0.0, 0.0]))
    out = sl_advection_step(f, 0.5)
    np.testing.assert_allclose(out.values, [0.0, 0.5, 0.5, 0.0, 0.0])
    cell_field = Field(g, Alignment.CELL, np.zeros(4))
    with pytest.raises(ValueError, match="node-aligned"):
        sl_advection_step(cell_field, 0.5)


def test_p1_interpolate_clamps_outside() -> None:
    g = build_grid(0.0, 1.5, 3)
    f = Field(g, Alignment.NODE, np.array([1.0, 3.0, 2.0, 4.0]))
    assert p1_interpolate(f, 0.25) == pytest.approx(2.0)
    assert p1_interpolate(f, -5.0) == 1.0
    assert p1_interpolate(f, 5.0) == 4.0
    np.testing.assert_allclose(p1_interpolate(f, np.array([0.0, 0.75])), [1.0, 2.5])


def test_sl_advection_step_var_traces_feet() -> None:
    """For c(x) = -(x - 1.1) the foot of x = 0.25 with dt = 0.015385 sits
    at 0.25 - (-0.85)*dt... i.e. 0.25 - 0.85*dt downstream of the node."""
    g = build_grid(0.0, 1.0, 40)
    f = init_point_values(g, lambda x: np.asarray(x, dtype=float))
    dt = 0.015385
    out = sl_advection_step_var(f, lambda x: -(np.asarray(x) - 1.1), dt)
    j = 10
    assert g.nodes[j] == pytest.approx(0.25, abs=1e-12)
    foot = 0.25 - (-(0.25 - 1.1)) * dt
    assert foot == pytest.approx(0.2369227, abs=1e-6)
    # identity profile: interpolation returns the foot itself
    assert out.values[j] == pytest.approx(foot, abs=1e-12)


def test_sl_advection_step_var_rejects_cfl_violation() -> None:
    g = build_grid(0.0, 1.0, 4)
    f = init_point_values(g, lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    with pytest.raises(ValueError, match="CFL"):
        sl_advection_step_var(f, lambda x: np.full_like(np.asarray(x, dtype=float), 10.0), 1.0)


def test_control_set_grid() -> None:
    cs = ControlSet(-1.0, 1.0, 5)
    np.testing.assert_allclose(cs.controls, [-1.0, -0.5, 0.0, 0.5, 1.0])
    single = ControlSet(0.7, 0.7, 99)
    assert single.n == 1 and single.controls.tolist() == [0.7]
    with pytest.raises(ValueError):
        ControlSet(1.0, -1.0, 5)
    with pytest.raises(ValueError):
        ControlSet(0.0, 1.0, 0)


def test_legendre_transform_two_velocity_hamiltonian() -> None:
    """H(p) = max(-p, p): conjugate vanishes on [-1, 1], is unbounded
    outside."""
    H = Hamiltonian(lambda p: np.maximum(-p, p), label="max(-p,p)")
    table = legendre_transform(H, ControlSet(-2.0, 2.0, 9))
    inside = np.abs(table.controls) <= 1.0
    np.testing.assert_allclose(table.values[inside], 0.0, atol=1e-12)
    assert np.all(np.isinf(table.values[~inside]))


def test_legendre_transform_linear_hamiltonian() -> None:
    H = Hamiltonian.linear(0.7)
    table = legendre_transform(H, ControlSet(0.7, 0.7, 1))
    assert table.values[0] == pytest.approx(0.0, abs=1e-12)
    off = legendre_transform(H, ControlSet(0.2, 0.2, 1))
    assert np.isinf(off.values[0])


def test_legendre_table_validation() -> None:
    with pytest.raises(ValueError):
        LegendreTable(np.array([0.0, 1.0]), np.array([0.0]))
    with pytest.raises(ValueError):
        LegendreTable(np.array([0.0]), np.array([np.nan]))
    t = LegendreTable(np.array([0.0, 1.0]), np.array([0.0, np.inf]))
    np.testing.assert_array_equal(t.finite_mask, [True, False])


def test_hj_update_matches_direct_minimization() -> None:
    """The tabulated update equals a brute-force min over the same
    controls."""
    g = build_grid(-2.0, 2.0, 40)
    v = np.asarray((1.0 - np.clip(g.nodes, -1, 1) ** 2) ** 4, dtype=float)
    H = Hamiltonian(lambda p: np.maximum(-p, p))
    table = legendre_transform(H, ControlSet(-1.0, 1.0, 21))
    dt = 0.05
    out = hj_update_values(v, g.nodes, table, dt)
    brute = np.full_like(v, np.inf)
    for a in table.controls:
        cand = np.interp(g.nodes - a * dt, g.nodes, v)
        brute = np.minimum(brute, cand)
    np.testing.assert_allclose(out, brute, rtol=0, atol=0)


def test_hj_update_with_single_control_is_advection() -> None:
    """A linear Hamiltonian has one feasible control; the Hopf-Lax update
    degenerates to plain transport."""
    g = build_grid(0.0, 1.0, 20)
    v = np.sin(2 * np.pi * g.nodes)
    c, dt = 0.7, 0.02
    table = legendre_transform(Hamiltonian.linear(c), ControlSet(c, c, 1))
    out = hj_update_values(v, g.nodes, table, dt)
    nu = c * dt / g.dx
    np.testing.assert_allclose(out, advect_const_values(v, nu), atol=1e-13)


def test_hj_update_rejects_all_infeasible() -> None:
    table = LegendreTable(np.array([0.0, 1.0]), np.array([np.inf, np.inf]))
    with pytest.raises(ValueError, match="feasible"):
        hj_update_values(np.zeros(4), np.arange(4.0), table, 0.1)


@given(v=FIELDS)
@settings(max_examples=100, deadline=None)
def test_hj_update_never_exceeds_local_max(v: np.ndarray) -> None:
    """An erosion step with zero running cost can only decrease values
    and never dips below the window minimum."""
    nodes = np.arange(v.size, dtype=float)
    H = Hamiltonian(lambda p: np.maximum(-p, p))
    table = legendre_transform(H, ControlSet(-1.0, 1.0, 11))
    out = hj_update_values(v, nodes, table, 0.5)
    assert np.all(out <= v + 1e-12)
    assert np.all(out >= v.min() - 1e-12)


def test_sl_hj_step_requires_node_alignment() -> None:
    g = build_grid(0.0, 1.0, 4)
    table = legendre_transform(Hamiltonian.absolute(1.0), ControlSet(-1.0, 1.0, 5))
    f = Field(g, Alignment.NODE, np.zeros(5))
    out = sl_hj_step(f, table, 0.1)
    assert out.alignment is Alignment.NODE
    with pytest.raises(ValueError, match="node-aligned"):
        sl_hj_step(Field(g, Alignment.CELL, np.zeros(4)), table, 0.1)
