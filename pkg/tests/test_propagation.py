import io
import math

import numpy as np
import pytest
from pytest import approx

from crackwake import (
    Bimaterial,
    CrackState,
    Defect,
    DegenerateA0,
    Loading,
    PointForce,
    TipReachesDefect,
    TipReachesLoad,
    advance_increment,
    coeff_a0,
    delta_k_total,
    neutral_pair_a,
    propagate,
    step,
    three_point_preset,
    write_trace_csv,
)

from helpers import sym_pair_at


def pair_a_state(phi1, alpha1, bm, a=3.0, b=0.0):
    mc = Defect("microcrack", d=1.0, phi=phi1, alpha=alpha1, l_a=0.1)
    rl = neutral_pair_a(mc)
    return CrackState(0.0, (mc, rl), three_point_preset(1.0, a, b), bm)


def test_advance_increment_no_defects(bm_equal):
    state = CrackState(0.0, (), sym_pair_at(3.0), bm_equal)
    assert advance_increment(state) == 0.0


def test_advance_increment_matches_direct_formula(bm_equal):
    state = pair_a_state(math.pi / 8, math.pi / 4, bm_equal)
    loading = state.current_loading()
    total = delta_k_total(state.current_defects(), loading, bm_equal).total
    a3 = coeff_a0(loading, bm_equal)
    assert advance_increment(state) == approx(-2.0 * total / a3, rel=1e-12)


def test_advance_increment_doubles_with_dipole(bm_equal):
    mc = Defect("microcrack", d=1.0, phi=0.4, alpha=0.3, l_a=0.1)
    single = CrackState(0.0, (mc,), sym_pair_at(3.0), bm_equal)
    double = CrackState(0.0, (mc, mc), sym_pair_at(3.0), bm_equal)
    assert advance_increment(double) == approx(2.0 * advance_increment(single), rel=1e-15)


def test_advance_increment_degenerate_a0(bm_equal):
    # weights chosen so the second-order kernel sum cancels while K0 does not
    forces = []
    for x1, p in ((-1.0, 1.0), (-4.0, -8.0)):
        forces.append(PointForce(x1, "+", p))
        forces.append(PointForce(x1, "-", p))
    loading = Loading(tuple(forces))
    assert coeff_a0(loading, bm_equal) == approx(0.0, abs=1e-16)
    state = CrackState(0.0, (Defect("microcrack", d=1.0, phi=0.4, alpha=0.3, l_a=0.1),), loading, bm_equal)
    with pytest.raises(DegenerateA0):
        advance_increment(state)


def test_step_geometry(bm_equal):
    defect = Defect.from_cartesian("microcrack", 1.0, 1.0, alpha=0.0, l_a=0.1)
    state = CrackState(0.0, (defect,), sym_pair_at(3.0), bm_equal)
    assert step(state, 0.0) == state
    moved = step(state, 1.0)
    (current,) = moved.current_defects()
    assert current.d == approx(1.0)
    assert current.phi == approx(math.pi / 2)


def test_step_guards(bm_equal):
    defect = Defect.from_cartesian("microcrack", 1.0, 0.01, alpha=0.0, l_a=0.1)
    state = CrackState(0.0, (defect,), sym_pair_at(3.0), bm_equal)
    with pytest.raises(TipReachesDefect):
        step(state, 1.0)
    no_defect = CrackState(0.0, (), sym_pair_at(3.0), bm_equal)
    with pytest.raises(TipReachesLoad):
        step(no_defect, -4.0)


def test_state_rejects_load_ahead_of_tip(bm_equal):
    with pytest.raises(TipReachesLoad):
        CrackState(-5.0, (), sym_pair_at(3.0), bm_equal)


def test_propagate_no_defects_arrests_immediately(bm_equal):
    trace = propagate(CrackState(0.0, (), sym_pair_at(3.0), bm_equal), max_iter=10)
    assert trace.verdict == "arrest"
    assert trace.elongation == 0.0
    assert len(trace.increments) == 0
    assert len(trace.phi) == 1 and trace.flags[-1] == 1


def test_propagate_shielded_start_arrests_without_retreat(bm_equal):
    # rigid line at phi = pi/2 shields the tip: first increment is negative
    rl = Defect("rigid_line", d=1.0, phi=math.pi / 2, alpha=0.0, l_a=0.1)
    state = CrackState(0.0, (rl,), sym_pair_at(3.0), bm_equal)
    assert advance_increment(state) < 0.0
    trace = propagate(state, max_iter=10)
    assert trace.verdict == "arrest"
    assert trace.elongation == 0.0
    assert trace.phi[0] < 0.0


def test_propagate_elongation_is_prefix_sum(bm_equal):
    trace = propagate(pair_a_state(math.pi / 8, math.pi / 4, bm_equal), max_iter=1000)
    assert trace.verdict == "arrest"
    running = 0.0
    for i, phi in enumerate(trace.increments):
        running += phi
        assert trace.x[i] == running
    assert trace.elongation == running
    assert trace.x[-2] == trace.x[-1]  # terminal row repeats the elongation
    assert len(trace.increments) == len(trace.phi) - 1


def test_propagate_arrest_is_neutral_configuration(bm_equal):
    trace = propagate(pair_a_state(math.pi / 8, math.pi / 4, bm_equal), max_iter=1000)
    arrest_tol = 1e-8  # d_ref = 1
    assert abs(trace.dk_total[-1]) < 0.5 * arrest_tol * abs(trace.a0[-1])


def test_propagate_max_iterations_verdict(bm_equal):
    trace = propagate(pair_a_state(math.pi / 8, math.pi / 4, bm_equal), max_iter=5)
    assert trace.verdict == "max_iterations"
    assert len(trace.increments) == 5
    assert trace.flags[-1] == 3


def test_propagate_deterministic(bm_equal):
    state = pair_a_state(math.pi / 8, 3 * math.pi / 8, bm_equal)
    t1 = propagate(state, max_iter=2000)
    t2 = propagate(state, max_iter=2000)
    for name in ("increments", "phi", "x", "dk_total", "k0", "a0", "flags"):
        assert np.array_equal(getattr(t1, name), getattr(t2, name))
    buf1, buf2 = io.StringIO(), io.StringIO()
    write_trace_csv(t1, buf1)
    write_trace_csv(t2, buf2)
    assert buf1.getvalue() == buf2.getvalue()


def test_trace_csv_format(bm_equal):
    trace = propagate(pair_a_state(math.pi / 8, math.pi / 4, bm_equal), max_iter=50)
    buf = io.StringIO()
    write_trace_csv(trace, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "iter,phi,x,dK_total,K0,A0,verdict_flag"
    assert len(lines) == len(trace.phi) + 1
    first = lines[1].split(",")
    assert first[0] == "0"
    assert float(first[1]) == approx(trace.phi[0], rel=1e-8)
    assert lines[-1].split(",")[-1] in {"1", "2", "3"}


def test_generic_engine_handles_distributed_loads(bm_equal):
    from helpers import hat_load

    loading = Loading((), hat_load(-3.0, 0.5, avg_coeff=-1.0, jump_coeff=0.0))
    state = CrackState(0.0, (Defect("microcrack", d=1.0, phi=0.4, alpha=0.3, l_a=0.1),), loading, bm_equal)
    phi0 = advance_increment(state)
    assert phi0 > 0.0
    trace = propagate(state, max_iter=3)
    assert trace.verdict == "max_iterations"
    assert trace.phi[0] == phi0
