"""Quasi-static crack advance along the interface.

Defects and load stations are fixed in space (frame anchored at the
initial tip position, tip starts at x = 0); only the tip abscissa
moves.  Each iteration balances the defect-induced SIF perturbation
against the tip-advance term, giving the increment
phi = -2 * sum(dK_j) / A0 at the current geometry.  Negative
increments mean a shielded tip: the crack arrests, it does not
retreat.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass, replace

import numpy as np

from .defects import Defect, dipole_matrix
from .errors import DegenerateA0, TipReachesDefect, TipReachesLoad, ValidationError
from .loading import Bimaterial, DistributedLoad, Loading, PointForce, decompose
from .perturbation import delta_k_total
from .tipfields import SQRT_2_OVER_PI, _grad_station_sum, coeff_a0, sif_k0

STEADY_REL = 1e-6
STEADY_WINDOW = 50

ARREST_FLAG = 1
STEADY_FLAG = 2
MAX_ITER_FLAG = 3


@dataclass(frozen=True)
class CrackState:
    """Tip position plus the space-fixed defects, loading and materials.

    Defect polar coordinates and load stations are measured from the
    frame origin, where the tip conventionally starts; tip-relative
    geometry is recomputed from tip_x on demand.
    """

    tip_x: float
    defects: tuple[Defect, ...]
    loading: Loading
    bimaterial: Bimaterial

    def __post_init__(self):
        object.__setattr__(self, "defects", tuple(self.defects))
        support = self.loading.support_max()
        if support is not None and support >= self.tip_x:
            raise TipReachesLoad(
                f"loading support reaches x = {support:g}, not behind tip at {self.tip_x:g}"
            )

    def current_defects(self) -> tuple[Defect, ...]:
        """Defects with (d, phi) recomputed relative to the current tip."""
        out = []
        for df in self.defects:
            dx = df.x - self.tip_x
            out.append(replace(df, d=math.hypot(dx, df.y), phi=math.atan2(df.y, dx)))
        return tuple(out)

    def current_loading(self) -> Loading:
        """Loading with stations shifted into tip-relative coordinates."""
        return _shift_loading(self.loading, self.tip_x)


def _shift_loading(loading: Loading, tip_x: float) -> Loading:
    if tip_x == 0.0:
        return loading
    forces = tuple(
        PointForce(f.x1 - tip_x, f.face, f.magnitude) for f in loading.forces
    )
    dist = loading.distributed
    if dist is not None:
        dist = DistributedLoad(tuple(x - tip_x for x in dist.x), dist.avg, dist.jump)
    return Loading(forces, dist)


@dataclass(frozen=True)
class PropagationTrace:
    """Per-iteration record of a propagation run.

    increments holds the applied advances only, so elongation equals
    their prefix sum exactly.  The row arrays keep one entry per
    iteration including the terminal evaluation that triggered the
    verdict (an arrest-triggering increment is recorded but never
    applied, its row repeats the previous elongation).
    """

    increments: np.ndarray
    elongation: float
    verdict: str
    iters: np.ndarray
    phi: np.ndarray
    x: np.ndarray
    dk_total: np.ndarray
    k0: np.ndarray
    a0: np.ndarray
    flags: np.ndarray


class _Engine:
    """Per-run evaluator of (K0, A0, dK_j) as a function of tip position.

    Point-force loadings run on a flat float path; a distributed part
    falls back to the generic quadrature operations per iteration.
    """

    def __init__(self, state: CrackState):
        bm = state.bimaterial
        self.bm = bm
        self.mu_plus = bm.mu_plus
        self.mu_minus = bm.mu_minus
        self.mu_sum = bm.mu_sum
        self.eta = bm.contrast
        self.mu_fac = bm.mu_plus * bm.mu_minus / bm.mu_sum
        self.base_loading = state.loading
        self.generic = state.loading.distributed is not None
        self.orig_defects = state.defects
        dec = decompose(state.loading)
        self.stations = [(s.x1, s.avg, s.jump) for s in dec.stations]
        self.defects = []
        for df in state.defects:
            m = dipole_matrix(df)
            self.defects.append((df.x, df.y, m.m11, m.m12, m.m22, df.l_a, df.kind))
        dists = [math.hypot(x - state.tip_x, y) for x, y, *_ in self.defects]
        self.d_ref = min(dists) if dists else 1.0

    def evaluate(self, tip: float):
        """Return (k0, a3, per-defect dK tuple, dK total) at tip."""
        if self.generic:
            loading = _shift_loading(self.base_loading, tip)
            cur = []
            for df in self.orig_defects:
                dx = df.x - tip
                dj = math.hypot(dx, df.y)
                if dj <= df.l_a:
                    raise TipReachesDefect(
                        f"tip at {tip:g} is within {df.l_a:g} of the {df.kind} "
                        f"centered at ({df.x:g}, {df.y:g})"
                    )
                cur.append(replace(df, d=dj, phi=math.atan2(df.y, dx)))
            k0 = sif_k0(loading, self.bm)
            a3 = coeff_a0(loading, self.bm)
            res = delta_k_total(cur, loading, self.bm)
            return k0, a3, res.per_defect, res.total

        eta = self.eta
        k0s = 0.0
        a0s = 0.0
        for xs, avg, jump in self.stations:
            r = tip - xs
            if r <= 0.0:
                raise TipReachesLoad(f"tip at {tip:g} reached the load station at {xs:g}")
            w = avg + 0.5 * eta * jump
            inv = 1.0 / math.sqrt(r)
            k0s += w * inv
            a0s += w * inv / r
        k0 = -SQRT_2_OVER_PI * k0s
        a3 = SQRT_2_OVER_PI * a0s

        per = []
        for xd, yd, m11, m12, m22, la, kind in self.defects:
            dx = xd - tip
            dj = math.hypot(dx, yd)
            if dj <= la:
                raise TipReachesDefect(
                    f"tip at {tip:g} is within {la:g} of the {kind} centered at ({xd:g}, {yd:g})"
                )
            phij = math.atan2(yd, dx)
            mu_b = self.mu_plus if phij >= 0.0 else self.mu_minus
            g1, g2 = _grad_station_sum(
                ((xs - tip, a, j) for xs, a, j in self.stations),
                dj, phij, mu_b, self.mu_sum, eta,
            )
            cf = 0.5 / dj**1.5
            c1 = -cf * math.sin(1.5 * phij)
            c2 = cf * math.cos(1.5 * phij)
            mc1 = m11 * c1 + m12 * c2
            mc2 = m12 * c1 + m22 * c2
            per.append(-SQRT_2_OVER_PI * self.mu_fac * (g1 * mc1 + g2 * mc2))
        return k0, a3, tuple(per), math.fsum(per)


def advance_increment(state: CrackState) -> float:
    """Quasi-static advance of the tip at the current geometry.

    Zero without defects; DegenerateA0 when the second-order
    coefficient is too small to balance a non-zero perturbation.
    """
    engine = _Engine(state)
    k0, a3, _, total = engine.evaluate(state.tip_x)
    return _increment(total, a3, k0, engine.d_ref)


def _increment(total: float, a3: float, k0: float, d_ref: float) -> float:
    if total == 0.0:
        return 0.0
    if abs(a3) < 1e-14 * abs(k0) / d_ref:
        raise DegenerateA0(f"|A0| = {abs(a3):.3e} too small against K0 = {k0:.3e}")
    return -2.0 * total / a3


def step(state: CrackState, phi: float) -> CrackState:
    """Advance the tip by phi, keeping defects and loads fixed in space."""
    if not math.isfinite(phi):
        raise ValidationError(f"advance must be finite, got {phi}")
    tip = state.tip_x + phi
    support = state.loading.support_max()
    if support is not None and support >= tip:
        raise TipReachesLoad(f"tip at {tip:g} entered the loading support (max x = {support:g})")
    for df in state.defects:
        dj = math.hypot(df.x - tip, df.y)
        if dj <= df.l_a:
            raise TipReachesDefect(
                f"tip at {tip:g} is within {df.l_a:g} of the {df.kind} at ({df.x:g}, {df.y:g})"
            )
    return replace(state, tip_x=tip)


def propagate(
    state: CrackState,
    max_iter: int = 10_000,
    arrest_tol: float | None = None,
) -> PropagationTrace:
    """Iterate advance_increment/step until arrest, steady state, or the
    iteration budget runs out.

    Arrest: increment below arrest_tol (negative counts as arrested).
    Steady state: relative increment change below 1e-6 for 50
    consecutive iterations.  Defaults: arrest_tol = 1e-8 times the
    smallest initial defect distance.
    """
    if max_iter < 1:
        raise ValidationError(f"max_iter must be >= 1, got {max_iter}")
    engine = _Engine(state)
    if arrest_tol is None:
        arrest_tol = 1e-8 * engine.d_ref
    if not arrest_tol > 0.0:
        raise ValidationError(f"arrest_tol must be positive, got {arrest_tol}")

    tip = state.tip_x
    elong = 0.0
    increments = array("d")
    col_phi = array("d")
    col_x = array("d")
    col_dk = array("d")
    col_k0 = array("d")
    col_a0 = array("d")
    flags = array("b")
    prev_phi = None
    streak = 0
    verdict = "max_iterations"

    for _ in range(max_iter):
        k0, a3, _, total = engine.evaluate(tip)
        phi = _increment(total, a3, k0, engine.d_ref)
        col_phi.append(phi)
        col_dk.append(total)
        col_k0.append(k0)
        col_a0.append(a3)
        if phi < arrest_tol:
            col_x.append(elong)
            flags.append(ARREST_FLAG)
            verdict = "arrest"
            break
        tip += phi
        elong += phi
        increments.append(phi)
        col_x.append(elong)
        if prev_phi is not None and abs(phi - prev_phi) < STEADY_REL * phi:
            streak += 1
        else:
            streak = 0
        prev_phi = phi
        if streak >= STEADY_WINDOW:
            flags.append(STEADY_FLAG)
            verdict = "steady_state"
            break
        flags.append(0)
    else:
        if flags:
            flags[-1] = MAX_ITER_FLAG

    n = len(col_phi)
    return PropagationTrace(
        increments=np.frombuffer(increments, dtype=float).copy(),
        elongation=elong,
        verdict=verdict,
        iters=np.arange(n),
        phi=np.frombuffer(col_phi, dtype=float).copy(),
        x=np.frombuffer(col_x, dtype=float).copy(),
        dk_total=np.frombuffer(col_dk, dtype=float).copy(),
        k0=np.frombuffer(col_k0, dtype=float).copy(),
        a0=np.frombuffer(col_a0, dtype=float).copy(),
        flags=np.frombuffer(flags, dtype=np.int8).astype(int),
    )


def write_trace_csv(trace: PropagationTrace, fh) -> None:
    """Emit the trace with the fixed header, one row per iteration."""
    fh.write("iter,phi,x,dK_total,K0,A0,verdict_flag\n")
    for i in range(len(trace.phi)):
        fh.write(
            f"{trace.iters[i]},{trace.phi[i]:.9g},{trace.x[i]:.9g},"
            f"{trace.dk_total[i]:.9g},{trace.k0[i]:.9g},{trace.a0[i]:.9g},"
            f"{trace.flags[i]}\n"
        )
