"""Shared test utilities: canonical loads, mollified tables, random draws."""

import math

import numpy as np

from crackwake import Bimaterial, Defect, DistributedLoad, Loading, PointForce

# mu ratio 167/33 makes the contrast parameter exactly 0.67
MU_CONTRAST_67 = 167.0 / 33.0

BIMATERIALS = {
    0.0: Bimaterial(1.0, 1.0),
    0.67: Bimaterial(1.0, MU_CONTRAST_67),
    -0.67: Bimaterial(MU_CONTRAST_67, 1.0),
}


def sym_pair_at(a, p=-1.0):
    """Symmetric pair p+ = p- = p at x1 = -a."""
    return Loading((PointForce(-a, "+", p), PointForce(-a, "-", p)))


def hat_profile(center, half_width, coeff, n=9):
    xs = np.linspace(center - half_width, center + half_width, n)
    vals = coeff / half_width * (1.0 - np.abs(xs - center) / half_width)
    return xs, vals


def hat_load(center, half_width, avg_coeff, jump_coeff, n=9):
    xs, avg = hat_profile(center, half_width, avg_coeff, n)
    _, jump = hat_profile(center, half_width, jump_coeff, n)
    return DistributedLoad(tuple(xs), tuple(avg), tuple(jump))


def rel_err(a, b):
    denom = max(abs(a), abs(b))
    return abs(a - b) / denom if denom else 0.0


def random_balanced_loading(rng, with_distributed):
    """Random self-balanced loading: point stations plus an optional bump."""
    n_stations = int(rng.integers(1, 4))
    xs = -rng.uniform(0.8, 8.0, size=n_stations + 1)
    avg = rng.uniform(-1.0, 1.0, size=n_stations + 1)
    jump = rng.uniform(-1.0, 1.0, size=n_stations + 1)
    dist = None
    dist_jump = 0.0
    if with_distributed:
        center = -rng.uniform(1.5, 6.0)
        half = rng.uniform(0.1, 0.5)
        dist_jump = rng.uniform(-0.5, 0.5)
        dist = hat_load(center, half, avg_coeff=rng.uniform(-1.0, 1.0), jump_coeff=dist_jump)
    jump[-1] = -(jump[:-1].sum() + dist_jump)  # self-balance
    forces = []
    for x, a, j in zip(xs, avg, jump):
        forces.append(PointForce(float(x), "+", float(a + 0.5 * j)))
        forces.append(PointForce(float(x), "-", float(a - 0.5 * j)))
    return Loading(tuple(forces), dist)


def random_defect(rng, kind):
    """Random well-separated defect of the given kind (l/d <= 0.25)."""
    d = rng.uniform(0.5, 2.5)
    phi = rng.uniform(0.05, 0.93) * math.pi * rng.choice([-1.0, 1.0])
    alpha = rng.uniform(0.0, math.pi)
    l_a = d * rng.uniform(0.05, 0.25)
    kwargs = {}
    if kind in ("elastic_ellipse", "rigid_ellipse", "elliptic_void"):
        kwargs["l_b"] = l_a * rng.uniform(0.15, 1.0)
    if kind == "elastic_ellipse":
        kwargs["mu_star"] = math.exp(rng.uniform(math.log(0.05), math.log(20.0)))
    if kind in ("soft_line", "stiff_line"):
        kwargs["kappa"] = rng.uniform(0.1, 3.0)
    return Defect(kind, d=float(d), phi=float(phi), alpha=float(alpha), l_a=float(l_a), **kwargs)
