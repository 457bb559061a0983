"""Shielding/amplification/neutral maps over defect position and
orientation.

A map scans the microcrack angles (phi1, alpha1) on cell centers of a
regular grid; the rigid-line companion is derived per arrangement rule
for every cell.  Cells are independent, may be computed in parallel,
and the output ordering is fixed row-major (phi1 outer, alpha1 inner).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .defects import Defect
from .errors import NumericalError, ValidationError
from .loading import Bimaterial, Loading
from .perturbation import delta_k_defect, neutral_pair_a, neutral_pair_b
from .tipfields import sif_k0

SHIELDING = "shielding"
AMPLIFICATION = "amplification"
NEUTRAL = "neutral"
INVALID = "invalid"

REGION_LETTER = {SHIELDING: "S", AMPLIFICATION: "A", NEUTRAL: "N", INVALID: "X"}
# grey levels mirroring light/medium/dark map shading
REGION_GREY = {SHIELDING: 170, AMPLIFICATION: 85, NEUTRAL: 40, INVALID: 0}

THREADS_ENV = "CRACKWAKE_THREADS"

# map cells tolerate a looser gradient quadrature; the classification
# margin delta is far above it
MAP_RTOL = 1e-7


def classify(ratio: float, delta: float) -> str:
    """Region label for a perturbation ratio dK/K0 at accuracy delta.

    Boundaries are inclusive to neutral: shielding needs ratio < -delta,
    amplification ratio > delta.
    """
    if not delta > 0.0:
        raise ValidationError(f"classification accuracy must be positive, got {delta}")
    if ratio < -delta:
        return SHIELDING
    if ratio > delta:
        return AMPLIFICATION
    return NEUTRAL


@dataclass(frozen=True)
class RegionCell:
    phi1: float
    alpha1: float
    ratio: float
    region: str


@dataclass(frozen=True)
class PairArrangement:
    """Microcrack prototype plus the companion rule ("a" or "b")."""

    pair: str
    l1: float
    d1: float
    d2: float | None = None

    def __post_init__(self):
        if self.pair not in ("a", "b"):
            raise ValidationError(f'arrangement pair must be "a" or "b", got {self.pair!r}')
        if not (self.l1 > 0.0 and self.d1 > 0.0):
            raise ValidationError("arrangement needs positive l1 and d1")

    def defects(self, phi1: float, alpha1: float, bimaterial: Bimaterial) -> tuple[Defect, Defect]:
        mc = Defect("microcrack", d=self.d1, phi=phi1, alpha=alpha1, l_a=self.l1)
        if self.pair == "a":
            return mc, neutral_pair_a(mc, self.d2)
        return mc, neutral_pair_b(mc, bimaterial, self.d2)


@dataclass(frozen=True)
class RegionMap:
    """Scan result: cell-center axes plus ratio/region grids (phi x alpha)."""

    phi1: np.ndarray
    alpha1: np.ndarray
    ratio: np.ndarray
    region: np.ndarray  # dtype object of region labels
    delta: float

    def cells(self):
        """Row-major iteration (phi1 outer, alpha1 inner)."""
        for i, p in enumerate(self.phi1):
            for j, a in enumerate(self.alpha1):
                yield RegionCell(p, a, float(self.ratio[i, j]), str(self.region[i, j]))

    def count(self, region: str) -> int:
        return int(np.sum(self.region == region))


def _resolve_threads(threads: int | None) -> int:
    cap = os.environ.get(THREADS_ENV)
    n = 1 if threads is None else max(1, int(threads))
    if cap is not None:
        n = min(n, max(1, int(cap)))
    return n


def scan_map(
    arrangement: PairArrangement,
    loading: Loading,
    bimaterial: Bimaterial,
    grid: tuple[int, int] = (128, 64),
    delta: float = 1e-6,
    threads: int | None = None,
) -> RegionMap:
    """Classify every (phi1, alpha1) cell of the grid.

    phi1 spans (-pi, pi) and alpha1 spans (0, pi), both sampled at cell
    centers.  Cells whose evaluation fails numerically are marked
    invalid, never skipped.
    """
    n_phi, n_alpha = grid
    if n_phi < 2 or n_alpha < 2:
        raise ValidationError(f"grid must be at least 2x2, got {n_phi}x{n_alpha}")
    if not delta > 0.0:
        raise ValidationError(f"map accuracy delta must be positive, got {delta}")
    phi_axis = -math.pi + (np.arange(n_phi) + 0.5) * (2.0 * math.pi / n_phi)
    alpha_axis = (np.arange(n_alpha) + 0.5) * (math.pi / n_alpha)
    k0 = sif_k0(loading, bimaterial)
    if k0 == 0.0:
        raise ValidationError("map needs a loading with non-zero K0")

    ratio = np.empty((n_phi, n_alpha))
    region = np.empty((n_phi, n_alpha), dtype=object)

    def fill_column(i: int) -> None:
        p = float(phi_axis[i])
        for j in range(n_alpha):
            a = float(alpha_axis[j])
            try:
                mc, companion = arrangement.defects(p, a, bimaterial)
                dk = delta_k_defect(mc, loading, bimaterial, rtol=MAP_RTOL)
                dk += delta_k_defect(companion, loading, bimaterial, rtol=MAP_RTOL)
                r = dk / k0
            except NumericalError:
                ratio[i, j] = math.nan
                region[i, j] = INVALID
                continue
            ratio[i, j] = r
            region[i, j] = classify(r, delta)

    n_threads = _resolve_threads(threads)
    if n_threads <= 1:
        for i in range(n_phi):
            fill_column(i)
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            list(pool.map(fill_column, range(n_phi)))

    return RegionMap(phi_axis, alpha_axis, ratio, region, delta)


def write_map_csv(region_map: RegionMap, fh) -> None:
    """CSV rows phi1,alpha1,ratio,region in fixed row-major order."""
    fh.write("phi1,alpha1,ratio,region\n")
    for cell in region_map.cells():
        fh.write(
            f"{cell.phi1:.9g},{cell.alpha1:.9g},{cell.ratio:.9g},"
            f"{REGION_LETTER[cell.region]}\n"
        )


def write_map_pgm(region_map: RegionMap, fh) -> None:
    """Plain (P2) grayscale map; top row is the largest alpha1."""
    n_phi = len(region_map.phi1)
    n_alpha = len(region_map.alpha1)
    fh.write(f"P2\n{n_phi} {n_alpha}\n255\n")
    for j in range(n_alpha - 1, -1, -1):
        row = " ".join(str(REGION_GREY[str(region_map.region[i, j])]) for i in range(n_phi))
        fh.write(row + "\n")
