"""Stress-intensity-factor perturbations produced by small defects.

The closed-form route contracts the background displacement gradient
with the defect's dipole matrix and the tip weight vector; the
quadrature route integrates the defect-induced effective tractions
against the (-x1)^(-1/2) weight-function kernel and serves as an
independent oracle for the closed form.  Multi-defect results are
plain sums (dilute, non-interacting defects).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ._quad import adaptive_quad
from .defects import Defect, dipole_matrix
from .errors import InvalidDefect
from .loading import Bimaterial, Loading
from .tipfields import SQRT_2_OVER_PI, FieldPoint, grad_u0


def tip_weight_vector(d: float, phi: float) -> tuple[float, float]:
    """Weight vector of the tip: magnitude 1/(2 d^(3/2)), direction
    (-sin(3 phi/2), cos(3 phi/2))."""
    f = 0.5 / d**1.5
    return -f * math.sin(1.5 * phi), f * math.cos(1.5 * phi)


@dataclass(frozen=True)
class EffectiveTraction:
    """Crack-line tractions induced by one defect's dipole field.

    avg and jump evaluate <sigma>(x1) and [sigma](x1); both decay like
    x1^(-2) far from the defect and the jump vanishes for identical
    half-planes.
    """

    u1: float  # dipole matrix applied to the gradient at the center
    u2: float
    yx: float  # defect center in tip coordinates
    yy: float
    mu_sum: float
    mu_dif: float

    def _dwdx2(self, x1):
        dx = x1 - self.yx
        rho2 = dx * dx + self.yy * self.yy
        v1 = -self.yy * dx / (math.pi * rho2 * rho2)
        v2 = -1.0 / (2.0 * math.pi * rho2) + self.yy * self.yy / (math.pi * rho2 * rho2)
        return self.u1 * v1 + self.u2 * v2

    def avg(self, x1):
        return -0.5 * self.mu_sum * self._dwdx2(x1)

    def jump(self, x1):
        return -self.mu_dif * self._dwdx2(x1)

    def weighted(self, x1, eta: float):
        """<sigma> + (eta/2)[sigma], the combination the tip kernel sees."""
        return -(0.5 * self.mu_sum + 0.5 * eta * self.mu_dif) * self._dwdx2(x1)


def effective_tractions(
    defect: Defect, grad_at_center: tuple[float, float], bimaterial: Bimaterial
) -> EffectiveTraction:
    """Effective tractions along x2 = 0 from the defect's dipole field."""
    m = dipole_matrix(defect)
    u1, u2 = m.apply(*grad_at_center)
    return EffectiveTraction(
        u1=u1,
        u2=u2,
        yx=defect.x,
        yy=defect.y,
        mu_sum=bimaterial.mu_sum,
        mu_dif=bimaterial.mu_plus - bimaterial.mu_minus,
    )


def _delta_k_closed(defect: Defect, grad: tuple[float, float], bimaterial: Bimaterial) -> float:
    m = dipole_matrix(defect)
    c1, c2 = tip_weight_vector(defect.d, defect.phi)
    mc1, mc2 = m.apply(c1, c2)
    mu_fac = bimaterial.mu_plus * bimaterial.mu_minus / bimaterial.mu_sum
    return -SQRT_2_OVER_PI * mu_fac * (grad[0] * mc1 + grad[1] * mc2)


def delta_k_defect(
    defect: Defect, loading: Loading, bimaterial: Bimaterial, rtol: float = 1e-10
) -> float:
    """Closed-form SIF perturbation of one defect."""
    grad = grad_u0(loading, bimaterial, FieldPoint(defect.d, defect.phi), rtol=rtol)
    return _delta_k_closed(defect, grad, bimaterial)


@dataclass(frozen=True)
class DefectPerturbation:
    per_defect: tuple[float, ...]
    total: float


def delta_k_total(
    defects: Sequence[Defect], loading: Loading, bimaterial: Bimaterial, rtol: float = 1e-10
) -> DefectPerturbation:
    """Per-defect SIF perturbations and their superposed sum."""
    values = tuple(delta_k_defect(d, loading, bimaterial, rtol) for d in defects)
    return DefectPerturbation(values, math.fsum(values))


def delta_k_defect_quadrature(
    defect: Defect, loading: Loading, bimaterial: Bimaterial, rtol: float = 1e-9
) -> float:
    """SIF perturbation by weight-function quadrature of the effective
    tractions; independent oracle for delta_k_defect.

    The kernel integral over x1 < 0 runs on the substituted axis
    t = sqrt(-x1), which removes the endpoint singularity.
    """
    grad = grad_u0(loading, bimaterial, FieldPoint(defect.d, defect.phi), rtol=min(rtol, 1e-10))
    eff = effective_tractions(defect, grad, bimaterial)
    eta = bimaterial.contrast

    def integrand(t):
        return eff.weighted(-t * t, eta)

    # natural magnitude of the integral, for the absolute error floor
    m = dipole_matrix(defect)
    norm = (abs(grad[0]) + abs(grad[1])) * max(
        abs(m.m11) + abs(m.m12), abs(m.m12) + abs(m.m22)
    )
    atol = 1e-15 * (norm / defect.d**1.5 + 1e-280)

    split = 8.0 * max(1.0, math.sqrt(defect.d))
    pts = [math.sqrt(defect.d)]
    if eff.yx < 0.0:
        pts.append(math.sqrt(-eff.yx))
    head = adaptive_quad(integrand, 0.0, split, rtol=rtol, atol=atol, points=pts)
    tail = adaptive_quad(integrand, split, math.inf, rtol=rtol, atol=atol)
    return -SQRT_2_OVER_PI * 2.0 * (head + tail)


def delta_k_advance(advance: float, a3: float) -> float:
    """SIF change from a uniform tip advance: (advance/2) * a3."""
    return 0.5 * advance * a3


def _remote_mu_factor(defect: Defect, bimaterial: Bimaterial) -> float:
    # modulus of the half-plane opposite the defect, over mu_sum
    mu_op = bimaterial.mu_minus if defect.phi >= 0.0 else bimaterial.mu_plus
    return mu_op / bimaterial.mu_sum


def delta_k_remote(defect: Defect, bimaterial: Bimaterial) -> float:
    """Remote-loading limit of delta_k/K0 (dimensionless ratio).

    Valid when the load support is far from both tip and defect; the
    ratio then depends on the defect geometry only.
    """
    phi, alpha = defect.phi, defect.alpha
    ss = math.sin(1.5 * phi - alpha) * math.sin(0.5 * phi - alpha)
    cc = math.cos(1.5 * phi - alpha) * math.cos(0.5 * phi - alpha)
    fac = _remote_mu_factor(defect, bimaterial)
    kind = defect.kind

    if kind == "elastic_ellipse":
        e = defect.l_b / defect.l_a
        ms = defect.mu_star
        size = defect.l_a * defect.l_b / defect.d**2
        return 0.5 * size * (1.0 + e) * (ms - 1.0) * fac * (ss / (e + ms) + cc / (1.0 + e * ms))
    if kind == "microcrack":
        return 0.5 * (defect.l_a / defect.d) ** 2 * fac * cc
    if kind == "rigid_line":
        return -0.5 * (defect.l_a / defect.d) ** 2 * fac * ss
    if kind == "elliptic_void":
        e = defect.l_b / defect.l_a
        size = defect.l_a * defect.l_b / defect.d**2
        return 0.5 * size * (1.0 / e + 1.0) * fac * (e * ss + cc)
    if kind == "rigid_ellipse":
        e = defect.l_b / defect.l_a
        size = defect.l_a * defect.l_b / defect.d**2
        return -0.5 * size * (1.0 / e + 1.0) * fac * (ss + e * cc)
    if kind == "soft_line":
        frac = defect.kappa / (defect.l_a + defect.kappa)
        return 0.5 * (defect.l_a / defect.d) ** 2 * fac * frac * cc
    # stiff_line
    frac = 1.0 / (1.0 + defect.kappa * defect.l_a)
    return -0.5 * (defect.l_a / defect.d) ** 2 * fac * frac * ss


def neutral_pair_a(microcrack: Defect, d2: float | None = None) -> Defect:
    """Rigid-line companion in the same half-plane that cancels the
    microcrack's remote-limit perturbation: equal l/d, equal phi,
    orientation rotated by pi/2.  Defaults to twice the distance."""
    if microcrack.kind != "microcrack":
        raise InvalidDefect(f"companion construction needs a microcrack, got {microcrack.kind!r}")
    if d2 is None:
        d2 = 2.0 * microcrack.d
    return Defect(
        kind="rigid_line",
        d=d2,
        phi=microcrack.phi,
        alpha=microcrack.alpha - 0.5 * math.pi,
        l_a=microcrack.l_a * d2 / microcrack.d,
    )


def neutral_pair_b(microcrack: Defect, bimaterial: Bimaterial, d2: float | None = None) -> Defect:
    """Rigid-line companion mirrored into the other half-plane, sized by
    the opposite-modulus balance mu_op1 l1^2/d1^2 = mu_op2 l2^2/d2^2.

    With the default d2 = d1 the pair is neutral under any symmetric
    loading at any finite distance, not only in the remote limit.
    """
    if microcrack.kind != "microcrack":
        raise InvalidDefect(f"companion construction needs a microcrack, got {microcrack.kind!r}")
    if d2 is None:
        d2 = microcrack.d
    phi2 = -microcrack.phi
    mu_op1 = bimaterial.mu_minus if microcrack.phi >= 0.0 else bimaterial.mu_plus
    mu_op2 = bimaterial.mu_minus if phi2 >= 0.0 else bimaterial.mu_plus
    l2 = microcrack.l_a * (d2 / microcrack.d) * math.sqrt(mu_op1 / mu_op2)
    return Defect(
        kind="rigid_line",
        d=d2,
        phi=phi2,
        alpha=0.5 * math.pi - microcrack.alpha,
        l_a=l2,
    )
