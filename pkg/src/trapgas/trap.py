"""Isotropic power-law confinement and its density of states.

A trap is U(r) = A r^n in D spatial dimensions (D may be fractional).
The distinguished exponent ``BOX`` denotes the rigid container of unit
radius reached in the D/n -> 0 limit.  Reduced units hbar = m = k_B = 1
are the default throughout; the particle mass is carried by the trap.

The density of states is available both in closed form,

    rho(eps) = (m/2 hbar^2)^(D/2) A^(-D/n)
               * Gamma(D/n+1) / (Gamma(D/2+1) Gamma(D/2+D/n))
               * eps^(D/2 + D/n - 1),

and by direct radial quadrature of the phase-space volume, which serves
as an independent check of the closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import IntegrationWarning, quad

from .errors import DomainError, QuadratureError

__all__ = [
    "BOX",
    "DensityOfStates",
    "Trap",
    "dos_closed_form",
    "dos_parameters",
    "dos_quadrature",
    "potential",
    "unit_ball_volume",
    "unit_sphere_area",
]

#: Distinguished exponent selecting the rigid unit-radius box.
BOX = math.inf


def unit_ball_volume(D: float) -> float:
    """Volume of the unit ball in D dimensions, pi^(D/2)/Gamma(D/2+1)."""
    return math.pi ** (D / 2.0) / math.gamma(D / 2.0 + 1.0)


def unit_sphere_area(D: float) -> float:
    """Surface measure of the unit sphere, 2 pi^(D/2)/Gamma(D/2)."""
    return 2.0 * math.pi ** (D / 2.0) / math.gamma(D / 2.0)


@dataclass(frozen=True)
class Trap:
    """Isotropic confinement U(r) = A r^n in D dimensions.

    ``n = BOX`` selects the rigid box of unit radius; A is then unused.
    """

    D: float
    n: float
    A: float = 1.0
    m: float = 1.0

    def __post_init__(self) -> None:
        if not self.D > 0.0:
            raise DomainError(f"dimension must be positive, got {self.D}")
        if not self.n > 0.0:
            raise DomainError(f"exponent must be positive, got {self.n}")
        if not self.m > 0.0:
            raise DomainError(f"mass must be positive, got {self.m}")
        if not self.is_box and not self.A > 0.0:
            raise DomainError(f"trap strength must be positive, got {self.A}")

    @property
    def is_box(self) -> bool:
        return math.isinf(self.n)

    @property
    def gamma(self) -> float:
        """Exponent D/2 + D/n governing all power laws (D/2 for the box)."""
        if self.is_box:
            return self.D / 2.0
        return self.D / 2.0 + self.D / self.n

    @classmethod
    def box(cls, D: float, m: float = 1.0) -> "Trap":
        """Rigid box of unit radius in D dimensions."""
        return cls(D=D, n=BOX, A=1.0, m=m)


def potential(trap: Trap, r: float) -> float:
    """U(r); the box returns 0 inside the unit radius and inf outside."""
    if r < 0.0:
        raise DomainError(f"radius must be >= 0, got {r}")
    if trap.is_box:
        return 0.0 if r < 1.0 else math.inf
    return trap.A * r**trap.n


@dataclass(frozen=True)
class DensityOfStates:
    """Power-law density of states rho(eps) = prefactor * eps^exponent."""

    prefactor: float
    exponent: float

    @property
    def gamma(self) -> float:
        return self.exponent + 1.0

    def evaluate(self, eps: float) -> float:
        if not eps > 0.0:
            raise DomainError(f"energy must be positive, got {eps}")
        return self.prefactor * eps**self.exponent

    def counting(self, eps: float) -> float:
        """Integrated number of states below eps, prefactor eps^gamma / gamma."""
        if not eps > 0.0:
            raise DomainError(f"energy must be positive, got {eps}")
        return self.prefactor * eps**self.gamma / self.gamma


def dos_parameters(trap: Trap, *, hbar: float = 1.0) -> DensityOfStates:
    """Prefactor and exponent of the trap's density of states."""
    D = trap.D
    if trap.is_box:
        pref = (
            unit_ball_volume(D)
            * (trap.m / (2.0 * math.pi * hbar**2)) ** (D / 2.0)
            / math.gamma(D / 2.0)
        )
        return DensityOfStates(prefactor=pref, exponent=D / 2.0 - 1.0)
    g = trap.gamma
    pref = (
        (trap.m / (2.0 * hbar**2)) ** (D / 2.0)
        * trap.A ** (-D / trap.n)
        * math.gamma(D / trap.n + 1.0)
        / (math.gamma(D / 2.0 + 1.0) * math.gamma(g))
    )
    return DensityOfStates(prefactor=pref, exponent=g - 1.0)


def dos_closed_form(trap: Trap, eps: float, *, hbar: float = 1.0) -> float:
    """rho(eps) of the power-law trap in closed form; requires finite n."""
    if trap.is_box:
        raise DomainError("closed form requires a finite exponent; "
                          "use dos_parameters for the box")
    if not eps > 0.0:
        raise DomainError(f"energy must be positive, got {eps}")
    return dos_parameters(trap, hbar=hbar).evaluate(eps)


def _support_radius(U: Callable[[float], float], eps: float) -> float:
    # outer classical turning point: smallest r with U(r) >= eps,
    # located by geometric bracketing plus bisection
    hi = 1.0
    for _ in range(200):
        if U(hi) >= eps:
            break
        hi *= 2.0
    else:
        raise QuadratureError(
            f"potential never reaches eps = {eps}; gas is unconfined"
        )
    lo = 0.0
    while U(hi / 2.0) >= eps and hi > 1e-300:
        hi /= 2.0
    lo = hi / 2.0
    for _ in range(200):
        if hi - lo <= 1e-15 * hi:
            break
        mid = 0.5 * (lo + hi)
        if U(mid) >= eps:
            hi = mid
        else:
            lo = mid
    return hi


def dos_quadrature(
    U: Callable[[float], float],
    D: float,
    eps: float,
    *,
    m: float = 1.0,
    hbar: float = 1.0,
    rel_tol: float = 1e-8,
) -> float:
    """rho(eps) by radial quadrature of the phase-space volume.

    Evaluates (m/2 pi hbar^2)^(D/2) / Gamma(D/2) times the volume
    integral of (eps - U(r))^((D-2)/2) over the classically allowed
    region, reduced to a radial integral with measure S_D r^(D-1) dr.
    The endpoint singularity at the turning point (D < 2) is integrable
    and left to the adaptive rule.

    Raises QuadratureError if the integrator cannot certify ``rel_tol``.
    """
    if not eps > 0.0:
        raise DomainError(f"energy must be positive, got {eps}")
    if not D > 0.0:
        raise DomainError(f"dimension must be positive, got {D}")
    r_max = _support_radius(U, eps)
    half_exp = (D - 2.0) / 2.0

    def integrand(r: float) -> float:
        gap = eps - U(r)
        if gap <= 0.0:
            return 0.0
        return r ** (D - 1.0) * gap**half_exp

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, abserr = quad(
            integrand, 0.0, r_max, limit=400, epsabs=1e-300, epsrel=1e-11
        )
    prefactor = (
        (m / (2.0 * math.pi * hbar**2)) ** (D / 2.0)
        / math.gamma(D / 2.0)
        * unit_sphere_area(D)
    )
    result = prefactor * value
    if abserr * prefactor > rel_tol * abs(result) and abs(result) > 0.0:
        raise QuadratureError(
            f"density-of-states quadrature reached only "
            f"{abserr * prefactor / abs(result):.2e} relative error"
        )
    return result
