"""Thermodynamic observables of trapped ideal Fermi and Bose gases.

Everything follows from the semiclassical occupation of phase space:
spatial profiles use the local fugacity exp((mu - U(r))/T), momentum
profiles the local kinetic fugacity exp((mu - p^2/2m)/T), and the total
particle number reduces to

    N = (kT)^gamma (m/2 hbar^2)^(D/2) A^(-D/n)
        * Gamma(D/n+1)/Gamma(D/2+1) * h_gamma(z),

with gamma = D/2 + D/n and h the Fermi or Bose function.  Inverting the
gamma power law yields the Fermi energy and, for bosons in geometries
with gamma > 1, the condensation temperature; gamma <= 1 means the
thermal cloud can absorb any particle number and no condensate forms.

Temperatures and energies share units (k_B = 1); T = 0 is served by the
dedicated zero-temperature profile functions only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from . import specfun
from .errors import ConvergenceError, DomainError, FeasibilityError, NoSolutionError
from .trap import BOX, Trap, potential, unit_ball_volume

__all__ = [
    "CondensateSplit",
    "GasSpec",
    "MuSolution",
    "Profile",
    "Statistics",
    "ThermoState",
    "bec_feasible",
    "bec_temperature",
    "box_bec_temperature",
    "box_fermi_energy",
    "condensed_fraction",
    "fermi_energy",
    "fermi_momentum_density_T0",
    "fermi_spatial_density_T0",
    "harmonic_trap",
    "momentum_density",
    "solve_mu",
    "spatial_density",
    "thermal_wavelength",
    "total_number",
]

_NUMBER_RTOL = 1e-9       # contract on |N(mu) - N|/N
_BRACKET_DOUBLINGS = 200
_BISECT_MAX_ITER = 200


class Statistics(Enum):
    """Quantum statistics selector: FERMI takes +1, BOSE -1 occupation sign."""

    FERMI = "fermi"
    BOSE = "bose"


@dataclass(frozen=True)
class ThermoState:
    """Temperature and chemical potential of a grand-canonical gas."""

    T: float
    mu: float

    def __post_init__(self) -> None:
        if not self.T > 0.0:
            raise DomainError(f"temperature must be positive, got {self.T}")

    @property
    def log_fugacity(self) -> float:
        return self.mu / self.T

    @property
    def fugacity(self) -> float:
        eta = self.log_fugacity
        return math.exp(eta) if eta < 700.0 else math.inf


@dataclass(frozen=True)
class GasSpec:
    """A gas: statistics, particle number and the trap that confines it."""

    statistics: Statistics
    N: float
    trap: Trap

    def __post_init__(self) -> None:
        if not self.N > 0.0:
            raise DomainError(f"particle number must be positive, got {self.N}")


@dataclass(frozen=True)
class CondensateSplit:
    """Partition of a Bose gas into condensed and thermal particles.

    ``T_B`` is None when the geometry cannot condense.
    """

    N0: float
    N_thermal: float
    T_B: Optional[float]


@dataclass(frozen=True)
class MuSolution:
    """Result of the particle-number inversion.

    ``condensate`` is populated for Bose gases and None for Fermi gases.
    """

    state: ThermoState
    condensate: Optional[CondensateSplit]


@dataclass(frozen=True)
class Profile:
    """Radial density samples together with their normalization integral."""

    grid: np.ndarray
    values: np.ndarray
    normalization: float


def _validate_bose_mu(statistics: Statistics, mu: float) -> None:
    if statistics is Statistics.BOSE and mu > 0.0:
        raise DomainError(
            f"BOSE requires mu <= 0 (lowest level sits at zero); got mu = {mu}"
        )


def _h_log(statistics: Statistics, s: float, eta: float) -> float:
    if statistics is Statistics.FERMI:
        return specfun.fermi_fn_log(s, eta)
    return specfun.bose_fn_log(s, eta)


# ---------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------

def thermal_wavelength(T: float, m: float = 1.0, *, hbar: float = 1.0) -> float:
    """Thermal de Broglie wavelength (2 pi hbar^2 / (m T))^(1/2)."""
    if not T > 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    return math.sqrt(2.0 * math.pi * hbar**2 / (m * T))


def harmonic_trap(
    D: float, omega: float | Sequence[float], m: float = 1.0
) -> Trap:
    """Harmonic confinement; anisotropy enters via the geometric mean frequency.

    Returns the equivalent isotropic trap with n = 2 and A = m wbar^2 / 2.
    """
    freqs = [omega] if isinstance(omega, (int, float)) else list(omega)
    if not freqs:
        raise DomainError("at least one frequency is required")
    for w in freqs:
        if not w > 0.0:
            raise DomainError(f"frequencies must be positive, got {w}")
    wbar = math.exp(sum(math.log(w) for w in freqs) / len(freqs))
    return Trap(D=D, n=2.0, A=0.5 * m * wbar**2, m=m)


def bec_feasible(D: float, n: float) -> bool:
    """Whether a Bose gas condenses in this geometry: D/2 + D/n > 1 strictly."""
    if not D > 0.0:
        raise DomainError(f"dimension must be positive, got {D}")
    if not n > 0.0:
        raise DomainError(f"exponent must be positive, got {n}")
    ratio = 0.0 if math.isinf(n) else D / n
    return D / 2.0 + ratio > 1.0


# ---------------------------------------------------------------------
# Density profiles
# ---------------------------------------------------------------------

def spatial_density(
    gas: GasSpec, state: ThermoState, r: float, *, hbar: float = 1.0
) -> float:
    """Particle density at radius r; the thermal cloud only for bosons.

    n(r) = lambda^-D h_{D/2}(exp((mu - U(r))/T)) with h = f or g.
    """
    _validate_bose_mu(gas.statistics, state.mu)
    trap = gas.trap
    u = potential(trap, r)
    if math.isinf(u):
        return 0.0
    eta = (state.mu - u) / state.T
    lam = thermal_wavelength(state.T, trap.m, hbar=hbar)
    return lam ** (-trap.D) * _h_log(gas.statistics, trap.D / 2.0, eta)


def fermi_spatial_density_T0(
    gas: GasSpec, E_F: float, r: float, *, hbar: float = 1.0
) -> float:
    """Zero-temperature Fermi cloud, sharp at the surface U(r) = E_F.

    n(r) = (m/2 pi hbar^2)^(D/2) (E_F - U(r))^(D/2) / Gamma(D/2+1)
    inside the cloud and exactly zero outside.
    """
    if gas.statistics is not Statistics.FERMI:
        raise DomainError("zero-temperature profile is defined for fermions")
    if not E_F > 0.0:
        raise DomainError(f"Fermi energy must be positive, got {E_F}")
    trap = gas.trap
    gap = E_F - potential(trap, r)
    if gap <= 0.0:
        return 0.0
    D = trap.D
    pref = (trap.m / (2.0 * math.pi * hbar**2)) ** (D / 2.0) / math.gamma(D / 2.0 + 1.0)
    return pref * gap ** (D / 2.0)


def momentum_density(
    gas: GasSpec, state: ThermoState, p: float, *, hbar: float = 1.0
) -> float:
    """Momentum-space density of the (thermal) gas for a finite exponent.

    n(p) = (2 hbar sqrt(pi))^-D Gamma(D/n+1)/Gamma(D/2+1) (T/A)^(D/n)
           * h_{D/n}(exp((mu - p^2/2m)/T)).
    """
    _validate_bose_mu(gas.statistics, state.mu)
    if p < 0.0:
        raise DomainError(f"momentum must be >= 0, got {p}")
    trap = gas.trap
    if trap.is_box:
        raise DomainError("momentum profile requires a finite trap exponent")
    D, n = trap.D, trap.n
    eta = (state.mu - p * p / (2.0 * trap.m)) / state.T
    pref = (
        (2.0 * hbar * math.sqrt(math.pi)) ** (-D)
        * math.gamma(D / n + 1.0)
        / math.gamma(D / 2.0 + 1.0)
        * (state.T / trap.A) ** (D / n)
    )
    return pref * _h_log(gas.statistics, D / n, eta)


def fermi_momentum_density_T0(
    gas: GasSpec, E_F: float, p: float, *, hbar: float = 1.0
) -> float:
    """Zero-temperature momentum distribution, zero beyond p = sqrt(2 m E_F).

    n(p) = (2 hbar sqrt(pi))^-D A^(-D/n) (E_F - p^2/2m)^(D/n) inside the
    Fermi surface.
    """
    if gas.statistics is not Statistics.FERMI:
        raise DomainError("zero-temperature profile is defined for fermions")
    if not E_F > 0.0:
        raise DomainError(f"Fermi energy must be positive, got {E_F}")
    if p < 0.0:
        raise DomainError(f"momentum must be >= 0, got {p}")
    trap = gas.trap
    if trap.is_box:
        raise DomainError("momentum profile requires a finite trap exponent")
    gap = E_F - p * p / (2.0 * trap.m)
    if gap <= 0.0:
        return 0.0
    D, n = trap.D, trap.n
    return (
        (2.0 * hbar * math.sqrt(math.pi)) ** (-D)
        * trap.A ** (-D / n)
        * gap ** (D / n)
    )


# ---------------------------------------------------------------------
# Global quantities
# ---------------------------------------------------------------------

def _number_prefactor(trap: Trap, T: float, hbar: float) -> float:
    # N = prefactor * h_gamma(z); box geometry uses the uniform-gas form
    D = trap.D
    if trap.is_box:
        lam = thermal_wavelength(T, trap.m, hbar=hbar)
        return unit_ball_volume(D) * lam ** (-D)
    return (
        T**trap.gamma
        * (trap.m / (2.0 * hbar**2)) ** (D / 2.0)
        * trap.A ** (-D / trap.n)
        * math.gamma(D / trap.n + 1.0)
        / math.gamma(D / 2.0 + 1.0)
    )


def total_number(gas: GasSpec, state: ThermoState, *, hbar: float = 1.0) -> float:
    """Thermal particle number at (T, mu); excludes any condensate."""
    _validate_bose_mu(gas.statistics, state.mu)
    trap = gas.trap
    pref = _number_prefactor(trap, state.T, hbar)
    return pref * _h_log(gas.statistics, trap.gamma, state.log_fugacity)


def fermi_energy(gas: GasSpec, *, hbar: float = 1.0) -> float:
    """Fermi energy of the trapped gas (equals T_F with k_B = 1).

    E_F = [ (2 hbar^2/m)^(D/2) A^(D/n) Gamma(D/2+1)/Gamma(D/n+1)
            * Gamma(gamma+1) N ]^(1/gamma).
    """
    if gas.statistics is not Statistics.FERMI:
        raise DomainError("Fermi energy is defined for fermions")
    trap = gas.trap
    if trap.is_box:
        raise DomainError("use box_fermi_energy for the rigid box")
    D, n = trap.D, trap.n
    g = trap.gamma
    base = (
        (2.0 * hbar**2 / trap.m) ** (D / 2.0)
        * trap.A ** (D / n)
        * math.gamma(D / 2.0 + 1.0)
        / math.gamma(D / n + 1.0)
        * math.gamma(g + 1.0)
        * gas.N
    )
    return base ** (1.0 / g)


def bec_temperature(gas: GasSpec, *, hbar: float = 1.0) -> Optional[float]:
    """Condensation temperature, or None when the geometry forbids BEC.

    T_B = [ (2 hbar^2/m)^(D/2) A^(D/n) Gamma(D/2+1)/Gamma(D/n+1)
            * N / zeta(gamma) ]^(1/gamma) for gamma > 1.
    """
    if gas.statistics is not Statistics.BOSE:
        raise DomainError("condensation temperature is defined for bosons")
    trap = gas.trap
    if trap.is_box:
        raise DomainError("use box_bec_temperature for the rigid box")
    if not bec_feasible(trap.D, trap.n):
        return None
    D, n = trap.D, trap.n
    g = trap.gamma
    base = (
        (2.0 * hbar**2 / trap.m) ** (D / 2.0)
        * trap.A ** (D / n)
        * math.gamma(D / 2.0 + 1.0)
        / math.gamma(D / n + 1.0)
        * gas.N
        / specfun.riemann_zeta(g)
    )
    return base ** (1.0 / g)


def _transition_temperature(gas: GasSpec, hbar: float) -> Optional[float]:
    trap = gas.trap
    if trap.is_box:
        return box_bec_temperature(
            trap.D, gas.N / unit_ball_volume(trap.D), trap.m, hbar=hbar
        )
    return bec_temperature(gas, hbar=hbar)


def condensed_fraction(gas: GasSpec, T: float, *, hbar: float = 1.0) -> CondensateSplit:
    """Condensate/thermal split at temperature T from the gamma power law.

    N0/N = 1 - (T/T_B)^gamma below T_B, zero above.
    """
    if gas.statistics is not Statistics.BOSE:
        raise DomainError("condensed fraction is defined for bosons")
    if not T > 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    trap = gas.trap
    if not bec_feasible(trap.D, trap.n):
        raise FeasibilityError(
            f"no condensation for D/2 + D/n = {trap.gamma} <= 1"
        )
    t_b = _transition_temperature(gas, hbar)
    assert t_b is not None
    if T >= t_b:
        return CondensateSplit(N0=0.0, N_thermal=gas.N, T_B=t_b)
    fraction = 1.0 - (T / t_b) ** trap.gamma
    n0 = fraction * gas.N
    return CondensateSplit(N0=n0, N_thermal=gas.N - n0, T_B=t_b)


def box_fermi_energy(
    D: float, density: float, m: float = 1.0, *, hbar: float = 1.0
) -> float:
    """Fermi energy of the uniform gas, (2 pi hbar^2/m) [Gamma(D/2+1) n]^(2/D)."""
    if not density > 0.0:
        raise DomainError(f"density must be positive, got {density}")
    if not D > 0.0:
        raise DomainError(f"dimension must be positive, got {D}")
    return (
        2.0 * math.pi * hbar**2 / m
        * (math.gamma(D / 2.0 + 1.0) * density) ** (2.0 / D)
    )


def box_bec_temperature(
    D: float, density: float, m: float = 1.0, *, hbar: float = 1.0
) -> Optional[float]:
    """Uniform-gas condensation temperature; None for D <= 2.

    k T_B = (2 pi hbar^2/m) (n / zeta(D/2))^(2/D) when zeta(D/2) is finite.
    """
    if not density > 0.0:
        raise DomainError(f"density must be positive, got {density}")
    if not D > 0.0:
        raise DomainError(f"dimension must be positive, got {D}")
    if D <= 2.0:
        return None
    return (
        2.0 * math.pi * hbar**2 / m
        * (density / specfun.riemann_zeta(D / 2.0)) ** (2.0 / D)
    )


# ---------------------------------------------------------------------
# Chemical-potential inversion
# ---------------------------------------------------------------------

def _solve_mu_fermi(gas: GasSpec, T: float, hbar: float) -> float:
    target = gas.N

    def excess(mu: float) -> float:
        return total_number(gas, ThermoState(T=T, mu=mu), hbar=hbar) - target

    scale = max(T, 1.0)
    if excess(0.0) < 0.0:
        lo, hi = 0.0, scale
        for _ in range(_BRACKET_DOUBLINGS):
            if excess(hi) >= 0.0:
                break
            lo, hi = hi, hi * 2.0
        else:
            raise ConvergenceError("could not bracket mu from above")
    else:
        lo, hi = -scale, 0.0
        for _ in range(_BRACKET_DOUBLINGS):
            if excess(lo) <= 0.0:
                break
            lo, hi = lo * 2.0, lo
        else:
            raise ConvergenceError("could not bracket mu from below")

    mu = 0.5 * (lo + hi)
    for _ in range(_BISECT_MAX_ITER):
        mu = 0.5 * (lo + hi)
        diff = excess(mu)
        if abs(diff) <= 0.1 * _NUMBER_RTOL * target:
            return mu
        if diff < 0.0:
            lo = mu
        else:
            hi = mu
        if hi - lo <= 1e-14 * max(1.0, abs(mu)):
            break
    if abs(excess(mu)) > _NUMBER_RTOL * target:
        raise ConvergenceError(
            f"mu bisection stalled with residual {excess(mu) / target:.3e}"
        )
    return mu


def _solve_eta_bose(gas: GasSpec, T: float, hbar: float, feasible: bool) -> float:
    # bisection in eta = mu/T < 0; geometric midpoints resolve roots
    # exponentially close to saturation, which a fugacity grid cannot
    trap = gas.trap
    target = gas.N
    pref = _number_prefactor(trap, T, hbar)

    def thermal(eta: float) -> float:
        return pref * specfun.bose_fn_log(trap.gamma, eta)

    hi = -1.0
    if thermal(hi) < target:
        for _ in range(_BRACKET_DOUBLINGS):
            hi *= 0.5
            if thermal(hi) >= target:
                break
        else:
            # eta indistinguishable from zero at double precision
            residual = target - thermal(hi)
            if feasible and abs(residual) <= _NUMBER_RTOL * target:
                return hi
            if not feasible:
                raise NoSolutionError(
                    "thermal cloud saturates below N within floating-point "
                    "resolution of the fugacity"
                )
            raise ConvergenceError(
                f"saturation residual {residual / target:.3e} cannot be "
                "resolved in the fugacity"
            )
        lo = 2.0 * hi
    else:
        lo = hi
        for _ in range(_BRACKET_DOUBLINGS):
            lo *= 2.0
            if thermal(lo) <= target:
                break
        else:
            raise ConvergenceError("could not bracket eta from below")

    eta = hi
    for _ in range(_BISECT_MAX_ITER):
        eta = -math.exp(0.5 * (math.log(-lo) + math.log(-hi)))
        diff = thermal(eta) - target
        if abs(diff) <= 0.1 * _NUMBER_RTOL * target:
            return eta
        if diff < 0.0:
            lo = eta
        else:
            hi = eta
        if math.log(lo / hi) <= 1e-14:
            break
    if abs(thermal(eta) - target) > _NUMBER_RTOL * target:
        raise ConvergenceError(
            f"eta bisection stalled with residual "
            f"{(thermal(eta) - target) / target:.3e}"
        )
    return eta


def solve_mu(gas: GasSpec, T: float, *, hbar: float = 1.0) -> MuSolution:
    """Chemical potential reproducing N particles at temperature T.

    Fermions: bracketed bisection on mu (the particle number increases
    strictly with mu).  Bosons: below the transition the chemical
    potential pins to zero and the excess over the thermal cloud
    condenses; otherwise the inversion runs on the log-fugacity.  The
    returned residual satisfies |N(mu) - N| <= 1e-9 N.
    """
    if not T > 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    if gas.statistics is Statistics.FERMI:
        mu = _solve_mu_fermi(gas, T, hbar)
        return MuSolution(state=ThermoState(T=T, mu=mu), condensate=None)

    trap = gas.trap
    feasible = bec_feasible(trap.D, trap.n)
    t_b: Optional[float] = None
    if feasible:
        t_b = _transition_temperature(gas, hbar)
        assert t_b is not None
        if T <= t_b:
            state = ThermoState(T=T, mu=0.0)
            n_thermal = total_number(gas, state, hbar=hbar)
            n0 = max(gas.N - n_thermal, 0.0)
            return MuSolution(
                state=state,
                condensate=CondensateSplit(N0=n0, N_thermal=n_thermal, T_B=t_b),
            )
    eta = _solve_eta_bose(gas, T, hbar, feasible)
    state = ThermoState(T=T, mu=eta * T)
    n_thermal = total_number(gas, state, hbar=hbar)
    return MuSolution(
        state=state,
        condensate=CondensateSplit(N0=0.0, N_thermal=n_thermal, T_B=t_b),
    )


# ---------------------------------------------------------------------
# Sampled profiles
# ---------------------------------------------------------------------

def _radial_count(values_fn, D: float, upper: float) -> float:
    from scipy.integrate import quad

    from .trap import unit_sphere_area

    integrand = lambda x: x ** (D - 1.0) * values_fn(x)
    val, _ = quad(integrand, 0.0, upper, limit=300, epsabs=1e-12, epsrel=1e-9)
    return unit_sphere_area(D) * val


def density_profile(
    gas: GasSpec,
    *,
    kind: str,
    T: float,
    grid: np.ndarray,
    hbar: float = 1.0,
) -> Profile:
    """Sample a spatial or momentum profile on ``grid``.

    T = 0 selects the sharp zero-temperature Fermi forms; any positive T
    first solves for the chemical potential at the gas's N.  The
    normalization field holds the full radial count integral (thermal
    part only for bosons).
    """
    if kind not in ("spatial", "momentum"):
        raise DomainError(f"profile kind must be spatial or momentum, got {kind!r}")
    trap = gas.trap
    grid = np.asarray(grid, dtype=float)
    if T == 0.0:
        if gas.statistics is not Statistics.FERMI:
            raise DomainError("T = 0 profiles exist only for fermions")
        e_f = fermi_energy(gas, hbar=hbar)
        if kind == "spatial":
            fn = lambda r: fermi_spatial_density_T0(gas, e_f, r, hbar=hbar)
            edge = (e_f / trap.A) ** (1.0 / trap.n) if not trap.is_box else 1.0
        else:
            fn = lambda p: fermi_momentum_density_T0(gas, e_f, p, hbar=hbar)
            edge = math.sqrt(2.0 * trap.m * e_f)
        upper = edge
    else:
        state = solve_mu(gas, T, hbar=hbar).state
        if kind == "spatial":
            fn = lambda r: spatial_density(gas, state, r, hbar=hbar)
            if trap.is_box:
                upper = 1.0
            else:
                upper = ((max(state.mu, 0.0) + 45.0 * T) / trap.A) ** (1.0 / trap.n)
        else:
            fn = lambda p: momentum_density(gas, state, p, hbar=hbar)
            upper = math.sqrt(2.0 * trap.m * (max(state.mu, 0.0) + 45.0 * T))
    values = np.array([fn(x) for x in grid])
    norm = _radial_count(fn, trap.D, upper)
    return Profile(grid=grid, values=values, normalization=norm)
