"""Brute-force verifiers for the closed-form thermodynamics.

Nothing here reuses the polylogarithm machinery: particle numbers come
from nested radial quadrature of the raw occupation factor over phase
space, state counts from the phase-space volume, and the harmonic trap
additionally admits an exact sum over its discrete spectrum.  Agreement
between these routes and the closed forms is the package's correctness
argument; ``verification_suite`` bundles the standard comparison grid
for the command-line ``verify`` subcommand.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.integrate import IntegrationWarning, quad

from .errors import DomainError, QuadratureError
from .thermo import GasSpec, Statistics, ThermoState, harmonic_trap, total_number
from .trap import (
    Trap,
    dos_closed_form,
    dos_parameters,
    dos_quadrature,
    unit_sphere_area,
)

__all__ = [
    "OracleReport",
    "counting_function_oracle",
    "discrete_harmonic_oracle",
    "phase_space_number_oracle",
    "verification_suite",
]

_QUAD_INNER = dict(limit=200, epsabs=1e-13, epsrel=1e-10)
_QUAD_OUTER = dict(limit=200, epsabs=1e-12, epsrel=1e-9)
# occupation drops below 1e-19 once the energy argument passes this
_ENERGY_CUTOFF = 45.0


def _occupation(x: float, sign: float) -> float:
    if x > 700.0:
        return 0.0
    return 1.0 / (math.exp(x) + sign)


def phase_space_number_oracle(
    gas: GasSpec, state: ThermoState, *, hbar: float = 1.0, rel_tol: float = 1e-8
) -> float:
    """Particle number by direct phase-space quadrature.

    Integrates the occupation of eps(r, p) = p^2/2m + A r^n over
    d^D r d^D p / (2 pi hbar)^D, momentum innermost, with radial and
    momentum cutoffs where the Boltzmann factor falls below 1e-19.
    """
    trap = gas.trap
    if trap.is_box:
        raise DomainError("phase-space oracle requires a finite trap exponent")
    sign = +1.0 if gas.statistics is Statistics.FERMI else -1.0
    if sign < 0.0 and state.mu > 0.0:
        raise DomainError(f"BOSE requires mu <= 0, got {state.mu}")
    D, A, m, T, mu = trap.D, trap.A, trap.m, state.T, state.mu
    beta = 1.0 / T
    r_cut = ((max(mu, 0.0) + _ENERGY_CUTOFF * T) / A) ** (1.0 / trap.n)

    def momentum_integral(r: float) -> float:
        u = A * r**trap.n
        mu_eff = mu - u
        p_cut = math.sqrt(2.0 * m * (max(mu_eff, 0.0) + _ENERGY_CUTOFF * T))
        points = [math.sqrt(2.0 * m * mu_eff)] if mu_eff > 0.0 else None

        def inner(p: float) -> float:
            return p ** (D - 1.0) * _occupation(
                beta * (p * p / (2.0 * m) + u - mu), sign
            )

        val, _ = quad(inner, 0.0, p_cut, points=points, **_QUAD_INNER)
        return val

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, abserr = quad(
            lambda r: r ** (D - 1.0) * momentum_integral(r), 0.0, r_cut, **_QUAD_OUTER
        )
    pref = unit_sphere_area(D) ** 2 / (2.0 * math.pi * hbar) ** D
    result = pref * val
    if result != 0.0 and abserr * pref > rel_tol * abs(result):
        raise QuadratureError(
            f"phase-space quadrature reached only "
            f"{abserr * pref / abs(result):.2e} relative error"
        )
    return result


def counting_function_oracle(trap: Trap, eps: float, *, hbar: float = 1.0) -> float:
    """States below eps, as phase-space volume over (2 pi hbar)^D.

    The momentum shell integrates in closed form, leaving a single
    radial quadrature of r^(D-1) (2m (eps - U(r)))^(D/2) over the
    classically allowed region.
    """
    if trap.is_box:
        raise DomainError("counting oracle requires a finite trap exponent")
    if not eps > 0.0:
        raise DomainError(f"energy must be positive, got {eps}")
    D, A, m = trap.D, trap.A, trap.m
    r_max = (eps / A) ** (1.0 / trap.n)

    def integrand(r: float) -> float:
        gap = eps - A * r**trap.n
        if gap <= 0.0:
            return 0.0
        return r ** (D - 1.0) * (2.0 * m * gap) ** (D / 2.0)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(integrand, 0.0, r_max, limit=300, epsabs=1e-13, epsrel=1e-10)
    return unit_sphere_area(D) ** 2 / (2.0 * math.pi * hbar) ** D / D * val


def discrete_harmonic_oracle(
    D: int,
    omega: float,
    T: float,
    mu: float,
    statistics: Statistics,
    *,
    hbar: float = 1.0,
) -> float:
    """Exact particle number from the discrete harmonic spectrum.

    Sums deg(k) / (exp((hbar w (k + D/2) - mu)/T) +- 1) with the
    stars-and-bars degeneracy deg(k) = C(k+D-1, D-1), cut off once a
    geometric bound on the remainder drops below 1e-12 of the total.
    """
    if not (isinstance(D, int) and D >= 1):
        raise DomainError(f"discrete spectrum needs integer D >= 1, got {D}")
    if not T > 0.0:
        raise DomainError(f"temperature must be positive, got {T}")
    if not omega > 0.0:
        raise DomainError(f"frequency must be positive, got {omega}")
    sign = +1.0 if statistics is Statistics.FERMI else -1.0
    ground = 0.5 * D * hbar * omega
    if sign < 0.0 and mu >= ground:
        raise DomainError(
            f"BOSE requires mu < {ground} (the ground level), got {mu}"
        )
    beta = 1.0 / T
    bhw = beta * hbar * omega
    deg = 1.0
    total = 0.0
    k = 0
    while True:
        total += deg * _occupation(bhw * (k + 0.5 * D) - beta * mu, sign)
        ratio = (k + D) / (k + 1.0)
        step = math.exp(-bhw) * ratio
        if step < 1.0 and total > 0.0:
            next_term = deg * ratio * _occupation(
                bhw * (k + 1 + 0.5 * D) - beta * mu, sign
            )
            if next_term / (1.0 - step) < 1e-12 * total:
                return total
        deg *= ratio
        k += 1
        if k > 10**7:
            raise QuadratureError("discrete spectral sum did not converge")


# ---------------------------------------------------------------------
# Bundled comparison grid
# ---------------------------------------------------------------------

@dataclass(frozen=True)
class OracleReport:
    """One closed-form/oracle comparison with its discrepancy."""

    label: str
    closed_form: float
    oracle: float
    abs_err: float
    rel_err: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.rel_err <= self.tol

    @classmethod
    def compare(
        cls, label: str, closed_form: float, oracle: float, tol: float
    ) -> "OracleReport":
        abs_err = abs(closed_form - oracle)
        scale = max(abs(closed_form), abs(oracle))
        rel_err = abs_err / scale if scale > 0.0 else abs_err
        return cls(label, closed_form, oracle, abs_err, rel_err, tol)


def verification_suite(*, hbar: float = 1.0, quick: bool = False) -> list[OracleReport]:
    """Standard closed-form versus oracle grid.

    Covers particle numbers for D in {1,2,3} x n in {1,2,4} at three
    (T, mu) points for each statistics, the counting function against
    the analytic state count, and the semiclassical convergence of the
    harmonic trap.  ``quick`` trims the grid for smoke testing.
    """
    reports: list[OracleReport] = []
    dims = [1.0, 3.0] if quick else [1.0, 2.0, 3.0]
    exps = [2.0] if quick else [1.0, 2.0, 4.0]

    for D in dims:
        for n in exps:
            trap = Trap(D=D, n=n, A=1.0)
            for T, mu_f, mu_b in [(1.0, 0.5, -0.2), (0.5, 1.0, -1.0), (2.0, -1.0, -4.0)]:
                for stats, mu in [(Statistics.FERMI, mu_f), (Statistics.BOSE, mu_b)]:
                    gas = GasSpec(statistics=stats, N=1.0, trap=trap)
                    state = ThermoState(T=T, mu=mu)
                    closed = total_number(gas, state, hbar=hbar)
                    oracle = phase_space_number_oracle(gas, state, hbar=hbar)
                    reports.append(
                        OracleReport.compare(
                            f"number D={D:g} n={n:g} T={T:g} mu={mu:g} "
                            f"{stats.value}",
                            closed,
                            oracle,
                            tol=1e-7,
                        )
                    )
            dos = dos_parameters(trap, hbar=hbar)
            for eps in [1.0] if quick else [0.5, 2.0]:
                reports.append(
                    OracleReport.compare(
                        f"counting D={D:g} n={n:g} eps={eps:g}",
                        dos.counting(eps),
                        counting_function_oracle(trap, eps, hbar=hbar),
                        tol=1e-7,
                    )
                )
            for eps in [1.0] if quick else [1.0, 5.0]:
                reports.append(
                    OracleReport.compare(
                        f"dos D={D:g} n={n:g} eps={eps:g}",
                        dos_closed_form(trap, eps, hbar=hbar),
                        dos_quadrature(
                            lambda r: trap.A * r**trap.n, D, eps,
                            m=trap.m, hbar=hbar,
                        ),
                        tol=1e-7,
                    )
                )

    # semiclassical accuracy improves as the level spacing shrinks
    for stats in (Statistics.FERMI, Statistics.BOSE):
        for bhw in [0.2, 0.1] if quick else [0.2, 0.1, 0.05]:
            T = 1.0
            omega = bhw * T / hbar
            trap = harmonic_trap(3.0, omega)
            gas = GasSpec(statistics=stats, N=1.0, trap=trap)
            semi = total_number(gas, ThermoState(T=T, mu=-T), hbar=hbar)
            exact = discrete_harmonic_oracle(
                3, omega, T, -T, stats, hbar=hbar
            )
            reports.append(
                OracleReport.compare(
                    f"discrete bhw={bhw:g} {stats.value}", semi, exact, tol=0.1
                )
            )
    return reports
