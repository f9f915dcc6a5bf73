"""Error floor for readout with classical (coherent-mixture) light.

Any transmitter whose signal modes admit a positive-P description does
no better than the bound computed here, so it is the benchmark every
nonclassical transmitter has to beat.  The bound itself only needs the
output fidelity of a single coherent probe, which has a short closed
form in the cell parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .gaussian import CellSpec

__all__ = [
    "FidelityParams",
    "BoundValue",
    "fidelity_params",
    "coherent_output_fidelity",
    "classical_bound",
]


@dataclass(frozen=True)
class FidelityParams:
    """Coherent-probe output-fidelity factors for one memory cell.

    ``xi0``/``xi1`` are the output variance factors of the two cell
    hypotheses, ``omega`` the fidelity prefactor and ``lam`` the
    energy-exponent coefficient: a probe of mean energy ``n_s`` comes
    out with fidelity ``omega**-1 * exp(-lam * n_s)``.
    """

    xi0: float
    xi1: float
    omega: float
    lam: float

    def __post_init__(self):
        if min(self.xi0, self.xi1) < 1.0 or self.omega < 1.0 - 1e-12 \
                or self.lam < 0.0:
            raise ValueError("need xi >= 1, omega >= 1 and lam >= 0")


@dataclass(frozen=True)
class BoundValue:
    """An error-probability bound together with the inputs it was built from."""

    value: float
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.value <= 0.5 + 1e-12:
            raise ValueError(f"bound {self.value} outside [0, 1/2]")


def _stable_parts(cell: CellSpec) -> tuple[float, float, float, float, float]:
    """(xi0, xi1, omega, lam, log_omega) without catastrophic cancellation.

    Writing s_u = xi_u - 1 (a plain sum of nonnegative terms), omega
    satisfies omega = 1 / (1 - delta) with
    delta = (s0 - s1)^2 / (A + B)^2 and A = sqrt(s0 (s0 + 2)),
    B = sqrt(s1 (s1 + 2)).  That form keeps full precision in
    log(omega) = -log1p(-delta) even when omega - 1 is around 1e-9,
    where the naive omega expression would leave log(omega) with only
    half its digits — fatal once multiplied by bandwidths of 1e6.
    """
    s0, s1 = (2.0 * cell.nbar * (1.0 - r) + cell.eps * (1.0 + r)
              for r in (cell.r0, cell.r1))
    a = math.sqrt(s0 * (s0 + 2.0))
    b = math.sqrt(s1 * (s1 + 2.0))
    delta = 0.0 if a + b == 0.0 else (s0 - s1) ** 2 / (a + b) ** 2
    omega = 1.0 / (1.0 - delta)
    log_omega = -math.log1p(-delta)
    lam = (2.0 * (math.sqrt(cell.r0) - math.sqrt(cell.r1)) ** 2
           / (2.0 + s0 + s1))
    return 1.0 + s0, 1.0 + s1, omega, lam, log_omega


def fidelity_params(cell: CellSpec) -> FidelityParams:
    """Fidelity factors (xi0, xi1, omega, lam) of a memory cell.

    For a pure-loss cell omega collapses to 1 and lam to
    (sqrt(r0) - sqrt(r1))**2; environment photons and added noise push
    omega above 1, which is what makes the bound bandwidth-dependent.
    """
    xi0, xi1, omega, lam, _ = _stable_parts(cell)
    return FidelityParams(xi0=xi0, xi1=xi1, omega=omega, lam=lam)


def coherent_output_fidelity(cell: CellSpec, n_s: float) -> float:
    """Fidelity between the two cell outputs for a coherent probe of energy n_s."""
    if n_s < 0.0:
        raise ValueError("n_s must be nonnegative")
    p = fidelity_params(cell)
    return math.exp(-p.lam * n_s) / p.omega


def classical_bound(cell: CellSpec, m: float, energy_n: float) -> BoundValue:
    """Least error probability reachable with classical light.

    Args:
        cell: memory-cell parameters.
        m: number of signal modes the energy is spread over (a real
            >= 1, so mode caps like 5e6 can be passed straight in).
        energy_n: total mean photon number across all modes.

    The m-mode coherent fidelity power F(N/m)**m is evaluated in the
    log domain, exp(-m*ln(omega) - lam*N), so huge m cannot underflow
    part-way through; for a pure-loss cell the exponent loses its m
    dependence and every bandwidth gives the same bound.
    """
    if m < 1.0:
        raise ValueError("bandwidth m must be at least 1")
    if energy_n < 0.0:
        raise ValueError("energy_n must be nonnegative")
    _, _, _, lam, log_omega = _stable_parts(cell)
    z = math.exp(-m * log_omega - lam * energy_n)
    # z = F^m; rewrite (1 - sqrt(1 - z))/2 to stay exact for tiny z
    value = z / (2.0 * (1.0 + math.sqrt(max(0.0, 1.0 - z))))
    meta = {"cell": cell, "m": float(m), "energy_n": float(energy_n),
            "model": "pure-loss" if cell.is_pure_loss else "thermal-loss"}
    return BoundValue(value=value, meta=meta)
