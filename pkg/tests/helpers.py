"""Shared helpers for the test suite."""

from qread.fock import FockDensity, apply_channel_fock, tmsv_fock
from qread.gaussian import CellSpec


def conditional_fock(cell: CellSpec, u: int, n_s: float,
                     cutoff: int) -> FockDensity:
    """Number-basis conditional output state for memory value ``u``.

    Mirrors the round-trip channel model: noise on the way in, the
    memory-cell contact, noise on the way back, and the doubled noise on
    the retained idler arm.
    """
    rho = tmsv_fock(n_s, cutoff)
    if cell.eps > 0:
        rho = apply_channel_fock(rho, eps=cell.eps, target="signal")
    rho = apply_channel_fock(rho, r=cell.reflectivity(u), nbar=cell.nbar,
                             eps=cell.eps, target="signal")
    if cell.eps > 0:
        rho = apply_channel_fock(rho, eps=2 * cell.eps, target="idler")
    return rho
