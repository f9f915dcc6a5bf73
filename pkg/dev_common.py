"""Shared dev-probe helpers (quiet on import)."""
import math

from qread.fock import apply_channel_fock, tmsv_fock


def g_t(nu, t):
    if abs(nu - 1.0) < 1e-9:
        return 1.0
    return 2.0 ** t / ((nu + 1.0) ** t - (nu - 1.0) ** t)


def lam_t(nu, t):
    if abs(nu - 1.0) < 1e-9:
        return 1.0
    return ((nu + 1.0) ** t + (nu - 1.0) ** t) / ((nu + 1.0) ** t - (nu - 1.0) ** t)


def closed_overlap(abc0, abc1, t):
    out = 1.0
    rebuilt = []
    for (a_, b_, c_), tt in ((abc0, t), (abc1, 1.0 - t)):
        s = math.sqrt((a_ + b_) ** 2 - 4 * c_ ** 2)
        nu1 = (s + (a_ - b_)) / 2
        nu2 = (s - (a_ - b_)) / 2
        out *= g_t(nu1, tt) * g_t(nu2, tt)
        c2 = (a_ + b_) / s
        s2 = 2 * c_ / s
        l1, l2 = lam_t(nu1, tt), lam_t(nu2, tt)
        rebuilt.append(((c2 * (l1 + l2) + (l1 - l2)) / 2,
                        (c2 * (l1 + l2) - (l1 - l2)) / 2,
                        s2 * (l1 + l2) / 2))
    ab = (rebuilt[0][0] + rebuilt[1][0]) / 2
    bb = (rebuilt[0][1] + rebuilt[1][1]) / 2
    cb = (rebuilt[0][2] + rebuilt[1][2]) / 2
    return out / (ab * bb - cb ** 2)


def conditional_state(cell, u, ns, d):
    """Fock-side analogue of the round-trip signal/idler channel chain."""
    rho = tmsv_fock(ns, d)
    if cell.eps > 0:
        rho = apply_channel_fock(rho, eps=cell.eps, target="signal")
    rho = apply_channel_fock(rho, r=cell.reflectivity(u), nbar=cell.nbar,
                             eps=cell.eps, target="signal")
    if cell.eps > 0:
        rho = apply_channel_fock(rho, eps=2 * cell.eps, target="idler")
    return rho
