"""Dev probe: validate fock oracle against independent ground truths."""
import math
import time

import numpy as np

from qread.fock import (
    FockDensity, tmsv_fock, coherent_fock, apply_channel_fock, state_moments,
    helstrom_error_fock, overlap_fock, fidelity_fock, loss_kraus_defect,
    suggested_cutoff,
)
from qread.gaussian import (
    CellSpec, make_tmsv, conditional_output_cm, conditional_output_blocks,
)

print("== suggested_cutoff ==")
for ns in (0.0, 0.5, 1.0, 2.0, 5.0):
    print(f"  n_s={ns}: {suggested_cutoff(ns)}")

print("== tmsv moments vs gaussian core ==")
for ns, d in ((0.5, 40), (1.0, 36), (2.0, 40)):
    rho = tmsv_fock(ns, d)
    mean, cm = state_moments(rho)
    err = max(np.max(np.abs(mean)), np.max(np.abs(cm - make_tmsv(ns).cm)))
    print(f"  n_s={ns} d={d}: deficit={rho.trace_deficit:.3e} max_moment_err={err:.3e}")

print("== loss kraus completeness ==")
for r in (0.0, 0.3, 0.85, 1.0):
    print(f"  r={r}: defect={loss_kraus_defect(r, 0.0, 40):.3e}")

print("== pure loss on signal: moments ==")
ns, d, r = 1.0, 36, 0.3
rho = apply_channel_fock(tmsv_fock(ns, d), r=r)
mean, cm = state_moments(rho)
mu = 2 * ns + 1
want = np.array([[r * mu + (1 - r), 0, math.sqrt(r) * 2 * math.sqrt(ns * (ns + 1)), 0],
                 [0, r * mu + (1 - r), 0, -math.sqrt(r) * 2 * math.sqrt(ns * (ns + 1))],
                 [math.sqrt(r) * 2 * math.sqrt(ns * (ns + 1)), 0, mu, 0],
                 [0, -math.sqrt(r) * 2 * math.sqrt(ns * (ns + 1)), 0, mu]])
print(f"  max cm err={np.max(np.abs(cm - want)):.3e} trace={rho.trace():.12f}")

print("== thermal attenuator on signal: moments ==")
t0 = time.time()
rho = apply_channel_fock(tmsv_fock(0.5, 32), r=0.3, nbar=1e-2)
mean, cm = state_moments(rho)
cell = CellSpec(r0=0.3, r1=1.0, nbar=1e-2, eps=0.0)
want = conditional_output_cm(cell, 0, 0.5)
print(f"  max cm err={np.max(np.abs(cm - want)):.3e} trace={rho.trace():.12f} "
      f"deficit={rho.trace_deficit:.3e} t={time.time()-t0:.2f}s")

print("== thermal at tiny nbar matches pure loss ==")
ra = apply_channel_fock(tmsv_fock(0.5, 32), r=0.3, nbar=1e-12)
rb = apply_channel_fock(tmsv_fock(0.5, 32), r=0.3)
print(f"  matrix diff={np.max(np.abs(ra.matrix - rb.matrix)):.3e}")

print("== noise channel: moments + trace ==")
t0 = time.time()
rho = apply_channel_fock(tmsv_fock(0.5, 32), eps=1e-2, target="signal")
mean, cm = state_moments(rho)
want = make_tmsv(0.5).cm + np.diag([1e-2, 1e-2, 0, 0])
print(f"  max cm err={np.max(np.abs(cm - want)):.3e} trace={rho.trace():.12f} "
      f"t={time.time()-t0:.2f}s")

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


print("== full chain vs conditional_output_cm ==")
for (r0, ns, nbar, eps, d) in ((0.3, 0.5, 1e-5, 1e-5, 32), (0.5, 2.0, 1e-2, 1e-2, 48)):
    t0 = time.time()
    cell = CellSpec(r0=r0, r1=1.0, nbar=nbar, eps=eps)
    rho = conditional_state(cell, 0, ns, d)
    mean, cm = state_moments(rho)
    want = conditional_output_cm(cell, 0, ns)
    print(f"  r0={r0} ns={ns} nbar={nbar} eps={eps} d={d}: "
          f"max cm err={np.max(np.abs(cm - want)):.3e} trace={rho.trace():.12f} "
          f"t={time.time()-t0:.2f}s")

print("== coherent overlap identities ==")
a, b = 0.7 + 0.2j, -0.1 + 0.5j
ra, rb = coherent_fock(a, 24), coherent_fock(b, 24)
want = math.exp(-abs(a - b) ** 2)
for t in (0.2, 0.5, 0.8):
    got = overlap_fock(ra, rb, t)
    print(f"  t={t}: overlap={got:.12f} want={want:.12f} err={abs(got-want):.3e}")
print(f"  fidelity={fidelity_fock(ra, rb):.12f} want={want:.12f}")
hel = helstrom_error_fock(ra, rb)
hel_want = 0.5 * (1 - math.sqrt(1 - want))
print(f"  helstrom={hel:.12f} want={hel_want:.12f} err={abs(hel-hel_want):.3e}")

print("== overlap vs inline standard-form closed form ==")


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


for (r0, r1, ns, nbar, eps, d) in ((0.0, 0.3, 1.0, 0.0, 0.0, 36),
                                   (0.3, 0.8, 0.5, 0.0, 0.0, 40),
                                   (0.3, 0.5, 0.5, 1e-5, 1e-5, 32),
                                   (0.5, 0.85, 2.0, 1e-2, 1e-2, 48),
                                   (0.85, 1.0, 2.0, 1e-2, 1e-2, 48)):
    t0 = time.time()
    cell = CellSpec(r0=r0, r1=r1, nbar=nbar, eps=eps)
    states = [conditional_state(cell, u, ns, d) for u in (0, 1)]
    prep = time.time() - t0
    t0 = time.time()
    rels = []
    for t in (0.1, 0.5, 0.9):
        got = overlap_fock(states[0], states[1], t)
        want = closed_overlap(conditional_output_blocks(cell, 0, ns),
                              conditional_output_blocks(cell, 1, ns), t)
        rels.append(abs(got - want) / want)
    print(f"  r0={r0} r1={r1} ns={ns} nbar={nbar} eps={eps} d={d}: "
          f"rel errs={['%.3e' % e for e in rels]} prep={prep:.2f}s "
          f"eval={time.time()-t0:.2f}s")
