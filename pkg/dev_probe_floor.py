"""Dev probe: is the extreme-t overlap error eigh noise or truncation?"""
import time

import numpy as np

from qread.fock import tmsv_fock, apply_channel_fock
from qread.gaussian import CellSpec, conditional_output_blocks

from dev_probe_fock import closed_overlap, conditional_state


def overlap_floor(rho0, rho1, t, floor):
    w0, u0 = np.linalg.eigh(rho0.matrix)
    w1, u1 = np.linalg.eigh(rho1.matrix)
    w0 = np.clip(w0, 0.0, None)
    w1 = np.clip(w1, 0.0, None)
    w0[w0 < floor * w0.max()] = 0.0
    w1[w1 < floor * w1.max()] = 0.0
    cross = np.abs(u0.conj().T @ u1) ** 2
    return float((w0 ** t) @ cross @ (w1 ** (1.0 - t)))


cases = [
    (0.3, 0.5, 0.5, 1e-5, 1e-5, (28, 32)),
    (0.85, 1.0, 2.0, 1e-2, 1e-2, (40, 48)),
    (0.5, 0.85, 2.0, 1e-2, 1e-2, (40, 48)),
]
for r0, r1, ns, nbar, eps, dims in cases:
    cell = CellSpec(r0=r0, r1=r1, nbar=nbar, eps=eps)
    for d in dims:
        t0 = time.time()
        s0 = conditional_state(cell, 0, ns, d)
        s1 = conditional_state(cell, 1, ns, d)
        for t in (0.1, 0.9):
            want = closed_overlap(conditional_output_blocks(cell, 0, ns),
                                  conditional_output_blocks(cell, 1, ns), t)
            line = f"  r0={r0} r1={r1} ns={ns} eps={eps} d={d} t={t}: want={want:.9e} "
            for floor in (1e-13, 1e-11, 1e-9):
                got = overlap_floor(s0, s1, t, floor)
                line += f"fl{floor:.0e}:{abs(got - want) / want:.2e} "
            print(line + f"({time.time()-t0:.0f}s)")
