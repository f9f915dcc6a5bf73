"""Dev probe: why is the (r0=0, r1=1) pair inaccurate?"""
import time

import numpy as np

from dev_common import closed_overlap, conditional_state
from dev_probe_rrd import rrd_eigensystem, overlap_pair
from qread.fock import state_moments
from qread.gaussian import CellSpec, conditional_output_blocks, conditional_output_cm

ns = 2.0
for nbar, eps in ((0.0, 0.0), (1e-2, 1e-2)):
    cell = CellSpec(r0=0.0, r1=1.0, nbar=nbar, eps=eps)
    for d in (36, 44, 48):
        t0 = time.time()
        s0 = conditional_state(cell, 0, ns, d)
        s1 = conditional_state(cell, 1, ns, d)
        for u, s in ((0, s0), (1, s1)):
            _, cm = state_moments(s)
            err = np.max(np.abs(cm - conditional_output_cm(cell, u, ns)))
            print(f"  eps={eps} d={d} u={u}: cm_err={err:.2e} "
                  f"deficit={s.trace_deficit:.2e}", flush=True)
        eig0 = rrd_eigensystem(s0.matrix)
        eig1 = rrd_eigensystem(s1.matrix)
        for t in (0.1, 0.5, 0.9):
            want = closed_overlap(conditional_output_blocks(cell, 0, ns),
                                  conditional_output_blocks(cell, 1, ns), t)
            got = overlap_pair(eig0, eig1, t, 1e-24)
            print(f"  eps={eps} d={d} t={t}: got={got:.10e} want={want:.10e} "
                  f"rel={abs(got-want)/want:.2e} ({time.time()-t0:.0f}s)",
                  flush=True)
