"""Dev probe: deep pivoted-Cholesky + post-floor sweep on the failing rows."""
import time

import numpy as np

import qread.fock as fock
from dev_common import closed_overlap, conditional_state
from qread.fock import overlap_fock
from qread.gaussian import CellSpec, conditional_output_blocks

CASES = [
    ("pure ns=2 d=44", 0.3, 0.85, 2.0, 0.0, 0.0, 44),
    ("th1e-5 ns=0.5 d=32 a", 0.0, 1.0, 0.5, 1e-5, 1e-5, 32),
    ("th1e-5 ns=0.5 d=32 b", 0.85, 1.0, 0.5, 1e-5, 1e-5, 32),
    ("th1e-2 ns=1 d=36", 0.5, 0.85, 1.0, 1e-2, 1e-2, 36),
]

prepped = []
for label, r0, r1, ns, nbar, eps, d in CASES:
    cell = CellSpec(r0=r0, r1=r1, nbar=nbar, eps=eps)
    s0 = conditional_state(cell, 0, ns, d)
    s1 = conditional_state(cell, 1, ns, d)
    prepped.append((label, cell, ns, s0, s1))
    print(f"prepped {label}", flush=True)

for floor in (1e-12, 1e-14, 1e-16, 1e-18, 0.0):
    fock._EIG_FLOOR_REL = floor
    for label, cell, ns, s0, s1 in prepped:
        object.__setattr__(s0, "_eig", None)
        object.__setattr__(s1, "_eig", None)
        t0 = time.time()
        line = f"floor={floor:.0e} [{label}] "
        for t in (0.1, 0.5, 0.9):
            want = closed_overlap(conditional_output_blocks(cell, 0, ns),
                                  conditional_output_blocks(cell, 1, ns), t)
            got = overlap_fock(s0, s1, t)
            line += f"t{t}:{abs(got - want) / want:.1e} "
        ranks = (s0.eigensystem()[0].size, s1.eigensystem()[0].size)
        print(line + f"ranks={ranks} ({time.time()-t0:.0f}s)", flush=True)
