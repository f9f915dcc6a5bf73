"""Dev probe: full overlap validation grid, fock oracle vs gaussian closed form.

Also cross-checks qread.quantum.gaussian_overlap against the inline dev
reference formula, so a disagreement localises immediately.
"""
import time

import numpy as np

from dev_common import closed_overlap, conditional_state
from qread.fock import overlap_fock, state_moments
from qread.gaussian import (CellSpec, GaussianState, conditional_output_blocks,
                            conditional_output_cm)
from qread.quantum import gaussian_overlap

T_GRID = (0.1, 0.5, 0.9)
R_SET = (0.0, 0.3, 0.5, 0.85, 1.0)


def run_block(label, nbar, eps, ns, d, pairs):
    t0 = time.time()
    states = {}
    for r in sorted({r for p in pairs for r in p}):
        cell = CellSpec(r0=r, r1=1.0, nbar=nbar, eps=eps)
        s = conditional_state(cell, 0, ns, d)
        _, cm = state_moments(s)
        err = np.max(np.abs(cm - conditional_output_cm(cell, 0, ns)))
        s.eigensystem()
        states[r] = s
        print(f"  [{label}] prep r={r}: cm_err={err:.2e} deficit={s.trace_deficit:.2e} "
              f"rank={s.eigensystem()[0].size} ({time.time()-t0:.0f}s)", flush=True)
    worst = 0.0
    for r0, r1 in pairs:
        cell = CellSpec(r0=r0, r1=r1, nbar=nbar, eps=eps)
        g0 = GaussianState(np.zeros(4), conditional_output_cm(cell, 0, ns))
        g1 = GaussianState(np.zeros(4), conditional_output_cm(cell, 1, ns))
        for t in T_GRID:
            got = overlap_fock(states[r0], states[r1], t)
            want = gaussian_overlap(g0, g1, t).value
            ref = closed_overlap(conditional_output_blocks(cell, 0, ns),
                                 conditional_output_blocks(cell, 1, ns), t)
            rel = abs(got - want) / want
            xchk = abs(want - ref) / ref
            worst = max(worst, rel)
            flag = "ok" if rel < 1e-6 else "FAIL"
            print(f"  [{label}] ({r0},{r1}) t={t}: rel={rel:.2e} {flag} "
                  f"(quantum-vs-ref {xchk:.1e})", flush=True)
    print(f"  [{label}] worst={worst:.2e} total {time.time()-t0:.0f}s", flush=True)


ALL_PAIRS = [(a, b) for i, a in enumerate(R_SET) for b in R_SET[i + 1:]]

run_block("pure ns=2 d=48", 0.0, 0.0, 2.0, 48, ALL_PAIRS)
run_block("th1e-5 ns=0.5 d=36", 1e-5, 1e-5, 0.5, 36,
          [(0.0, 0.3), (0.0, 0.5), (0.3, 0.5)])
run_block("th1e-2 ns=1 d=36", 1e-2, 1e-2, 1.0, 36,
          [(0.0, 0.3), (0.3, 0.5), (0.3, 0.85), (0.3, 1.0), (0.5, 1.0)])
run_block("nbar1e-2 ns=1 d=36", 1e-2, 0.0, 1.0, 36,
          [(0.0, 1.0), (0.3, 0.5), (0.5, 0.85), (0.85, 1.0)])
run_block("eps1e-5 ns=1 d=36", 0.0, 1e-5, 1.0, 36,
          [(0.3, 0.5), (0.5, 0.85)])
