"""Dev probe: LDL+SVD (rank-revealing) eigensystem vs plain eigh for overlaps."""
import time

import numpy as np
import scipy.linalg


def rrd_eigensystem(mat):
    lu, dblk, _ = scipy.linalg.ldl(mat, lower=True)
    n = mat.shape[0]
    cols = []
    i = 0
    while i < n:
        if i + 1 < n and dblk[i + 1, i] != 0.0:
            w, v = np.linalg.eigh(dblk[i:i + 2, i:i + 2])
            for k in range(2):
                if w[k] > 0.0:
                    cols.append((i, np.sqrt(w[k]) * v[:, k]))
            i += 2
        else:
            val = dblk[i, i].real
            if val > 0.0:
                e = np.zeros(1, dtype=complex)
                e[0] = np.sqrt(val)
                cols.append((i, e))
            i += 1
    g = np.zeros((n, len(cols)), dtype=complex)
    for j, (i0, vec) in enumerate(cols):
        g[:, j] = lu[:, i0:i0 + len(vec)] @ vec
    u, sv, _ = np.linalg.svd(g, full_matrices=False)
    return sv ** 2, u


def overlap_pair(eig0, eig1, t, floor):
    w0, u0 = eig0
    w1, u1 = eig1
    w0 = w0.copy(); w1 = w1.copy()
    w0[w0 < floor * w0.max()] = 0.0
    w1[w1 < floor * w1.max()] = 0.0
    cross = np.abs(u0.conj().T @ u1) ** 2
    return float((w0 ** t) @ cross @ (w1 ** (1.0 - t)))


if __name__ == "__main__":
    from dev_common import closed_overlap, conditional_state
    from qread.gaussian import CellSpec, conditional_output_blocks

    cases = [
        (0.3, 0.5, 0.5, 1e-5, 1e-5, 32),
        (0.5, 0.85, 2.0, 1e-2, 1e-2, 48),
        (0.85, 1.0, 2.0, 1e-2, 1e-2, 48),
        (0.0, 1.0, 2.0, 1e-2, 1e-2, 48),
    ]
    for r0, r1, ns, nbar, eps, d in cases:
        cell = CellSpec(r0=r0, r1=r1, nbar=nbar, eps=eps)
        t0 = time.time()
        s0 = conditional_state(cell, 0, ns, d)
        s1 = conditional_state(cell, 1, ns, d)
        prep = time.time() - t0
        t0 = time.time()
        eig0 = rrd_eigensystem(s0.matrix)
        eig1 = rrd_eigensystem(s1.matrix)
        fact = time.time() - t0
        for t in (0.1, 0.9):
            want = closed_overlap(conditional_output_blocks(cell, 0, ns),
                                  conditional_output_blocks(cell, 1, ns), t)
            line = (f"  r0={r0} r1={r1} ns={ns} eps={eps} d={d} t={t}: ")
            for floor in (1e-24, 1e-18, 1e-14):
                got = overlap_pair(eig0, eig1, t, floor)
                line += f"fl{floor:.0e}:{abs(got - want) / want:.2e} "
            print(line + f"(prep {prep:.0f}s factor {fact:.0f}s)", flush=True)
