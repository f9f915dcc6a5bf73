"""Truncated number-basis oracle for one- and two-mode states.

Everything here works on explicit density matrices in a photon-number
basis cut off at ``d`` levels per mode.  It is deliberately brute force:
channels act through explicit Kraus sums, moments through operator
traces, error probabilities through full diagonalisation.  The point is
to have a slow, independent check for the closed-form phase-space
results, so nothing in this module may import from the modules it is
meant to validate (only :mod:`qread.gaussian` primitives for moment
comparison are fair game, since those are tested on their own).

Index layout: a two-mode matrix has row index ``m * d + i`` for signal
level ``m`` and idler level ``i`` (signal is the leading factor).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss
from scipy.linalg import expm
from scipy.linalg.lapack import zpstrf

from .errors import CutoffTooSmallError, OracleAccuracyError
from .gaussian import CellSpec

__all__ = [
    "FockDensity",
    "suggested_cutoff",
    "tmsv_fock",
    "coherent_fock",
    "apply_channel_fock",
    "conditional_output_fock",
    "state_moments",
    "helstrom_error_fock",
    "overlap_fock",
    "fidelity_fock",
    "loss_kraus_defect",
]

#: per-mode dimension above which dense two-mode work stops being desk scale
MAX_CUTOFF = 64
#: eigenvalue clamping: total negative mass above this aborts instead of hiding
CLAMP_BUDGET = 1e-8
#: quadrature moment agreement demanded of the additive-noise Kraus set
MOMENT_TOL = 1e-6
_NOISE_ORDER = 20
_NOISE_ORDER_MAX = 80
_THERMAL_ANCILLA_TAIL = 1e-10
#: spectral weights below this fraction of the leading one are dropped
#: (pivoted-Cholesky route / exact-half-factor route); the second floor
#: can sit much lower because the half factor has no assembly noise
_EIG_FLOOR_REL = 1e-14
_HALF_FLOOR_REL = 1e-24
#: widest half factor worth carrying before falling back to refactoring
_HALF_MAX_COLS = 512


@dataclass(frozen=True)
class FockDensity:
    """Density matrix truncated to ``cutoff`` levels per mode.

    ``trace_deficit`` records probability mass known to live outside the
    truncation (from state preparation tails and channel leakage past the
    top level); the stored matrix is *not* renormalised.

    ``half``, when present, is an exact factor ``matrix = half @ half^H``
    carried along from construction (a pure state's vector, or its images
    under a Kraus family).  It lets the spectral routines resolve the
    deep tail of the spectrum with relative accuracy, which no
    factorisation recovered from the assembled matrix alone can do.
    """

    cutoff: int
    n_modes: int
    matrix: np.ndarray
    trace_deficit: float = 0.0
    half: np.ndarray | None = field(default=None, repr=False, compare=False)
    _eig: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.n_modes not in (1, 2):
            raise ValueError("only 1- and 2-mode states are supported")
        if not (1 <= self.cutoff <= MAX_CUTOFF):
            raise ValueError(f"cutoff must be in [1, {MAX_CUTOFF}]")
        dim = self.cutoff ** self.n_modes
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (dim, dim):
            raise ValueError(f"matrix must be {dim}x{dim} for this cutoff")
        if not np.allclose(m, m.conj().T, atol=1e-10):
            raise ValueError("matrix must be Hermitian")
        m = 0.5 * (m + m.conj().T)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        if self.half is not None:
            h = np.asarray(self.half, dtype=complex)
            if h.ndim != 2 or h.shape[0] != dim:
                raise ValueError(f"half factor must be {dim}xK")
            if abs(np.linalg.norm(h) ** 2 - self.trace()) > 1e-8:
                raise ValueError("half factor trace disagrees with matrix")
            h.flags.writeable = False
            object.__setattr__(self, "half", h)

    @property
    def dim(self) -> int:
        return self.cutoff ** self.n_modes

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def eigensystem(self):
        """Nonnegative spectral decomposition, computed once per instance.

        Returns ``(w, u)`` with ``w[i] >= 0`` paired to column ``u[:, i]``;
        zero directions are dropped, so ``u`` may have fewer columns than
        rows.  Raises :class:`OracleAccuracyError` if the negative-mass
        total exceeds the clamp budget (that means the truncation is
        untrustworthy, not merely noisy).

        When an exact half factor is available (pure states and their
        images under loss, where the Kraus sum *is* a factorisation),
        the spectrum comes from its SVD and is relatively accurate to
        the full depth of the grading.  Otherwise the matrix goes
        through pivoted Cholesky — twice, the second pass on the
        residual left by the first — because one pass stops at the
        stability threshold ``n * eps * max(diag)`` and the band just
        below it still contributes through fractional powers: a plain
        Hermitian diagonalisation only bounds the absolute error, and a
        1e-16 absolute slip turns into 2.5e-2 after ``w ** 0.1``.
        Directions whose weight falls below a floor relative to the
        leading eigenvalue are noise on exact zeros (their true relative
        error is unbounded), so they are removed rather than amplified.
        """
        if self._eig is None:
            if self.half is not None:
                u, sv, _ = np.linalg.svd(self.half, full_matrices=False)
                w = sv ** 2
                keep = w >= _HALF_FLOOR_REL * w[0]
                object.__setattr__(self, "_eig", (w[keep], u[:, keep]))
                return self._eig
            mat = np.ascontiguousarray(self.matrix, dtype=np.complex128)
            pieces = []
            captured = 0.0
            for _ in range(2):
                chol, piv, rank, info = zpstrf(mat, lower=1)
                if info < 0:
                    raise OracleAccuracyError(
                        f"pivoted Cholesky rejected argument {-info}"
                    )
                part = np.zeros((mat.shape[0], rank), dtype=np.complex128)
                part[piv - 1, :] = np.tril(chol)[:, :rank]
                pieces.append(part)
                captured += float(np.linalg.norm(part) ** 2)
                mat = mat - part @ part.conj().T
                mat = 0.5 * (mat + mat.conj().T)
            # trace not captured by the factors: genuine sub-pivot tail
            # plus any negative contamination, both of which must stay
            # inside the clamp budget for the spectrum to be trusted
            dropped = self.trace() - captured
            if abs(dropped) > CLAMP_BUDGET:
                raise OracleAccuracyError(
                    f"spectral mass {dropped:.3e} outside the factored "
                    f"range exceeds clamp budget {CLAMP_BUDGET:.0e}; "
                    "increase the cutoff"
                )
            u, sv, _ = np.linalg.svd(np.hstack(pieces), full_matrices=False)
            w = sv ** 2
            keep = w >= _EIG_FLOOR_REL * w[0]
            object.__setattr__(self, "_eig", (w[keep], u[:, keep]))
        return self._eig


def suggested_cutoff(n_s: float) -> int:
    """Per-mode truncation for a two-mode squeezed source of energy ``n_s``.

    Smallest ``d`` whose Schmidt tail falls below 1e-10, doubled once so
    channels have headroom to push population upward, floored at 8 and
    capped at :data:`MAX_CUTOFF`.
    """
    if n_s < 0:
        raise ValueError("n_s must be nonnegative")
    tau = n_s / (n_s + 1.0)
    if tau == 0.0:
        base = 1
    else:
        base = max(1, math.ceil(math.log(1e-10) / math.log(tau)))
    return int(min(MAX_CUTOFF, max(8, 2 * base)))


def tmsv_fock(n_s: float, cutoff: int, tail_budget: float = 1e-6) -> FockDensity:
    """Two-mode squeezed vacuum of mean signal energy ``n_s``, truncated.

    The Schmidt weight beyond the cutoff, ``(n_s/(n_s+1))**cutoff``, is
    recorded as the trace deficit; if it exceeds ``tail_budget`` the
    truncation is refused outright.
    """
    if n_s < 0:
        raise ValueError("n_s must be nonnegative")
    tau = n_s / (n_s + 1.0)
    deficit = tau ** cutoff
    if deficit > tail_budget:
        raise CutoffTooSmallError(
            f"cutoff {cutoff} leaves tail {deficit:.3e} > budget {tail_budget:.0e} "
            f"for n_s={n_s}"
        )
    n = np.arange(cutoff)
    amps = np.sqrt((1.0 - tau)) * tau ** (0.5 * n)
    psi = np.zeros((cutoff, cutoff))
    psi[n, n] = amps
    vec = psi.reshape(-1)
    return FockDensity(cutoff, 2, np.outer(vec, vec), trace_deficit=float(deficit),
                       half=vec[:, None])


def coherent_fock(alpha: complex, cutoff: int, tail_budget: float = 1e-6) -> FockDensity:
    """Single-mode coherent state ``|alpha>`` truncated to ``cutoff`` levels."""
    alpha = complex(alpha)
    n = np.arange(cutoff)
    log_fact = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, cutoff)))))
    mag = abs(alpha)
    if mag == 0.0:
        amps = np.zeros(cutoff)
        amps[0] = 1.0
        deficit = 0.0
    else:
        log_amps = -0.5 * mag ** 2 + n * math.log(mag) - 0.5 * log_fact
        amps = np.exp(log_amps) * np.exp(1j * n * np.angle(alpha))
        deficit = 1.0 - float(np.sum(np.abs(amps) ** 2))
    if deficit > tail_budget:
        raise CutoffTooSmallError(
            f"cutoff {cutoff} leaves tail {deficit:.3e} > budget {tail_budget:.0e} "
            f"for |alpha|={mag}"
        )
    return FockDensity(cutoff, 1, np.outer(amps, amps.conj()),
                       trace_deficit=max(deficit, 0.0), half=amps[:, None])


# ---------------------------------------------------------------------------
# Kraus machinery.
#
# Photon-loss and thermal-contact Kraus operators are banded: each one maps
# |m> to |m + s> for a fixed shift s.  Sandwiching the state between all
# operators of one shift class reduces to an elementwise multiply by the
# Gram matrix W_s[m, n] = sum_q c_q[m] conj(c_q[n]), applied to the block of
# the density tensor that the shift moves.  That keeps the thermal channel
# exact (up to the ancilla tail) and cheap.
# ---------------------------------------------------------------------------


def _loss_coefficient_table(r: float, d: int) -> list[np.ndarray]:
    """coeffs[k][m] = <m-k| A_k |m> for the transmissivity-``r`` loss channel."""
    lg = np.cumsum(np.concatenate(([0.0], np.log(np.arange(1, d)))))
    tables = []
    for k in range(d):
        m = np.arange(d, dtype=float)
        coef = np.zeros(d)
        valid = np.arange(d) >= k
        mv = m[valid]
        log_binom = lg[valid.nonzero()[0]] - lg[k] - lg[(mv - k).astype(int)]
        if r == 0.0:
            # only m == k survives: r**(m-k) -> 0**0
            coef[k] = 1.0
        elif r == 1.0:
            if k == 0:
                coef[:] = 1.0
        else:
            log_c = 0.5 * (log_binom + (mv - k) * math.log(r) + k * math.log1p(-r))
            coef[valid] = np.exp(log_c)
        tables.append(coef)
    return tables


def _sector_bs_unitaries(theta: float, n_max: int) -> list[np.ndarray]:
    """exp(theta (a^dag b - a b^dag)) restricted to each total-photon sector."""
    out = []
    for n in range(n_max + 1):
        g = np.zeros((n + 1, n + 1))
        for m in range(n):
            val = math.sqrt((m + 1) * (n - m))
            g[m + 1, m] = val
            g[m, m + 1] = -val
        out.append(expm(theta * g))
    return out


@lru_cache(maxsize=32)
def _attenuator_grams(r: float, nbar: float, d: int) -> list[tuple[int, np.ndarray]]:
    """Shift-classed Gram matrices of the attenuator's Kraus set.

    Returns ``[(shift, W)]`` with ``W[m, n]`` real; only shifts whose
    image intersects the truncation are kept.
    """
    if nbar == 0.0:
        grams = []
        for k, coef in enumerate(_loss_coefficient_table(r, d)):
            if not coef.any():
                continue
            grams.append((-k, np.outer(coef, coef)))
        return grams
    tau = nbar / (nbar + 1.0)
    n_anc = max(1, math.ceil(math.log(_THERMAL_ANCILLA_TAIL) / math.log(tau)))
    probs = (1.0 - tau) * tau ** np.arange(n_anc)
    theta = math.acos(math.sqrt(r))
    unitaries = _sector_bs_unitaries(theta, d - 1 + n_anc - 1)
    by_shift: dict[int, np.ndarray] = {}
    for k in range(n_anc):
        for j in range(d + n_anc - 1):
            s = k - j
            coef = np.zeros(d)
            for m in range(d):
                n_tot = m + k
                if j > n_tot or not (0 <= m + s < d):
                    continue
                coef[m] = math.sqrt(probs[k]) * unitaries[n_tot][m + s, m]
            if not coef.any():
                continue
            acc = by_shift.setdefault(s, np.zeros((d, d)))
            acc += np.outer(coef, coef)
    return sorted(by_shift.items())


def loss_kraus_defect(r: float, nbar: float, d: int) -> float:
    """sup-norm distance of sum_q A_q^dag A_q from the identity.

    For the pure-loss family this is a rounding-level number; thermal
    contact only closes to within its ancilla tail plus top-boundary
    leakage, so callers validating it should restrict attention to the
    levels they actually populate.
    """
    # sum_q A^dag A is diagonal with entries W_s[m, m] summed over shifts
    total = np.zeros(d)
    for _, w in _attenuator_grams(r, nbar, d):
        total += np.diag(w)
    return float(np.max(np.abs(total - 1.0)))


@lru_cache(maxsize=3)
def _noise_superop(eps: float, d: int, order: int) -> np.ndarray:
    """One-mode superoperator for classical Gaussian displacement noise.

    The channel averages displacements with quadrature variance ``eps``
    per axis; a 2-D Gauss-Hermite rule turns that into a finite Kraus
    set whose sandwich action is folded into a single (d^2, d^2) matrix,
    so applying the channel costs one matrix product regardless of how
    fine the rule is.
    """
    nodes, weights = hermgauss(order)
    n = np.arange(d)
    a = np.diag(np.sqrt(n[1:]).astype(complex), 1)
    adag = a.conj().T
    scale = math.sqrt(2.0 * eps)
    stack = np.empty((order * order, d * d), dtype=complex)
    for i in range(order):
        for j in range(order):
            alpha = 0.5 * scale * (nodes[i] + 1j * nodes[j])
            disp = expm(alpha * adag - np.conj(alpha) * a)
            stack[i * order + j] = (math.sqrt(weights[i] * weights[j] / math.pi)
                                    * disp).reshape(-1)
    # gram[(m'm), (n'n)] = sum_q K_q[m', m] conj(K_q[n', n]); regrouping the
    # indices as (m'n'), (mn) yields the superoperator of rho -> sum K rho K^dag
    gram = stack.T @ stack.conj()
    return np.ascontiguousarray(
        gram.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d))


def _apply_banded(tensor: np.ndarray, grams, axis: int, d: int) -> np.ndarray:
    """Apply one shift-classed Gram family to ``axis`` of the density tensor."""
    n_modes = tensor.ndim // 2
    out = np.zeros_like(tensor)
    for s, w in grams:
        lo, hi = max(0, -s), d - max(0, s)
        if hi <= lo:
            continue
        src, dst = slice(lo, hi), slice(lo + s, hi + s)
        block = w[src, src]
        if n_modes == 1:
            out[dst, dst] += block * tensor[src, src]
        elif axis == 0:
            out[dst, :, dst, :] += block[:, None, :, None] * tensor[src, :, src, :]
        else:
            out[:, dst, :, dst] += block[None, :, None, :] * tensor[:, src, :, src]
    return out


def _loss_half_images(half: np.ndarray, r: float, d: int, axis: int,
                      n_modes: int) -> np.ndarray:
    """Images of a half factor's columns under every loss Kraus operator.

    The result is again an exact factor of the output density matrix,
    with one block of columns per photon-subtraction count.
    """
    ct = _loss_coefficient_table(r, d)
    c = half.shape[1]
    if n_modes == 1:
        out = np.zeros((d, c * d), dtype=complex)
        for k in range(d):
            out[:d - k, k * c:(k + 1) * c] = ct[k][k:, None] * half[k:, :]
        return out
    h3 = half.reshape(d, d, c)
    out = np.zeros((d, d, c * d), dtype=complex)
    for k in range(d):
        if axis == 0:
            out[:d - k, :, k * c:(k + 1) * c] = ct[k][k:, None, None] * h3[k:, :, :]
        else:
            out[:, :d - k, k * c:(k + 1) * c] = ct[k][None, k:, None] * h3[:, k:, :]
    return out.reshape(d * d, c * d)


def _apply_superop(tensor: np.ndarray, sop: np.ndarray, axis: int) -> np.ndarray:
    """Apply a one-mode superoperator to ``axis`` of the density tensor."""
    n_modes = tensor.ndim // 2
    d = tensor.shape[0]
    if n_modes == 1:
        return (sop @ tensor.reshape(-1)).reshape(d, d)
    if axis == 0:
        perm, inv = (0, 2, 1, 3), (0, 2, 1, 3)
    else:
        perm, inv = (1, 3, 0, 2), (2, 0, 3, 1)
    flat = np.ascontiguousarray(tensor.transpose(perm)).reshape(d * d, d * d)
    out = (sop @ flat).reshape(d, d, d, d)
    return out.transpose(inv)


def apply_channel_fock(rho: FockDensity, r: float = 1.0, nbar: float = 0.0,
                       eps: float = 0.0, target: str = "signal") -> FockDensity:
    """Push a state through loss/thermal contact followed by additive noise.

    Applies the transmissivity-``r`` attenuator with environment energy
    ``nbar``, then classical displacement noise of quadrature variance
    ``eps``, to one mode of the state.  The attenuator stage is exact on
    the truncated space; the noise stage is quadrature-based and
    self-checks its output moments against the known Gaussian action,
    escalating the rule order and finally raising
    :class:`OracleAccuracyError` rather than returning a silent miss.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("transmissivity r must be in [0, 1]")
    if nbar < 0.0 or eps < 0.0:
        raise ValueError("nbar and eps must be nonnegative")
    if target not in ("signal", "idler"):
        raise ValueError("target must be 'signal' or 'idler'")
    if target == "idler" and rho.n_modes != 2:
        raise ValueError("idler target requires a two-mode state")
    axis = 0 if target == "signal" else 1
    d = rho.cutoff
    shape = (d,) * (2 * rho.n_modes)
    tensor = rho.matrix.reshape(shape)
    half = rho.half

    if r < 1.0:  # unit transmissivity ignores the environment entirely
        tensor = _apply_banded(tensor, _attenuator_grams(r, nbar, d), axis, d)
        if (half is not None and nbar == 0.0
                and half.shape[1] * d <= _HALF_MAX_COLS):
            half = _loss_half_images(half, r, d, axis, rho.n_modes)
        else:
            half = None

    if eps > 0.0:
        half = None  # displacement noise has no finite Kraus family
        pre = FockDensity(d, rho.n_modes,
                          tensor.reshape(rho.matrix.shape), trace_deficit=0.0)
        mean_in, cm_in = state_moments(pre)
        cm_want = cm_in.copy()
        blk = slice(2 * axis, 2 * axis + 2)
        cm_want[blk, blk] += eps * np.eye(2)
        # the residual mixes quadrature error (shrinks with the rule
        # order) with truncation bias already present in the input
        # (population near the cutoff is displaced past it, worth about
        # deficit * d in the second moments), so the acceptance
        # threshold has to carry a deficit term or a hot-but-honest
        # input would be misreported as a quadrature failure
        tol = max(MOMENT_TOL, 4.0 * max(rho.trace_deficit, 0.0) * d)
        order = _NOISE_ORDER
        while True:
            candidate = _apply_superop(tensor, _noise_superop(eps, d, order), axis)
            post = FockDensity(d, rho.n_modes,
                               candidate.reshape(rho.matrix.shape))
            mean_out, cm_out = state_moments(post)
            err = max(np.max(np.abs(mean_out - mean_in)),
                      np.max(np.abs(cm_out - cm_want)))
            if err < tol:
                tensor = candidate
                break
            order *= 2
            if order > _NOISE_ORDER_MAX:
                raise OracleAccuracyError(
                    f"noise stage self-check residual {err:.3e} exceeds "
                    f"tolerance {tol:.0e} at quadrature order "
                    f"{order // 2}; increase the cutoff"
                )

    matrix = tensor.reshape(rho.matrix.shape)
    matrix = 0.5 * (matrix + matrix.conj().T)
    deficit = rho.trace_deficit + (rho.trace() - float(np.trace(matrix).real))
    return FockDensity(d, rho.n_modes, matrix, trace_deficit=float(deficit),
                       half=half)


def state_moments(rho: FockDensity) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature mean vector and covariance matrix of a truncated state.

    Uses the (q1, p1, q2, p2) ordering and vacuum-variance-1 scaling;
    moments are normalised by the retained trace so mild truncation does
    not bias them.
    """
    d = rho.cutoff
    n = np.arange(d)
    a = np.diag(np.sqrt(n[1:]).astype(complex), 1)
    q = a + a.conj().T
    p = 1j * (a.conj().T - a)
    quads = [q, p]
    tr = rho.trace()
    if tr <= 0.0:
        raise OracleAccuracyError("state has nonpositive trace")

    if rho.n_modes == 1:
        def expect(op):
            return complex(np.trace(rho.matrix @ op)) / tr
        ops = quads
    else:
        tensor = rho.matrix.reshape(d, d, d, d)
        eye = np.eye(d, dtype=complex)

        def expect(pair):
            sig, idl = pair
            return complex(np.einsum("minj,nm,ji->", tensor, sig, idl)) / tr
        ops = [(q, eye), (p, eye), (eye, q), (eye, p)]

    size = 2 * rho.n_modes
    mean = np.array([expect(o).real for o in ops])
    cm = np.empty((size, size))
    for i in range(size):
        for j in range(i, size):
            if rho.n_modes == 1:
                prod = ops[i] @ ops[j]
            else:
                prod = (ops[i][0] @ ops[j][0], ops[i][1] @ ops[j][1])
            sym = expect(prod).real  # Re<x_i x_j> = <{x_i,x_j}>/2 for Hermitian rho
            cm[i, j] = cm[j, i] = sym - mean[i] * mean[j]
    return mean, cm


def helstrom_error_fock(rho0: FockDensity, rho1: FockDensity) -> float:
    """Minimum error probability for equiprobable discrimination."""
    if rho0.matrix.shape != rho1.matrix.shape:
        raise ValueError("states must share cutoff and mode count")
    gap = np.linalg.eigvalsh(rho0.matrix - rho1.matrix)
    return float(0.5 * (1.0 - 0.5 * np.sum(np.abs(gap))))


def overlap_fock(rho0: FockDensity, rho1: FockDensity, t: float) -> float:
    """Tr[rho0^t rho1^(1-t)] by direct diagonalisation.

    Repeated calls on the same pair reuse each state's cached
    eigensystem, so sweeping ``t`` costs one matrix product per value.
    """
    if rho0.matrix.shape != rho1.matrix.shape:
        raise ValueError("states must share cutoff and mode count")
    if not 0.0 < t < 1.0:
        raise ValueError("t must lie strictly between 0 and 1")
    w0, u0 = rho0.eigensystem()
    w1, u1 = rho1.eigensystem()
    cross = np.abs(u0.conj().T @ u1) ** 2
    return float((w0 ** t) @ cross @ (w1 ** (1.0 - t)))


def fidelity_fock(rho0: FockDensity, rho1: FockDensity) -> float:
    """Uhlmann fidelity (squared-sqrt convention) of two truncated states."""
    if rho0.matrix.shape != rho1.matrix.shape:
        raise ValueError("states must share cutoff and mode count")
    w0, u0 = rho0.eigensystem()
    root = (u0 * np.sqrt(w0)) @ u0.conj().T
    inner = root @ rho1.matrix @ root
    inner = 0.5 * (inner + inner.conj().T)
    vals = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    # the square root amplifies diagonalisation noise on exact zeros
    # (sqrt(1e-16) = 1e-8 apiece), so drop sub-noise values first
    if vals.size and vals[-1] > 0.0:
        vals[vals < 1e-14 * vals[-1]] = 0.0
    return float(np.sum(np.sqrt(vals)) ** 2)


def conditional_output_fock(cell: CellSpec, u: int, n_s: float,
                            cutoff: int) -> FockDensity:
    """Number-basis output state of a probed cell, built channel by channel.

    The probe is a two-mode squeezed-vacuum state; the signal mode picks
    up additive noise ``eps`` on the way in, meets the cell as an
    attenuator of reflectivity ``r_u`` with environment energy ``nbar``
    and another ``eps`` of noise on the way out, while the stored idler
    collects ``2 eps`` in its delay line.  This mirrors, stage by stage,
    the covariance-matrix composition the phase-space side uses, but
    entirely through truncated Kraus sums.
    """
    rho = tmsv_fock(n_s, cutoff)
    if cell.eps > 0.0:
        rho = apply_channel_fock(rho, eps=cell.eps, target="signal")
    rho = apply_channel_fock(rho, r=cell.reflectivity(u), nbar=cell.nbar,
                             eps=cell.eps, target="signal")
    if cell.eps > 0.0:
        rho = apply_channel_fock(rho, eps=2.0 * cell.eps, target="idler")
    return rho
