"""Gaussian phase-space toolkit: states, one-mode channels, memory-cell output map.

Conventions used throughout the package: quadratures are ordered
(q1, p1, q2, p2, ...), the commutator is [x, x^T] = 2i*Omega, and the vacuum
covariance matrix (CM) is the identity. A CM is physical iff V + i*Omega >= 0,
equivalently iff every symplectic eigenvalue is >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError

__all__ = [
    "SYMMETRY_TOL",
    "PHYSICALITY_TOL",
    "Z2",
    "symplectic_form",
    "GaussianState",
    "GaussianChannel",
    "CellSpec",
    "TransmitterSpec",
    "PhysicalityCheck",
    "identity_channel",
    "standard_form_blocks",
    "make_tmsv",
    "make_attenuator",
    "make_thermal_noise",
    "compose",
    "apply_bipartite",
    "conditional_output_blocks",
    "conditional_output_cm",
    "symplectic_eigenvalues",
    "check_physical",
]

#: Allowed asymmetry |V - V^T| in a covariance matrix.
SYMMETRY_TOL = 1e-12
#: Allowed dip of a symplectic eigenvalue below 1.
PHYSICALITY_TOL = 1e-9

#: Pauli-Z-like reflection acting on a single mode's (q, p) pair.
Z2 = np.diag([1.0, -1.0])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the 2n x 2n symplectic form Omega for ``n_modes`` modes.

    Omega is the direct sum of [[0, 1], [-1, 0]] blocks, matching the
    (q1, p1, q2, p2, ...) quadrature ordering.
    """
    if n_modes < 1:
        raise ValueError("n_modes must be a positive integer")
    omega1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        out[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = omega1
    return out


def standard_form_blocks(cm: np.ndarray, tol: float = 1e-10) -> tuple[float, float, float] | None:
    """Extract (a, b, c) if ``cm`` is a standard-form two-mode CM, else None.

    Standard form means diagonal blocks proportional to the identity and
    correlation block proportional to Z = diag(1, -1); the memory-cell
    outputs all have this shape.
    """
    cm = np.asarray(cm, dtype=float)
    if cm.shape != (4, 4):
        return None
    a = 0.5 * (cm[0, 0] + cm[1, 1])
    b = 0.5 * (cm[2, 2] + cm[3, 3])
    c = 0.5 * (cm[0, 2] - cm[1, 3])
    ref = np.zeros((4, 4))
    ref[:2, :2] = a * np.eye(2)
    ref[2:, 2:] = b * np.eye(2)
    ref[:2, 2:] = c * Z2
    ref[2:, :2] = c * Z2
    scale = max(abs(a), abs(b), abs(c), 1.0)
    if np.max(np.abs(cm - ref)) > tol * scale:
        return None
    return (float(a), float(b), float(c))


def _standard_form_spectrum(a: float, b: float, c: float) -> tuple[float, float]:
    """Symplectic pair of [[a I, c Z], [c Z, b I]] via the factored invariant.

    The discriminant Delta^2 - 4 det V factors exactly as
    (a - b)^2 [(a + b)^2 - 4 c^2], which avoids the catastrophic cancellation
    of the generic determinant route near nu = 1.
    """
    s_sq = (a + b) ** 2 - 4.0 * c * c
    if s_sq < 0.0:
        raise ValueError("covariance matrix is badly unphysical")
    s = np.sqrt(s_sq)
    nu1 = 0.5 * (s + (a - b))
    nu2 = 0.5 * (s - (a - b))
    if min(nu1, nu2) < -1e-12:
        raise ValueError("covariance matrix is badly unphysical")
    return tuple(sorted((float(nu1), float(nu2))))


def symplectic_eigenvalues(cm: np.ndarray) -> tuple[float, ...]:
    """Symplectic spectrum of a one- or two-mode covariance matrix.

    Args:
        cm: 2x2 or 4x4 covariance matrix.

    Returns:
        Tuple of symplectic eigenvalues, sorted ascending. One mode gives
        (sqrt(det V),). Two modes use the invariant
        nu^2 = (Delta -+ sqrt(Delta^2 - 4 det V)) / 2 with
        Delta = det A + det B + 2 det C; for standard-form CMs the
        discriminant is evaluated in its exact factored form, and otherwise
        through the eigenvalues of Omega V (both avoid the half-precision
        loss the naive determinant route suffers near nu = 1).

    Raises:
        ValueError: if the matrix is not 2x2 or 4x4, or the invariant
            expressions turn negative (badly unphysical input).
    """
    cm = np.asarray(cm, dtype=float)
    if cm.shape == (2, 2):
        det = float(np.linalg.det(cm))
        if det < 0.0:
            raise ValueError("covariance matrix has negative determinant")
        return (float(np.sqrt(det)),)
    if cm.shape == (4, 4):
        blocks = standard_form_blocks(cm)
        if blocks is not None:
            return _standard_form_spectrum(*blocks)
        # General case: eigenvalues of Omega V come in pairs +-i nu, read off
        # nu directly instead of squaring through the Delta formula.
        ev = np.linalg.eigvals(symplectic_form(2) @ cm)
        nus = np.sort(np.abs(ev.imag))
        return (float(nus[2]), float(nus[3]))
    raise ValueError("only one- and two-mode covariance matrices are supported")


@dataclass(frozen=True)
class PhysicalityCheck:
    """Outcome of a physicality test, truthy iff the matrix passed."""

    ok: bool
    min_symplectic: float
    symmetry_defect: float

    def __bool__(self) -> bool:
        return self.ok


def check_physical(cm_or_state) -> PhysicalityCheck:
    """Check symmetry and the symplectic-eigenvalue condition of a CM.

    Args:
        cm_or_state: covariance matrix (2x2 or 4x4) or a GaussianState.

    Returns:
        PhysicalityCheck with ``ok`` true iff the matrix is symmetric within
        SYMMETRY_TOL and min(nu) >= 1 - PHYSICALITY_TOL.
    """
    cm = cm_or_state.cm if isinstance(cm_or_state, GaussianState) else np.asarray(cm_or_state, dtype=float)
    defect = float(np.max(np.abs(cm - cm.T))) if cm.size else 0.0
    if defect > SYMMETRY_TOL:
        return PhysicalityCheck(False, float("nan"), defect)
    try:
        nus = symplectic_eigenvalues(cm)
    except ValueError:
        return PhysicalityCheck(False, float("-inf"), defect)
    min_nu = min(nus)
    return PhysicalityCheck(min_nu >= 1.0 - PHYSICALITY_TOL, min_nu, defect)


@dataclass(frozen=True)
class GaussianState:
    """A one- or two-mode Gaussian state: mean vector and covariance matrix.

    Invariants enforced on construction: ``cm`` symmetric within SYMMETRY_TOL
    and all symplectic eigenvalues >= 1 - PHYSICALITY_TOL.
    """

    mean: np.ndarray
    cm: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cm = np.asarray(self.cm, dtype=float)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cm", cm)
        if mean.size not in (2, 4):
            raise ValueError("mean must have length 2 or 4")
        if cm.shape != (mean.size, mean.size):
            raise ValueError("cm shape must match the mean vector length")
        report = check_physical(cm)
        if report.symmetry_defect > SYMMETRY_TOL:
            raise ValueError(f"cm is not symmetric (defect {report.symmetry_defect:.3e})")
        if not report.ok:
            raise ValueError(
                f"cm is unphysical (min symplectic eigenvalue {report.min_symplectic:.12g})"
            )

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2


@dataclass(frozen=True)
class GaussianChannel:
    """One-mode Gaussian channel acting as V -> K V K^T + N, mean -> K mean + d."""

    k: np.ndarray
    n: np.ndarray
    d: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        k = np.asarray(self.k, dtype=float)
        n = np.asarray(self.n, dtype=float)
        d = np.asarray(self.d, dtype=float).reshape(-1)
        if k.shape != (2, 2) or n.shape != (2, 2) or d.size != 2:
            raise ValueError("k and n must be 2x2 and d length 2")
        if np.max(np.abs(n - n.T)) > SYMMETRY_TOL:
            raise ValueError("added-noise block n must be symmetric")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)


def identity_channel() -> GaussianChannel:
    """The do-nothing one-mode channel."""
    return GaussianChannel(np.eye(2), np.zeros((2, 2)))


def make_attenuator(r: float, nbar: float = 0.0) -> GaussianChannel:
    """Attenuator E(r, nbar): beam splitter of reflectivity r against a thermal bath.

    Args:
        r: retained fraction (memory-cell reflectivity), in [0, 1].
        nbar: mean photon number of the bath, >= 0.

    Returns:
        GaussianChannel with K = sqrt(r) I and N = (1 - r)(2 nbar + 1) I.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("reflectivity r must lie in [0, 1]")
    if nbar < 0.0:
        raise ValueError("nbar must be >= 0")
    return GaussianChannel(np.sqrt(r) * np.eye(2), (1.0 - r) * (2.0 * nbar + 1.0) * np.eye(2))


def make_thermal_noise(eps: float) -> GaussianChannel:
    """Additive-noise channel N(eps): K = I, N = eps I.

    Args:
        eps: added noise variance per quadrature, >= 0.
    """
    if eps < 0.0:
        raise ValueError("eps must be >= 0")
    return GaussianChannel(np.eye(2), eps * np.eye(2))


def compose(second: GaussianChannel, first: GaussianChannel) -> GaussianChannel:
    """Channel composition second o first (``first`` acts on the state first)."""
    k = second.k @ first.k
    n = second.k @ first.n @ second.k.T + second.n
    d = second.k @ first.d + second.d
    return GaussianChannel(k, n, d)


@dataclass(frozen=True)
class CellSpec:
    """A memory cell: two reflectivities encoding one bit, plus decoherence knobs.

    Attributes:
        r0, r1: reflectivities for bit values 0 and 1, each in [0, 1].
        nbar: thermal-bath mean photon number of the attenuator.
        eps: added-noise variance applied before and after the cell (the
            idler picks up 2*eps in total).
    """

    r0: float
    r1: float
    nbar: float = 0.0
    eps: float = 0.0

    def __post_init__(self):
        for name in ("r0", "r1"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {val}")
        if self.nbar < 0.0:
            raise ValueError("nbar must be >= 0")
        if self.eps < 0.0:
            raise ValueError("eps must be >= 0")

    @property
    def is_pure_loss(self) -> bool:
        """True when there is no thermal bath and no added noise."""
        return self.nbar == 0.0 and self.eps == 0.0

    def reflectivity(self, u: int) -> float:
        if u not in (0, 1):
            raise ValueError("bit u must be 0 or 1")
        return self.r1 if u else self.r0


@dataclass(frozen=True)
class TransmitterSpec:
    """Source description: M signal modes, L idlers, and a total signal energy.

    The EPR transmitter pairs every signal with an idler (L = M); the
    classical benchmark uses none (L = 0). Each signal mode carries
    n_s = energy_n / m mean photons.
    """

    kind: str
    m: int
    l: int
    energy_n: float

    def __post_init__(self):
        if self.kind not in ("epr", "coherent"):
            raise ValueError("kind must be 'epr' or 'coherent'")
        if not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise ValueError("m must be a positive integer")
        if self.kind == "epr" and self.l != self.m:
            raise ValueError("EPR transmitter requires l == m")
        if self.kind == "coherent" and self.l != 0:
            raise ValueError("coherent transmitter requires l == 0")
        if self.energy_n < 0.0:
            raise ValueError("energy_n must be >= 0")

    @classmethod
    def epr(cls, m: int, energy_n: float) -> "TransmitterSpec":
        return cls("epr", m, m, energy_n)

    @classmethod
    def coherent(cls, m: int, energy_n: float) -> "TransmitterSpec":
        return cls("coherent", m, 0, energy_n)

    @property
    def n_s(self) -> float:
        """Mean photons per signal mode."""
        return self.energy_n / self.m

    @property
    def mu(self) -> float:
        """CM diagonal parameter mu = 2 n_s + 1."""
        return 2.0 * self.n_s + 1.0


def make_tmsv(n_s: float) -> GaussianState:
    """Two-mode squeezed vacuum with ``n_s`` mean photons per arm.

    Args:
        n_s: mean photon number of each mode, >= 0.

    Returns:
        Zero-mean GaussianState with diagonal blocks (2 n_s + 1) I and
        off-diagonal blocks 2 sqrt(n_s (n_s + 1)) Z.
    """
    if n_s < 0.0:
        raise ValueError("n_s must be >= 0")
    mu = 2.0 * n_s + 1.0
    c = 2.0 * np.sqrt(n_s * (n_s + 1.0))
    cm = np.zeros((4, 4))
    cm[:2, :2] = mu * np.eye(2)
    cm[2:, 2:] = mu * np.eye(2)
    cm[:2, 2:] = c * Z2
    cm[2:, :2] = c * Z2
    return GaussianState(np.zeros(4), cm)


def apply_bipartite(
    ch_a: GaussianChannel, ch_b: GaussianChannel, state: GaussianState
) -> GaussianState:
    """Apply one-mode channels to the two modes of a bipartite Gaussian state.

    Blockwise: A -> K_A A K_A^T + N_A, B -> K_B B K_B^T + N_B,
    C -> K_A C K_B^T; means transform per mode.

    Raises:
        NumericalError: if the propagated covariance matrix fails the
            physicality check (internal inconsistency).
    """
    if state.n_modes != 2:
        raise ValueError("apply_bipartite expects a two-mode state")
    v = state.cm
    a = ch_a.k @ v[:2, :2] @ ch_a.k.T + ch_a.n
    b = ch_b.k @ v[2:, 2:] @ ch_b.k.T + ch_b.n
    c = ch_a.k @ v[:2, 2:] @ ch_b.k.T
    out = np.zeros((4, 4))
    out[:2, :2] = a
    out[2:, 2:] = b
    out[:2, 2:] = c
    out[2:, :2] = c.T
    out = (out + out.T) / 2.0
    mean = np.concatenate([ch_a.k @ state.mean[:2] + ch_a.d, ch_b.k @ state.mean[2:] + ch_b.d])
    report = check_physical(out)
    if not report.ok:
        raise NumericalError(
            f"channel propagation produced an unphysical CM (min nu {report.min_symplectic:.12g})"
        )
    return GaussianState(mean, out)


def conditional_output_blocks(cell: CellSpec, u: int, n_s: float) -> tuple[float, float, float]:
    """Standard-form block scalars (a, b, c) of the conditional output CM.

    The output of the decohered cell on one TMSV copy is in standard form
    [[a I, c Z], [c Z, b I]] with

        a = r_u (mu + eps) + (1 - r_u) beta + eps     (signal)
        b = mu + 2 eps                                 (idler)
        c = sqrt(r_u (mu^2 - 1))                       (correlations)

    where mu = 2 n_s + 1 and beta = 2 nbar + 1.
    """
    if n_s < 0.0:
        raise ValueError("n_s must be >= 0")
    r_u = cell.reflectivity(u)
    mu = 2.0 * n_s + 1.0
    beta = 2.0 * cell.nbar + 1.0
    a = r_u * (mu + cell.eps) + (1.0 - r_u) * beta + cell.eps
    b = mu + 2.0 * cell.eps
    c = np.sqrt(r_u * (mu * mu - 1.0))
    return (float(a), float(b), float(c))


def conditional_output_cm(cell: CellSpec, u: int, n_s: float) -> np.ndarray:
    """Conditional 4x4 output CM of one EPR copy probing a cell in state ``u``.

    Equivalent to sending the TMSV signal through N(eps) o E(r_u, nbar) o N(eps)
    while the idler degrades under N(2 eps).
    """
    a, b, c = conditional_output_blocks(cell, u, n_s)
    cm = np.zeros((4, 4))
    cm[:2, :2] = a * np.eye(2)
    cm[2:, 2:] = b * np.eye(2)
    cm[:2, 2:] = c * Z2
    cm[2:, :2] = c * Z2
    return cm
