"""Threshold theorems, information gain, and memory-plane scans.

Turns the raw error-probability bounds into the quantities one actually
decides with: how many bits per cell an entangled probe buys over the
best classical strategy, the energy threshold above which a finite
bandwidth always suffices, the zero-gain curve of an ideal memory, and
dense parameter-plane scans of the gain surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import bisect

from .classical import BoundValue, classical_bound
from .errors import NumericalError
from .gaussian import CellSpec
from .quantum import asymptotic_bounds, chernoff_bound

__all__ = [
    "PureLossCoefficients",
    "GainResult",
    "Axis",
    "ScanCell",
    "ScanGrid",
    "IdealThresholdPoint",
    "binary_entropy",
    "info_gain",
    "threshold_energy",
    "ideal_gain_expr",
    "ideal_threshold_curve",
    "find_min_bandwidth",
    "scan_plane",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class PureLossCoefficients:
    """Exponent bookkeeping for a pure-loss cell at total energy N.

    ``x`` is the reflectivity-amplitude separation sqrt(r1) - sqrt(r0),
    ``w`` the error exponent of the asymptotic Bhattacharyya bound,
    ``f = (w - x**2) / ln 2`` the margin between the quantum and
    classical exponents (zero iff r0 = r1, and 1/f is the threshold
    energy), and ``y = exp(-N)``.
    """

    x: float
    w: float
    f: float
    y: float
    energy_n: float

    @classmethod
    def from_reflectivities(cls, r0: float, r1: float,
                            energy_n: float) -> "PureLossCoefficients":
        if not (0.0 <= r0 <= 1.0 and 0.0 <= r1 <= 1.0):
            raise ValueError("reflectivities must lie in [0, 1]")
        if energy_n <= 0.0:
            raise ValueError("energy_n must be positive")
        x = math.sqrt(r1) - math.sqrt(r0)
        w = (0.5 * (r0 + r1 + 2.0) - 2.0 * math.sqrt(r0 * r1)
             - math.sqrt((1.0 - r0) * (1.0 - r1)))
        f = max(w - x * x, 0.0) / _LN2
        return cls(x=x, w=max(w, 0.0), f=f, y=math.exp(-energy_n),
                   energy_n=float(energy_n))

    @property
    def c_tilde(self) -> float:
        """Series tail bound exp(-N x**2) / 4 on the classical error."""
        return 0.25 * math.exp(-self.energy_n * self.x * self.x)


@dataclass(frozen=True)
class GainResult:
    """Information gain of the entangled probe at one parameter point.

    ``g = [1 - H(q)] - [1 - H(c)]`` bits per cell, where ``c`` and ``q``
    are the classical floor and the quantum ceiling actually used.
    """

    g: float
    c: float
    q: float
    cell: CellSpec
    m: Optional[float]
    energy_n: float
    m_star: Optional[float] = None


def binary_entropy(p: float) -> float:
    """Shannon entropy of a biased coin, in bits, with 0 log 0 = 0."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def _classical_reference(cell: CellSpec, energy_n: float,
                         m_star) -> BoundValue:
    """Classical floor: bandwidth-free for pure loss, capped otherwise."""
    if cell.is_pure_loss:
        return classical_bound(cell, 1, energy_n)
    if m_star is None:
        raise ValueError(
            "m_star is required for a cell with environment noise: the "
            "classical floor only exists at a capped bandwidth"
        )
    return classical_bound(cell, m_star, energy_n)


def info_gain(cell: CellSpec, m, energy_n: float,
              m_star=None) -> GainResult:
    """Guaranteed readout advantage, in bits per cell.

    ``q`` is the quantum Chernoff bound for an EPR transmitter spending
    N photons over ``m`` modes; ``c`` is the best classical error
    probability (for a noisy cell, at the bandwidth cap ``m_star``).
    """
    q = chernoff_bound(cell, m, energy_n)
    c = _classical_reference(cell, energy_n, m_star)
    g = binary_entropy(c.value) - binary_entropy(q.value)
    return GainResult(g=g, c=c.value, q=q.value, cell=cell, m=float(m),
                      energy_n=float(energy_n), m_star=m_star)


def threshold_energy(r0: float, r1: float) -> float:
    """Total energy above which a finite bandwidth beats every classical probe.

    N_th = 2 ln 2 / (sqrt(1-r0) - sqrt(1-r1))**2, evaluated through the
    difference-free form with (r1 - r0) in the numerator so nearly equal
    reflectivities do not cancel catastrophically.
    """
    if not (0.0 <= r0 <= 1.0 and 0.0 <= r1 <= 1.0):
        raise ValueError("reflectivities must lie in [0, 1]")
    if r0 == r1:
        raise ValueError("threshold energy is undefined for r0 = r1")
    s = math.sqrt(1.0 - r0) + math.sqrt(1.0 - r1)
    return 2.0 * _LN2 * (s / (r1 - r0)) ** 2


def ideal_gain_expr(x: float, y: float) -> float:
    """Sign kernel of the single-mode gain for an ideal memory.

    g(x, y) = y**(x**2) + y**(4x) - 2 y**(2x), written with expm1 so the
    three nearly-equal powers do not cancel away the small-x structure.
    """
    if y <= 0.0 or y >= 1.0:
        raise ValueError("y must lie strictly inside (0, 1)")
    ln_y = math.log(y)
    return (math.expm1(x * x * ln_y) + math.expm1(4.0 * x * ln_y)
            - 2.0 * math.expm1(2.0 * x * ln_y))


@dataclass(frozen=True)
class IdealThresholdPoint:
    """Zero-gain crossing of an ideal memory at amplitude separation x.

    ``ybar`` is the unique interior zero of the gain kernel in (0, 1)
    (the kernel also vanishes trivially at y = 1); positive gain is
    guaranteed exactly for y < ybar, i.e. for per-mode energy above
    ``nbar = -ln(ybar)``.
    """

    x: float
    ybar: float
    nbar: float


def ideal_threshold_curve(x: Optional[float] = None,
                          r0: Optional[float] = None) -> IdealThresholdPoint:
    """Locate the zero-gain crossing for an ideal memory.

    Provide either the amplitude separation ``x`` in (0, 1] or the dark
    reflectivity ``r0`` in [0, 1) (then x = 1 - sqrt(r0)).  The kernel
    vanishes at y -> 0 and y = 1 as well, so the root is bracketed from
    a 200-point logarithmic sweep, taking the sign change nearest to
    (and excluding) y = 1, then bisected to 1e-12.
    """
    if (x is None) == (r0 is None):
        raise ValueError("provide exactly one of x or r0")
    if x is None:
        if not 0.0 <= r0 < 1.0:
            raise ValueError("r0 must lie in [0, 1)")
        x = 1.0 - math.sqrt(r0)
    if not 0.0 < x <= 1.0:
        raise ValueError("x must lie in (0, 1]")

    ys = np.geomspace(1e-6, 1.0 - 1e-6, 200)
    vals = [ideal_gain_expr(x, y) for y in ys]
    bracket = None
    for i in range(len(ys) - 1, 0, -1):  # nearest to y = 1 first
        if vals[i] == 0.0:
            root = float(ys[i])
            return IdealThresholdPoint(x=x, ybar=root, nbar=-math.log(root))
        if vals[i - 1] * vals[i] < 0.0:
            bracket = (float(ys[i - 1]), float(ys[i]))
            break
    if bracket is None:
        raise NumericalError(
            f"no interior zero crossing of the gain kernel found for x={x}"
        )
    root = float(bisect(lambda y: ideal_gain_expr(x, y), *bracket,
                        xtol=1e-12))
    return IdealThresholdPoint(x=x, ybar=root, nbar=-math.log(root))


def find_min_bandwidth(cell: CellSpec, energy_n: float, m_max: int,
                       m_star=None) -> Optional[int]:
    """Smallest bandwidth at which the quantum bound beats the classical floor.

    Scans M = 1..128 linearly, then doubles up to ``m_max``; the bound
    is not monotone in M in general, so a geometric hit is refined by a
    linear pass over the bracket to return the true smallest qualifier.
    Returns None when no M in [1, m_max] qualifies.  Qualifying means
    strictly below the floor with a 1e-12 relative guard, so that
    rounding-level ties (r0 = r1 gives q = c = 1/2 exactly) never count
    as a win.
    """
    m_max = int(m_max)
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    c = _classical_reference(cell, energy_n, m_star).value

    def qualifies(m: int) -> bool:
        return chernoff_bound(cell, m, energy_n).value < c * (1.0 - 1e-12)

    for m in range(1, min(128, m_max) + 1):
        if qualifies(m):
            return m
    prev = 128
    m = 256
    while prev < m_max:
        m = min(m, m_max)
        if qualifies(m):
            for k in range(prev + 1, m + 1):
                if qualifies(k):
                    return k
        prev = m
        m *= 2
    return None


@dataclass(frozen=True)
class Axis:
    """One scan axis: ``points`` values from start to stop, linear or log."""

    name: str
    start: float
    stop: float
    points: int = 200
    scale: str = "linear"

    def __post_init__(self):
        if self.points < 2:
            raise ValueError("an axis needs at least 2 points")
        if not self.start < self.stop:
            raise ValueError("axis start must be below stop")
        if self.scale not in ("linear", "log"):
            raise ValueError("scale must be 'linear' or 'log'")
        if self.scale == "log" and self.start <= 0.0:
            raise ValueError("log axis requires a positive start")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ScanCell:
    """One grid point: coordinates, its GainResult, and a flag.

    Flagged cells are either inconclusive (g <= 0: the bounds leave no
    guaranteed advantage) or failed outright (result is None and
    ``note`` carries the reason); the scan never aborts on them.
    """

    coords: tuple
    result: Optional[GainResult]
    flagged: bool
    note: str = ""


@dataclass(frozen=True)
class ScanGrid:
    """Dense scan of the gain surface over two axes, row-major order."""

    axes: tuple
    cells: tuple

    def best(self) -> Optional[ScanCell]:
        """The unflagged cell with the largest gain, if any qualifies."""
        live = [c for c in self.cells if c.result is not None and not c.flagged]
        if not live:
            return None
        return max(live, key=lambda c: c.result.g)


def _asymptotic_gain(cell: CellSpec, energy_n: float) -> GainResult:
    """Gain with the bandwidth limit of the quantum bound (r1 = 1 only)."""
    a = asymptotic_bounds(cell, energy_n)
    if a.q_inf is None:
        raise ValueError("the bandwidth limit of the quantum bound needs r1 = 1")
    c = _classical_reference(cell, energy_n, None)
    g = binary_entropy(c.value) - binary_entropy(a.q_inf)
    return GainResult(g=g, c=c.value, q=a.q_inf, cell=cell, m=None,
                      energy_n=float(energy_n))


def scan_plane(plane: str, axis0: Axis, axis1: Axis, *, m=None,
               energy_n: Optional[float] = None, r1: float = 1.0,
               nbar: float = 0.0, eps: float = 0.0,
               m_star=None) -> ScanGrid:
    """Evaluate the gain surface over a 2-D parameter plane.

    ``plane`` selects the coordinates: ``"r0xr1"`` scans both memory
    reflectivities at fixed bandwidth ``m`` and energy ``energy_n``;
    ``"r0xN"`` scans dark reflectivity against total energy at fixed
    ``r1``, using bandwidth ``m`` or, when ``m`` is None, the
    infinite-bandwidth limit of the quantum bound.  Per-point failures
    become flagged cells rather than scan aborts.
    """
    if plane not in ("r0xr1", "r0xN"):
        raise ValueError("plane must be 'r0xr1' or 'r0xN'")
    if plane == "r0xr1":
        if energy_n is None or m is None:
            raise ValueError("the r0xr1 plane needs both m and energy_n")
    elif m is None and (nbar > 0.0 or eps > 0.0):
        raise ValueError("the bandwidth limit only covers pure-loss cells")
    if (nbar > 0.0 or eps > 0.0) and m is not None and m_star is None:
        raise ValueError(
            "m_star is required for a cell with environment noise: the "
            "classical floor only exists at a capped bandwidth"
        )

    cells = []
    for v0 in axis0.values():
        for v1 in axis1.values():
            if plane == "r0xr1":
                spec = CellSpec(r0=float(v0), r1=float(v1), nbar=nbar, eps=eps)
                n_here = energy_n
            else:
                spec = CellSpec(r0=float(v0), r1=r1, nbar=nbar, eps=eps)
                n_here = float(v1)
            try:
                if plane == "r0xN" and m is None:
                    res = _asymptotic_gain(spec, n_here)
                else:
                    res = info_gain(spec, m, n_here, m_star=m_star)
            except (ValueError, NumericalError) as exc:
                cells.append(ScanCell(coords=(float(v0), float(v1)),
                                      result=None, flagged=True,
                                      note=str(exc)))
                continue
            cells.append(ScanCell(coords=(float(v0), float(v1)), result=res,
                                  flagged=res.g <= 0.0,
                                  note="" if res.g > 0.0 else "inconclusive"))
    return ScanGrid(axes=(axis0, axis1), cells=tuple(cells))
