"""An ideal memory read with one entangled mode -- and with infinitely many.

For an ideal memory the bright bit is a perfect mirror (r1 = 1), and
the guaranteed gain of the EPR transmitter has clean closed forms.
This demo scans the (r0, N) plane twice -- once for a single-mode probe
(M = 1) and once in the broadband limit (M -> infinity) -- and overlays
the zero-gain threshold curve N̄(r0): above the curve a positive gain
is guaranteed analytically, and the curve itself never rises above
ln(2/(√5−1)) ≈ 0.481 photons, so an ideal memory can always be read
with entangled light using less than half a photon per cell.

Writes ``ideal_memory_gain.png`` plus ``ideal_threshold_curve.csv``.
"""

import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qread.analysis import Axis, ideal_threshold_curve, scan_plane


def surface_from(grid, rows, cols):
    values = np.full((rows, cols), np.nan)
    for k, cell in enumerate(grid.cells):
        i, j = divmod(k, cols)
        if cell.result is not None and not cell.flagged:
            values[i, j] = cell.result.g
    return values


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=float, default=2.0,
                        help="top of the energy axis (default 2)")
    parser.add_argument("--grid", type=int, default=160,
                        help="points per axis (default 160)")
    parser.add_argument("--outdir", type=Path,
                        default=Path(__file__).parent / "output")
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    r0_axis = Axis("r0", 0.0, 0.999, args.grid)
    n_axis = Axis("N", args.n_max / args.grid, args.n_max, args.grid)
    narrow = scan_plane("r0xN", r0_axis, n_axis, m=1)
    broad = scan_plane("r0xN", r0_axis, n_axis, m=None)

    threshold = [(r0, ideal_threshold_curve(r0=r0).nbar)
                 for r0 in np.linspace(0.0, 0.999, 200)]
    csv_path = args.outdir / "ideal_threshold_curve.csv"
    with open(csv_path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["r0", "nbar"])
        writer.writerows((f"{r0:.12g}", f"{nbar:.12g}")
                         for r0, nbar in threshold)

    cmap = plt.colormaps["magma"].copy()
    cmap.set_bad("black")
    extent = (0, 0.999, n_axis.start, args.n_max)
    fig, axes = plt.subplots(1, 2, figsize=(9.6, 4.2), sharey=True)
    for ax, grid, label in ((axes[0], narrow, "single mode (M = 1)"),
                            (axes[1], broad, "broadband limit")):
        values = surface_from(grid, args.grid, args.grid)
        image = ax.imshow(values.T, origin="lower", extent=extent,
                          cmap=cmap, vmin=0.0, aspect="auto")
        ax.plot(*zip(*threshold), "w--", lw=1.2,
                label="zero-gain threshold")
        ax.set_xlabel("dark reflectivity r0")
        ax.set_title(label)
        fig.colorbar(image, ax=ax, label="gain g (bits/cell)")
    axes[0].set_ylabel("mean signal energy N (photons)")
    axes[0].legend(frameon=False, loc="upper right", labelcolor="white")
    fig.tight_layout()
    png_path = args.outdir / "ideal_memory_gain.png"
    fig.savefig(png_path, dpi=150)

    peak = max(nbar for _, nbar in threshold)
    print(f"threshold curve peak: {peak:.6f} photons "
          "(an ideal memory never needs more than this per cell)")
    for grid, label in ((narrow, "M = 1"), (broad, "M -> inf")):
        best = grid.best()
        print(f"best gain at {label}: {best.result.g:.4f} bits/cell at "
              f"(r0, N) = ({best.coords[0]:.3f}, {best.coords[1]:.3f})")
    print(f"wrote {csv_path} and {png_path}")


if __name__ == "__main__":
    main()
