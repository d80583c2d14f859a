"""n_ss and <sigma_z> versus TLS frequency for three TLS damping rates."""
import argparse
from pathlib import Path

import numpy as np

from tlscool.model import SystemParams
from tlscool.rates import bare_steady_occupation
from tlscool.sweep import PRESETS, SweepSpec, run_sweep, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--points", type=int, default=PRESETS["omega_z"]["points"])
    ap.add_argument("--variants", default="eliminated,simple,bare")
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for gamma_tau in (2.5e-4, 2.5e-5, 2.5e-6):
        base = SystemParams(gamma_tau=gamma_tau)
        spec = SweepSpec(base, "omega_z", 0.5, 1.5, args.points, variants=tuple(args.variants.split(",")))
        result = run_sweep(spec, workers=args.workers)
        path = args.out / f"omega_z_gamma_tau_{gamma_tau:.1e}.csv"
        write_csv(result, path)

        n = result.column("eliminated")
        grid = result.axis_values("eliminated")
        at_res = n[np.argmin(np.abs(grid - 1.0))]
        ratio = at_res / bare_steady_occupation(base)
        print(f"gamma_tau={gamma_tau:.1e}: n_ss(resonance)={at_res:.4e} ({ratio:.1f}x bare), "
              f"max {n.max():.4e} at omega_z={grid[np.argmax(n)]:.3f} -> {path}")


if __name__ == "__main__":
    main()
