"""n_ss and <sigma_z> versus TLS damping, on and off resonance."""
import argparse
from pathlib import Path

from tlscool.model import SystemParams
from tlscool.sweep import PRESETS, SweepSpec, run_sweep, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--omega-z", type=float, nargs="+", default=[1.0, 0.7, 1.3])
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    preset = {k: v for k, v in PRESETS["gamma_tau"].items() if k != "axis"}

    for wz in args.omega_z:
        spec = SweepSpec(SystemParams(omega_z=wz), "gamma_tau", variants=("eliminated",), **preset)
        result = run_sweep(spec, workers=args.workers)
        path = args.out / f"gamma_tau_omega_z_{wz:.2f}.csv"
        write_csv(result, path)
        n = result.column("eliminated")
        sz = result.column("eliminated", "sigma_z_ss")
        print(f"omega_z={wz:.2f}: n_ss {n[0]:.3e} -> {n[-1]:.3e} ({n[-1] / n[0]:.1f}x), "
              f"sigma_z {sz[0]:+.3f} -> {sz[-1]:+.3f} -> {path}")


if __name__ == "__main__":
    main()
