"""Explicit-cavity, eliminated and simple models side by side, with a g0 ladder."""
import argparse
import json
from pathlib import Path

from tlscool.model import SystemParams
from tlscool.sweep import compare_variants


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--omega-z", type=float, default=1.0)
    ap.add_argument("--g0", type=float, nargs="+", default=[0.05, 0.025, 0.0125])
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    reports = []
    print(f"{'g0':>8}{'full':>14}{'eliminated':>14}{'simple':>14}{'|F-E|/F':>10}{'|S-E|/E':>10}")
    for g0 in args.g0:
        rep = compare_variants(SystemParams(omega_z=args.omega_z, g0=g0))
        v = rep["variants"]
        print(f"{g0:>8.4f}{v['full']['n_ss']:>14.5e}{v['eliminated']['n_ss']:>14.5e}{v['simple']['n_ss']:>14.5e}"
              f"{rep['relative_to_full']['eliminated']:>10.4f}{rep['relative_to_eliminated']['simple']:>10.4f}")
        reports.append(rep)
    path = args.out / f"compare_omega_z_{args.omega_z:.2f}.json"
    path.write_text(json.dumps(reports, indent=1, sort_keys=True) + "\n")
    print(f"-> {path}")


if __name__ == "__main__":
    main()
