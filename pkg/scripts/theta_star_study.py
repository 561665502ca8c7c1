"""EE-optimal theta by grid search and by the fixed-point update across SNR."""

import argparse

from cnoma_ihs import energy
from cnoma_ihs.channel import SeedSpec
from cnoma_ihs.params import SystemParams, validate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--d-s1", type=float, default=0.5)
    args = ap.parse_args()
    seed = SeedSpec(args.seed)
    for rho_db in range(0, 35, 5):
        p = validate(SystemParams(rho_db=rho_db, d_s1=args.d_s1))
        grid = energy.theta_star(p, p.lam_s1, "grid", n=args.samples, seed=seed)
        fp = energy.theta_star(p, p.lam_s1, "fixedpoint", n=args.samples, seed=seed)
        base = energy.ergodic_ee_curve(p, [0.4], args.samples, seed)[0]
        print(f"rho={rho_db:>2} dB  grid theta*={grid.theta_star:.2f} EE={grid.ee_at_star:.5f}  "
              f"fixed-point theta*={fp.theta_star:.4f} EE={fp.ee_at_star:.5f} "
              f"({'converged' if fp.converged else fp.message})  EE(0.4)={base:.5f}")


if __name__ == "__main__":
    main()
