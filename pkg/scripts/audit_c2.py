"""Compare the printed UE2 closed form against the quadrature oracle and Monte Carlo.

Prints one row per SNR point on the ESC-vs-SNR grid.
"""

import argparse

from cnoma_ihs import analytic, montecarlo
from cnoma_ihs.channel import SeedSpec
from cnoma_ihs.params import SystemParams, validate
from cnoma_ihs.schemes import SchemeId


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()
    print(f"{'rho_db':>6} {'printed':>10} {'oracle':>10} {'mc':>10} {'se':>9} "
          f"{'rel_dev':>9} {'oracle_z':>8}")
    for rho_db in range(0, 35, 5):
        p = validate(SystemParams(rho_db=rho_db))
        audit = analytic.ergodic_c2_closed_form(p)
        mc = montecarlo.estimate(SchemeId.CNOMA_IHS, p, args.samples, SeedSpec(args.seed))["c_ue2"]
        z = (audit.oracle - mc.mean) / mc.std_error
        print(f"{rho_db:>6} {audit.printed:10.6f} {audit.oracle:10.6f} {mc.mean:10.6f} "
              f"{mc.std_error:9.2e} {audit.rel_deviation:9.2e} {z:8.2f}")


if __name__ == "__main__":
    main()
