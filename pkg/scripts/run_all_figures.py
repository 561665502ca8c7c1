"""Run every figure preset at full size and write CSV + SVG to an output directory."""

import argparse
import time

from cnoma_ihs import experiments


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--samples", type=int, default=None, help="override n_samples")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("presets", nargs="*", default=list(experiments.PRESETS))
    args = ap.parse_args()
    for name in args.presets:
        spec = experiments.with_overrides(experiments.load_preset(name), n_samples=args.samples)
        t0 = time.perf_counter()
        table = experiments.run_sweep(spec, workers=args.workers)
        paths = experiments.emit(table, args.out, ["csv", "plot"])
        print(f"{name}: {len(table.rows)} rows in {time.perf_counter() - t0:.1f}s -> "
              + ", ".join(str(p) for p in paths))
        for v, res in table.theta_star.items():
            print(f"  theta* at {spec.swept}={v}: {res.theta_star} (EE {res.ee_at_star:.5g})")


if __name__ == "__main__":
    main()
