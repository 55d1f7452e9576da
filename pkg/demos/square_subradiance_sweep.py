#!/usr/bin/env python3
"""Distance dependence of the six double-excitation decay rates of a
square of emitters, showing the completely subradiant state emerge in
the long-wavelength limit.

Run:  python demos/square_subradiance_sweep.py [--plot] [--out sweep.csv]
"""

import argparse
import csv

import numpy as np

from qring import classify_radiance, coupling_set, decay_sweep, solve_auto
from qring.geometry import PolygonSpec

parser = argparse.ArgumentParser(description=__doc__)
parser.add_argument("--plot", action="store_true", help="draw the curves")
parser.add_argument("--out", default=None, help="write the sweep as CSV")
args = parser.parse_args()

N, n = 4, 2
ratios = np.linspace(0.5, 10.0, 400)
points = decay_sweep(N, n, ratios)
labels = list(points[0].decays)

print(f"square ring, n = {n}: decay constants F/gamma along lambda/r")
print(f"{'lambda/r':>9} " + " ".join(f"{lb:>9}" for lb in labels))
for pt in points[:: len(points) // 10]:
    print(f"{pt.lambda_over_r:9.2f} "
          + " ".join(f"{pt.decays[lb]:9.4f}" for lb in labels))

far = decay_sweep(N, n, [1e4])[0]
print("\nlong-wavelength limit (lambda/r = 1e4):")
static = classify_radiance(solve_auto(N, n, coupling_set(
    PolygonSpec(n_vertices=N, wavenumber=0.0))))
for lb in labels:
    print(f"  {lb:>6}: F -> {far.decays[lb]:,.4f} gamma   ({static.get(lb, '?')})")

if args.out:
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda_over_r", "label", "decay_gamma"])
        for pt in points:
            for lb in labels:
                writer.writerow([pt.lambda_over_r, lb, pt.decays[lb]])
    print(f"\nwrote {len(points) * len(labels)} rows to {args.out}")

if args.plot:
    import matplotlib.pyplot as plt

    for lb in labels:
        plt.plot(ratios, [pt.decays[lb] for pt in points], label=lb)
    plt.xlabel(r"$\lambda / r$")
    plt.ylabel(r"$F / \gamma$")
    plt.title("Square ring: double-excitation decay rates")
    plt.legend()
    plt.tight_layout()
    plt.show()
