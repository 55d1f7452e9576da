#!/usr/bin/env python3
"""Complete decay ladder of an equilateral triangle of emitters with a
single complex coupling a = gamma*(g + i f): level energies, total decay
constants, and the individual rates connecting the manifolds.

Run:  python demos/triangle_rate_ladder.py [g] [f]
"""

import sys

from qring import CouplingSet, realize_degenerate_pairs, solve_auto
from qring.spectra import damping_matrix, partial_decay_rates

g = float(sys.argv[1]) if len(sys.argv) > 1 else 0.7
f = float(sys.argv[2]) if len(sys.argv) > 2 else 0.9
coup = CouplingSet(3, [complex(g, f)])
F = damping_matrix(coup)

manifolds = [realize_degenerate_pairs(solve_auto(3, n, coup)) for n in range(4)]

print(f"triangle with coupling a = gamma*({g} + {f}i)")
print()
for n in range(3, -1, -1):
    print(f"n = {n} manifold:")
    for s in manifolds[n].states:
        print(f"   {s.label:>6} [{s.symmetry:>13}]  shift {s.shift:+7.4f} gamma"
              f"   total decay {s.decay:7.4f} gamma")
print()
print("individual rates (units of gamma):")
for n in range(3, 0, -1):
    for s in manifolds[n].states:
        for label, rate in partial_decay_rates(s, manifolds[n - 1], F):
            if rate > 1e-12:
                print(f"   n={n} {s.label:>6}  ->  n={n-1} {label:>6}: {rate:8.4f}")

print()
print("closed-form checks for this geometry:")
print(f"   symmetric n=2 total: 2(1+f)     = {2 * (1 + f):.4f}")
print(f"   antisym   n=2 total: (2-f)      = {2 - f:.4f}")
print(f"   symmetric n=1 total: (1+2f)     = {1 + 2 * f:.4f}")
print(f"   sym2 -> sym1 rate:   (4+8f)/3   = {(4 + 8 * f) / 3:.4f}")
print(f"   sym2 -> each antisym1: (1-f)/3  = {(1 - f) / 3:.4f}")
