#!/usr/bin/env python3
"""Long-wavelength spectroscopy of rings with 2..9 emitters: exciton and
biexciton levels, then the absorption lines an experiment would see.

Shifts are in units of the nearest-neighbour interaction energy V_N,
widths and decay constants in units of the single-emitter damping gamma.

Run:  python demos/biexciton_absorption_tables.py
"""

from qring import biexciton_lines, biexciton_table, exciton_line

print("=" * 72)
print("Exciton and biexciton levels (long-wavelength limit, dipoles)")
print("=" * 72)
print(f"{'N':>2} {'dG1/V_N':>9}   biexciton (dG2/V_N, F2/gamma) "
      "and per-class components")
for N in range(2, 10):
    dg1, rows = biexciton_table(N)
    lead = f"{N:>2} {dg1:9.3f}  "
    for row in rows:
        comps = ", ".join(f"{v.real:+.3f}{v.imag:+.3f}i" for v in row.class_values)
        print(f"{lead} ({row.shift:+7.3f}, {row.decay:7.3f})   [{comps}]")
        lead = " " * 13

print()
print("=" * 72)
print("Absorption lines: exciton line, then the biexciton ladder")
print("=" * 72)
print(f"{'N':>2} {'shift/V_N':>10} {'half-width/gamma':>17} {'rel. intensity':>15}")
for N in range(2, 10):
    line1 = exciton_line(N)
    print(f"{N:>2} {line1.frequency_shift:10.3f} {line1.half_width:17.3f} "
          f"{'(exciton)':>15}")
    for ln in biexciton_lines(N):
        print(f"   {ln.frequency_shift:10.3f} {ln.half_width:17.3f} "
              f"{ln.relative_intensity:15.4f}")
