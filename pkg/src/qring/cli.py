"""Command-line interface: eigenvalue tables, long-wavelength level and
line tables, distance sweeps, and inter-manifold decay rates, exported
as CSV or JSON.

Exit codes: 0 success, 2 configuration error, 3 solver failure,
4 physics consistency violation.  All output is deterministic: repeated
runs with the same configuration are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click
import numpy as np

from .errors import ConfigError, ConsistencyError, SolverError
from .geometry import (CouplingSet, PolygonSpec, coupling_set,
                       static_nn_energy)
from .solvers import realize_degenerate_pairs, solve_auto
from .spectra import (absorption_amplitude, biexciton_lines,
                      biexciton_table, classify_radiance, damping_matrix,
                      decay_sweep, partial_decay_rates)

EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_CONSISTENCY = 4


def _fmt(x, digits):
    if isinstance(x, complex):
        return f"{_fmt(x.real, digits)}{'+' if x.imag >= 0 else '-'}{_fmt(abs(x.imag), digits)}j"
    if isinstance(x, float):
        if x == 0:
            return "0"
        return f"{x:.{digits}g}"
    return str(x)


def _num(x, digits):
    """Round-trip a float through the significant-digit formatter so CSV
    strings and JSON numbers encode identical values."""
    if isinstance(x, float):
        return float(_fmt(x, digits))
    if isinstance(x, complex):
        return [float(_fmt(x.real, digits)), float(_fmt(x.imag, digits))]
    return x


def _emit(table_name, columns, rows, meta, fmt, digits, out, append=False):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v, digits) for v in row])
        text = buf.getvalue()
        if out is None:
            click.echo(f"# {table_name} | " +
                       " ".join(f"{k}={v}" for k, v in sorted(meta.items())))
            click.echo(text, nl=False)
        else:
            Path(out).write_text(text)
    else:
        payload = {
            "table": table_name,
            "meta": dict(sorted(meta.items())),
            "columns": list(columns),
            "rows": [[_num(v, digits) for v in row] for row in rows],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        if out is None:
            click.echo(text, nl=False)
        else:
            Path(out).write_text(text)


def _parse_kernel(kernel):
    if kernel in ("dipole-perp", "quad-perp"):
        return kernel, None, None
    if kernel.startswith("oriented:"):
        try:
            tilt = float(kernel.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"kernel: bad tilt angle in {kernel!r}")
        return "oriented", tilt, None
    if kernel.startswith("custom:"):
        path = kernel.split(":", 1)[1]
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"kernel: cannot read custom table: {exc}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"kernel: custom table is not valid JSON: {exc}")
        table = {}
        for key, val in raw.items():
            try:
                table[int(key)] = complex(val[0], val[1])
            except (TypeError, ValueError, IndexError):
                raise ConfigError(
                    f"kernel: custom table entry {key!r} must map to [re, im]")
        return "custom", None, table
    raise ConfigError(f"kernel: unknown kernel {kernel!r}")


def _parse_sweep(text):
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise ConfigError(f"sweep: expected min:max:count, got {text!r}")
    if lo <= 0 or hi < lo or count < 1:
        raise ConfigError("sweep: need 0 < min <= max and count >= 1")
    return np.linspace(lo, hi, count) if count > 1 else np.array([lo])


def _parse_n_range(text):
    if ":" in text:
        lo, hi = text.split(":")
        lo, hi = int(lo), int(hi)
    else:
        lo = hi = int(text)
    if lo < 2 or hi < lo:
        raise ConfigError(f"n-qubits: bad range {text!r}")
    return list(range(lo, hi + 1))


# parameter name -> key in the config file (mirrors the flag spelling)
_CONFIG_KEYS = {"fmt": "format", "sweep_range": "sweep"}


def _resolve(ctx, config, name, fallback):
    """Flag value unless it was defaulted and the config file provides one."""
    src = ctx.get_parameter_source(name) if name in ctx.params else None
    value = ctx.params.get(name)
    if src is not None and src.name == "COMMANDLINE":
        return value
    key = _CONFIG_KEYS.get(name, name)
    if config and key in config:
        return config[key]
    return value if value is not None else fallback


def _load_config(path):
    if path is None:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        raise ConfigError("config: top level must be an object")
    return cfg


def _build_problem(ctx, config):
    """Common resolution of geometry/kernel/distance flags into a spec."""
    n = _resolve(ctx, config, "n_qubits", None)
    if n is None:
        raise ConfigError("n_qubits: required")
    n = int(n)
    kernel_text = _resolve(ctx, config, "kernel", "dipole-perp")
    kernel, tilt, table = _parse_kernel(kernel_text)
    static = bool(_resolve(ctx, config, "static", False))
    kr = _resolve(ctx, config, "kr", None)
    if static and kr is not None:
        raise ConfigError("static/kr: choose one distance mode")
    if kernel == "custom":
        if static or kr is not None:
            raise ConfigError("kernel: custom tables fix the couplings; "
                              "distance flags do not apply")
        spec = PolygonSpec(n_vertices=n, wavenumber=1.0, kernel="custom",
                           custom_table=table)
        return n, spec, coupling_set(spec), "custom"
    if kr is None and not static:
        static = True  # default distance mode
    if static:
        spec = PolygonSpec(n_vertices=n, wavenumber=0.0, kernel=kernel,
                           tilt_deg=tilt)
        return n, spec, coupling_set(spec), "static"
    kr = float(kr)
    if kr <= 0:
        raise ConfigError("kr: must be > 0")
    # kr is quoted for the nearest-neighbour separation r1
    r1 = PolygonSpec(n_vertices=n, wavenumber=1.0, kernel="dipole-perp").separation(1)
    spec = PolygonSpec(n_vertices=n, wavenumber=kr / r1, kernel=kernel,
                       tilt_deg=tilt)
    return n, spec, coupling_set(spec), "physical"


def _shift_unit(ctx, config, mode, spec):
    units = _resolve(ctx, config, "units", None)
    if units is None:
        units = "vn" if mode == "static" else "gamma"
    if units not in ("gamma", "vn"):
        raise ConfigError(f"units: expected gamma or vn, got {units!r}")
    if mode == "static" and units == "gamma":
        raise ConfigError("units: static-limit shifts are reported in V_N units")
    if units == "vn" and mode == "custom":
        raise ConfigError("units: V_N is undefined for custom coupling tables")
    scale = 1.0
    if units == "vn" and mode == "physical":
        scale = static_nn_energy(spec)
    return units, scale


_common = [
    click.option("--n-qubits", "n_qubits", default=None,
                 help="Ring size N (tables accepts a range like 2:9)."),
    click.option("--excitations", "excitations", default=None,
                 help="Excitation number n, or 'all' (spectrum only)."),
    click.option("--kernel", "kernel", default=None,
                 help="dipole-perp | quad-perp | oriented:<deg> | custom:<path>."),
    click.option("--static", "static", is_flag=True, default=False,
                 help="Long-wavelength limit (default distance mode)."),
    click.option("--kr", "kr", type=float, default=None,
                 help="Nearest-neighbour separation in wavenumber units."),
    click.option("--units", "units", type=click.Choice(["gamma", "vn"]),
                 default=None, help="Unit of reported shifts."),
    click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                 default="csv", help="Output format."),
    click.option("--out", "out", type=click.Path(), default=None,
                 help="Output file (tables: output directory)."),
    click.option("--digits", "digits", type=int, default=6,
                 help="Significant digits in printed numbers."),
    click.option("--config", "config_path", type=click.Path(), default=None,
                 help="JSON file mirroring the flags; flags win."),
]


def _with_common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


def _guarded(fn):
    """Translate library exceptions into the documented exit codes."""
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ConfigError, click.UsageError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except ValueError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except SolverError as exc:
            click.echo(f"solver error: {exc}", err=True)
            sys.exit(EXIT_SOLVER)
        except ConsistencyError as exc:
            click.echo(f"consistency error: {exc}", err=True)
            sys.exit(EXIT_CONSISTENCY)
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@click.group()
@click.version_option()
def main():
    """Collective eigenstates and spectra of exchange-coupled qubit rings."""


@main.command()
@_with_common
@click.pass_context
@_guarded
def spectrum(ctx, **_kw):
    """Eigenvalue table of one (N, n) block."""
    config = _load_config(ctx.params["config_path"])
    N, spec, coup, mode = _build_problem(ctx, config)
    n_text = _resolve(ctx, config, "excitations", None)
    if n_text is None:
        raise ConfigError("excitations: required (a number or 'all')")
    if str(n_text) == "all":
        blocks = list(range(N + 1))
    else:
        blocks = [int(n_text)]
    units, scale = _shift_unit(ctx, config, mode, spec)
    digits = int(_resolve(ctx, config, "digits", 6))
    rows = []
    for n in blocks:
        manifold = realize_degenerate_pairs(solve_auto(N, n, coup))
        radiance = classify_radiance(manifold)
        for s in manifold.states:
            vec = " ".join(_fmt(complex(c), digits) for c in s.vector)
            rows.append([n, s.label, s.v if s.v is not None else "",
                         s.branch, s.symmetry, radiance[s.label],
                         float(s.shift / scale), float(s.decay), vec])
    _emit("spectrum",
          ["excitations", "label", "v", "branch", "symmetry", "radiance",
           f"shift_{units}", "decay_gamma", "vector"],
          rows,
          {"n_qubits": N, "excitations": str(n_text), "kernel": spec.kernel,
           "mode": mode, "shift_unit": "V_N" if units == "vn" else "gamma",
           "decay_unit": "gamma"},
          _resolve(ctx, config, "fmt", "csv"), digits,
          _resolve(ctx, config, "out", None))


def _nn_only_static(N):
    vals = np.zeros(N // 2, dtype=complex) + 1j
    vals[0] = 1 + 1j
    return CouplingSet(N, vals, "static")


def _static_spec(N, kernel):
    return PolygonSpec(n_vertices=N, wavenumber=0.0, kernel=kernel)


@main.command()
@_with_common
@click.pass_context
@_guarded
def tables(ctx, **_kw):
    """Long-wavelength reference tables over a range of ring sizes:
    single-excitation shifts, biexciton levels, and absorption lines."""
    config = _load_config(ctx.params["config_path"])
    n_text = _resolve(ctx, config, "n_qubits", "2:9")
    sizes = _parse_n_range(str(n_text))
    digits = int(_resolve(ctx, config, "digits", 6))
    fmt = _resolve(ctx, config, "fmt", "csv")
    out = _resolve(ctx, config, "out", None)
    outdir = None
    if out is not None:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)

    def dest(name):
        return None if outdir is None else outdir / f"{name}.{fmt}"

    # single-excitation shifts under the three coupling models
    rows = []
    for N in sizes:
        shift_sets = []
        for coup in (_nn_only_static(N),
                     coupling_set(_static_spec(N, "dipole-perp")),
                     coupling_set(_static_spec(N, "quad-perp"))):
            m = solve_auto(N, 1, coup)
            shift_sets.append({s.v: s.shift for s in m.states})
        for v in sorted(shift_sets[1], key=lambda v: (-shift_sets[1][v], v)):
            self_paired = v == N or (N % 2 == 0 and v == N // 2)
            partner = None if self_paired else N - v
            vlabel = f"{min(v, partner)},{max(v, partner)}" if partner else str(v)
            if partner and v > partner:
                continue
            rows.append([N, vlabel,
                         float(shift_sets[0][v]), float(shift_sets[1][v]),
                         float(shift_sets[2][v])])
    _emit("single_excitation_shifts",
          ["n_qubits", "v", "nn_only_vn", "dipole_vn", "quadrupole_vn"],
          rows, {"shift_unit": "V_N"}, fmt, digits,
          dest("single_excitation_shifts"))

    # biexciton levels
    rows = []
    for N in sizes:
        dg1, levels = biexciton_table(N)
        for lv in levels:
            comps = " ".join(_fmt(c, digits) for c in lv.class_values)
            rows.append([N, float(dg1), float(lv.shift), float(lv.decay), comps])
    _emit("biexciton_levels",
          ["n_qubits", "exciton_shift_vn", "shift_vn", "decay_gamma",
           "class_components"],
          rows, {"shift_unit": "V_N", "decay_unit": "gamma",
                 "component_imag_unit": "gamma_over_V_N"},
          fmt, digits, dest("biexciton_levels"))

    # absorption lines
    rows = []
    for N in sizes:
        for ln in biexciton_lines(N):
            rows.append([N, float(ln.frequency_shift), float(ln.half_width),
                         float(ln.relative_intensity)])
    _emit("absorption_lines",
          ["n_qubits", "shift_vn", "half_width_gamma", "relative_intensity"],
          rows, {"shift_unit": "V_N", "half_width_unit": "gamma"},
          fmt, digits, dest("absorption_lines"))


@main.command()
@_with_common
@click.option("--sweep", "sweep_range", default=None,
              help="lambda/r sweep as min:max:count.")
@click.pass_context
@_guarded
def sweep(ctx, **_kw):
    """Decay constants versus lambda over nearest-neighbour separation."""
    config = _load_config(ctx.params["config_path"])
    n_text = _resolve(ctx, config, "n_qubits", None)
    if n_text is None:
        raise ConfigError("n_qubits: required")
    N = int(n_text)
    n = _resolve(ctx, config, "excitations", None)
    if n is None:
        raise ConfigError("excitations: required")
    n = int(n)
    sweep_text = _resolve(ctx, config, "sweep_range", None)
    if sweep_text is None:
        raise ConfigError("sweep: required (min:max:count)")
    ratios = _parse_sweep(str(sweep_text))
    kernel_text = _resolve(ctx, config, "kernel", "dipole-perp")
    kernel, tilt, table = _parse_kernel(kernel_text)
    if kernel == "custom":
        raise ConfigError("sweep: custom tables have no distance dependence")
    digits = int(_resolve(ctx, config, "digits", 6))
    points = decay_sweep(N, n, ratios, kernel=kernel, tilt_deg=tilt)
    rows = []
    for pt in points:
        for label in pt.decays:
            rows.append([float(pt.lambda_over_r), label,
                         float(pt.decays[label]),
                         1 if label in pt.ambiguous else 0])
    _emit("decay_sweep",
          ["lambda_over_r", "label", "decay_gamma", "crossing_flag"],
          rows, {"n_qubits": N, "excitations": n, "kernel": kernel,
                 "decay_unit": "gamma"},
          _resolve(ctx, config, "fmt", "csv"), digits,
          _resolve(ctx, config, "out", None))


@main.command()
@_with_common
@click.pass_context
@_guarded
def rates(ctx, **_kw):
    """Partial decay rates between adjacent manifolds, with per-state totals."""
    config = _load_config(ctx.params["config_path"])
    N, spec, coup, mode = _build_problem(ctx, config)
    if N > 7:
        raise ConfigError("n_qubits: rates ladder supported for N <= 7")
    digits = int(_resolve(ctx, config, "digits", 6))
    F = damping_matrix(coup)
    manifolds = [realize_degenerate_pairs(solve_auto(N, n, coup))
                 for n in range(N + 1)]
    rows = []
    for n in range(N, 0, -1):
        for s in manifolds[n].states:
            for label, rate in partial_decay_rates(s, manifolds[n - 1], F):
                rows.append(["rate", n, s.label, label, float(rate)])
    for n in range(N, 0, -1):
        for s in manifolds[n].states:
            rows.append(["total", n, s.label, "", float(s.decay)])
    _emit("decay_rates",
          ["kind", "n_upper", "upper", "lower", "rate_gamma"],
          rows, {"n_qubits": N, "kernel": spec.kernel, "mode": mode,
                 "rate_unit": "gamma"},
          _resolve(ctx, config, "fmt", "csv"), digits,
          _resolve(ctx, config, "out", None))


@main.command()
@_with_common
@click.option("--k-direction", "k_direction", default=None,
              help="Wave vector direction x,y,z (finite-kr mode only).")
@click.option("--polarization", "polarization", default="0,0,1",
              help="Field polarization direction x,y,z.")
@click.pass_context
@_guarded
def absorption(ctx, **_kw):
    """Ground-state absorption amplitudes of the single-excitation states."""
    config = _load_config(ctx.params["config_path"])
    N, spec, coup, mode = _build_problem(ctx, config)
    units, scale = _shift_unit(ctx, config, mode, spec)
    digits = int(_resolve(ctx, config, "digits", 6))

    def parse_vec(text):
        try:
            parts = [float(p) for p in str(text).split(",")]
            if len(parts) != 3:
                raise ValueError
        except ValueError:
            raise ConfigError(f"direction: expected x,y,z, got {text!r}")
        return np.array(parts)

    pol = parse_vec(_resolve(ctx, config, "polarization", "0,0,1"))
    kdir_text = _resolve(ctx, config, "k_direction", None)
    k_vec = None
    if kdir_text is not None:
        if mode != "physical":
            raise ConfigError("k-direction: needs a finite --kr")
        kdir = parse_vec(kdir_text)
        k_vec = spec.wavenumber * kdir / np.linalg.norm(kdir)

    manifold = realize_degenerate_pairs(solve_auto(N, 1, coup))
    rows = []
    for s in manifold.states:
        amp = absorption_amplitude(s, spec, k_vector=k_vec, polarization=pol)
        rows.append([s.label, float(s.shift / scale), float(s.decay), float(amp)])
    _emit("absorption",
          ["label", f"shift_{units}", "decay_gamma", "amplitude"],
          rows, {"n_qubits": N, "kernel": spec.kernel, "mode": mode},
          _resolve(ctx, config, "fmt", "csv"), digits,
          _resolve(ctx, config, "out", None))


if __name__ == "__main__":
    main()
