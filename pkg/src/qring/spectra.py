"""Spectroscopic observables: long-wavelength level tables, absorption
lines, radiance classification, distance sweeps and inter-manifold decay
rates.

Long-wavelength conventions: level shifts are quoted in units of the
nearest-neighbour static interaction energy V_N, decay constants always
in units of the single-emitter damping gamma.  For a ring driven from
the ground state only the totally symmetric single-excitation state
absorbs; the biexciton lines then sit at the difference of the two
shifts, with half-width F2 + F1 and relative intensity proportional to
the upper state's decay constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .basis import build_basis, build_hamiltonian_block
from .errors import ConsistencyError
from .geometry import CouplingSet, PolygonSpec, coupling_set
from .manifold import SYMMETRIC, EigenManifold, Eigenstate
from .solvers import realize_degenerate_pairs, solve_auto

ACTIVE_INTENSITY_FLOOR = 1e-12


@dataclass(frozen=True)
class SpectralLine:
    """One absorption transition between adjacent excitation manifolds."""

    upper: tuple  # (n, state label)
    lower: tuple
    frequency_shift: float  # V_N units
    half_width: float       # gamma units
    relative_intensity: float


@dataclass(frozen=True)
class BiexcitonLevel:
    """One symmetric-sector double-excitation level in the static limit."""

    shift: float            # V_N units
    decay: float            # gamma units
    vector: np.ndarray      # normalized, real
    class_values: tuple     # complex per-class components, gauge: first
                            # class with real weight = 1; imaginary parts
                            # are the first-order finite-damping mixing
                            # in units gamma/V_N


@dataclass(frozen=True)
class DecayCurvePoint:
    """Decay constants of every tracked state at one ring size/wavelength ratio."""

    lambda_over_r: float
    decays: dict
    ambiguous: tuple = ()


def _static_spec(N, kernel):
    return PolygonSpec(n_vertices=N, wavenumber=0.0, kernel=kernel)


def long_wavelength_manifolds(N, kernel="dipole-perp", n_max=None):
    """Static-limit manifolds for n = 0..n_max (default: all of them).

    Degenerate rotation pairs are recombined into real vectors, so the
    returned eigenbases are real and orthonormal.
    """
    if n_max is None:
        n_max = N
    coup = coupling_set(_static_spec(N, kernel))
    out = []
    for n in range(n_max + 1):
        out.append(realize_degenerate_pairs(solve_auto(N, n, coup)))
    return out


def _symmetric_states(manifold):
    return [s for s in manifold.states if s.symmetry == SYMMETRIC]


def exciton_line(N, kernel="dipole-perp") -> SpectralLine:
    """The one optically active ground -> single-excitation line.

    Only the totally symmetric state couples to a long-wavelength field;
    its decay constant is N*gamma, so the (half) line width is N*gamma.
    """
    m1 = solve_auto(N, 1, coupling_set(_static_spec(N, kernel)))
    sym = _symmetric_states(m1)[0]
    return SpectralLine(upper=(1, sym.label), lower=(0, "ground"),
                        frequency_shift=sym.shift, half_width=sym.decay,
                        relative_intensity=1.0)


def biexciton_lines(N, kernel="dipole-perp"):
    """Absorption lines from the symmetric exciton into the biexciton band.

    Shift = G2 - G1 (V_N units), half-width = F2 + F1 (gamma units),
    relative intensities proportional to the upper decay constants and
    normalized to 1 over the active states.
    """
    coup = coupling_set(_static_spec(N, kernel))
    m1 = solve_auto(N, 1, coup)
    m2 = solve_auto(N, min(2, N), coup)
    exciton = _symmetric_states(m1)[0]
    active = _symmetric_states(m2)
    total = sum(s.decay for s in active)
    lines = []
    for s in sorted(active, key=lambda s: -s.shift):
        intensity = s.decay / total
        if intensity <= ACTIVE_INTENSITY_FLOOR:
            continue
        lines.append(SpectralLine(
            upper=(2, s.label), lower=(1, exciton.label),
            frequency_shift=s.shift - exciton.shift,
            half_width=s.decay + exciton.decay,
            relative_intensity=intensity))
    return lines


def _class_values(basis, vector, rtol=1e-8):
    """Per-class component values of a class-constant vector."""
    vals = []
    for c in basis.classes:
        seg = vector[c.start:c.start + c.size]
        if np.abs(seg - seg[0]).max() > rtol * max(1.0, np.abs(seg).max()):
            raise ValueError("vector is not constant within a class")
        vals.append(complex(seg[0]))
    return vals


def biexciton_table(N, kernel="dipole-perp"):
    """Exciton shift and the symmetric-sector biexciton levels.

    Returns (exciton_shift, [BiexcitonLevel...]) sorted by descending
    shift.  Class component values carry a first-order imaginary part
    (units gamma/V_N) from the finite-damping mixing of the shift
    eigenvectors, gauged so the first class with real weight reads 1.
    """
    coup = coupling_set(_static_spec(N, kernel))
    m1 = solve_auto(N, 1, coup)
    n2 = min(2, N)
    m2 = realize_degenerate_pairs(solve_auto(N, n2, coup))
    exciton = _symmetric_states(m1)[0]

    basis = m2.basis
    damping = build_hamiltonian_block(
        basis, CouplingSet(N, np.ones(N // 2))).matrix.real

    all_states = [(s.shift, np.real(s.vector)) for s in m2.states]
    rows = []
    for s in _symmetric_states(m2):
        w = np.real(s.vector)
        delta = np.zeros_like(w)
        for theta_m, wm in all_states:
            if abs(theta_m - s.shift) <= 1e-9 * max(1.0, abs(s.shift)):
                continue
            delta += (wm @ (damping @ w)) / (s.shift - theta_m) * wm
        reals = _class_values(basis, w + 0j)
        imags = _class_values(basis, delta + 0j)
        scale = max(abs(v) for v in reals)
        g = next((k for k, v in enumerate(reals) if abs(v) > 1e-6 * scale), 0)
        wg, dg = reals[g].real, imags[g].real
        # first-order gauge: (w_c + i d_c)/(w_g + i d_g) to leading order
        gauged = tuple(complex(v.real / wg, (d.real * wg - v.real * dg) / wg**2)
                       for v, d in zip(reals, imags))
        rows.append(BiexcitonLevel(shift=s.shift, decay=s.decay,
                                   vector=w, class_values=gauged))
    rows.sort(key=lambda r: -r.shift)
    return exciton.shift, rows


def absorption_amplitude(state, spec: PolygonSpec, k_vector=None,
                         polarization=None):
    """Relative probability of exciting a single-excitation state from the
    ground state by a weak field.

    |sum_i conj(c_i) (mu_i . e) exp(i k . R_i)|^2 over the vertex
    amplitudes c_i.  In the static limit (or when no wave vector is
    given) the position phases are dropped.
    """
    vec = state.vector if isinstance(state, Eigenstate) else np.asarray(state)
    N = spec.n_vertices
    if vec.shape != (N,):
        raise ValueError("absorption amplitude is defined on the "
                         f"single-excitation block (expected length {N})")
    if polarization is None:
        pol = np.array([0.0, 0.0, 1.0])
    else:
        pol = np.asarray(polarization, dtype=float)
        pol = pol / np.linalg.norm(pol)
    amp = 0.0 + 0.0j
    for i in range(1, N + 1):
        weight = float(spec.moment_direction(i) @ pol)
        phase = 1.0 + 0.0j
        if k_vector is not None and not spec.is_static:
            phase = np.exp(1j * float(np.asarray(k_vector) @ spec.vertex_position(i)))
        amp += np.conj(vec[i - 1]) * weight * phase
    return float(abs(amp) ** 2)


def damping_matrix(couplings: CouplingSet) -> np.ndarray:
    """Pairwise damping constants: gamma on the diagonal, Im(coupling) off it."""
    N = couplings.n_vertices
    F = np.eye(N)
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if i != j:
                F[i - 1, j - 1] = couplings.pair_coupling(i, j).imag
    return F


def lowering_maps(N, n):
    """Matrices of the lowering operators S_i^- from the n- to the
    (n-1)-excitation basis; list indexed by vertex i-1."""
    upper = build_basis(N, n)
    lower = build_basis(N, n - 1)
    index = {s: k for k, s in enumerate(lower.states)}
    maps = []
    for i in range(1, N + 1):
        M = np.zeros((lower.dim, upper.dim))
        for k, s in enumerate(upper.states):
            if i in s:
                M[index[tuple(v for v in s if v != i)], k] = 1.0
        maps.append(M)
    return maps


def partial_decay_rates(upper: Eigenstate, lower_manifold: EigenManifold,
                        f_matrix, sum_rtol=1e-8):
    """Decay rates from one eigenstate into every state one excitation below.

    rate(u -> w) = sum_ij F_ij c_i conj(c_j) with c_i = <w|S_i^-|u>;
    the rates must add up to the upper state's decay constant, and a
    violation beyond ``sum_rtol`` (relative) raises ConsistencyError --
    the symptom of a non-orthogonal lower eigenbasis at strongly complex
    couplings.
    """
    N = lower_manifold.n_vertices
    n_upper = lower_manifold.n_excited + 1
    maps = lowering_maps(N, n_upper)
    u = upper.vector
    if u.shape != (maps[0].shape[1],):
        raise ValueError("upper state dimension does not match the manifold below")
    F = np.asarray(f_matrix, dtype=float)
    rates = []
    total = 0.0
    for w_state in lower_manifold.states:
        w = w_state.vector
        c = np.array([np.vdot(w, maps[i] @ u) for i in range(N)])
        rate = float(np.einsum("i,ij,j->", c, F, c.conj()).real)
        rates.append((w_state.label, rate))
        total += rate
    # absolute floor keeps roundoff on dark states (F ~ 0) from tripping
    if abs(total - upper.decay) > sum_rtol * max(abs(upper.decay), 1e-3):
        raise ConsistencyError(
            f"partial rates sum to {total:.12g} but the state decays at "
            f"{upper.decay:.12g}; the lower eigenbasis is not orthonormal")
    return rates


def classify_radiance(manifold: EigenManifold, epsilon=1e-3, gamma=1.0):
    """Label each state dark / subradiant / superradiant / normal.

    Dark: decay below epsilon*gamma.  Normal: decay equal to the
    noninteracting value n*gamma (within roundoff).  Otherwise sub- or
    superradiant by comparison with n*gamma.
    """
    n = manifold.n_excited
    base = n * gamma
    labels = {}
    for s in manifold.states:
        if s.decay < epsilon * gamma:
            cls = "dark"
        elif abs(s.decay - base) <= 1e-11 * max(1.0, base):
            cls = "normal"
        elif s.decay < base:
            cls = "subradiant"
        else:
            cls = "superradiant"
        labels[s.label] = cls
    return labels


def decay_sweep(N, n, lambda_over_r, kernel="dipole-perp", tilt_deg=None,
                circumradius=1.0, min_overlap=0.9):
    """Decay constants of the (N, n) eigenstates versus lambda over
    nearest-neighbour separation.

    States are tracked across sweep points by maximal eigenvector
    overlap (optimal assignment); points where the best overlap drops
    below ``min_overlap`` are flagged with the affected labels.
    """
    ratios = np.atleast_1d(np.asarray(lambda_over_r, dtype=float))
    if np.any(ratios <= 0) or np.any(np.diff(ratios) < 0):
        raise ValueError("lambda_over_r must be positive and non-decreasing")
    r1 = 2.0 * circumradius * math.sin(math.pi / N)
    points = []
    prev_vectors = None
    labels = None
    for ratio in ratios:
        k = 2.0 * math.pi / (ratio * r1)
        spec = PolygonSpec(n_vertices=N, circumradius=circumradius,
                           wavenumber=k, kernel=kernel, tilt_deg=tilt_deg)
        manifold = solve_auto(N, n, coupling_set(spec))
        V = manifold.vectors()
        decays = manifold.decays()
        if prev_vectors is None:
            labels = [s.label for s in manifold.states]
            order = np.arange(len(labels))
            ambiguous = ()
        else:
            overlap = np.abs(prev_vectors.conj().T @ V)
            rows, cols = linear_sum_assignment(-overlap)
            order = np.empty_like(cols)
            order[rows] = cols
            ambiguous = tuple(labels[r] for r in rows
                              if overlap[r, order[r]] < min_overlap)
        points.append(DecayCurvePoint(
            lambda_over_r=float(ratio),
            decays={labels[i]: float(decays[order[i]]) for i in range(len(labels))},
            ambiguous=ambiguous))
        prev_vectors = V[:, order]
    return points
