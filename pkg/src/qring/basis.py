"""Excitation-number basis blocks of the ring Hamiltonian.

The exchange Hamiltonian conserves the number n of excited qubits, so it
splits into blocks of dimension C(N, n).  Basis states within a block are
grouped into classes: orbits of the vertex rotation i -> i+1.  Ordering
every class as successive rotations of its representative exposes the
cyclic structure (each class-pair submatrix becomes a polynomial in the
shift matrix), which is what the symmetry solvers exploit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import CouplingSet


@dataclass(frozen=True)
class BasisClass:
    """One rotation orbit: canonical gap pattern, slice into the state list."""
    gaps: tuple
    start: int
    size: int


@dataclass(frozen=True)
class ExcitationBasis:
    """Ordered n-excitation basis of an N-qubit ring.

    ``states`` holds sorted tuples of excited vertex indices (1-based).
    Within each class the vertex rotation maps position i to position
    i+1 (mod class size); classes are sorted by their canonical gap
    pattern with short (symmetric) classes last.
    """

    n_vertices: int
    n_excited: int
    states: tuple
    classes: tuple

    @property
    def dim(self):
        return len(self.states)

    def index(self, state):
        return self.states.index(tuple(sorted(state)))

    def class_slices(self):
        return [(c, slice(c.start, c.start + c.size)) for c in self.classes]


def _rotate(state, k, N):
    return tuple(sorted((v - 1 + k) % N + 1 for v in state))


def _gap_pattern(state, N):
    s = sorted(state)
    n = len(s)
    return tuple((s[(i + 1) % n] - s[i]) % N or N for i in range(n))


def _canonical_gaps(state, N):
    g = _gap_pattern(state, N)
    return min(tuple(g[i:] + g[:i]) for i in range(len(g)))


def build_basis(N, n) -> ExcitationBasis:
    """Build the canonical class-ordered basis for n excitations of N qubits."""
    if not 0 <= n <= N:
        raise ValueError(f"excitation number {n} out of range 0..{N}")
    if n == 0:
        return ExcitationBasis(N, 0, ((),), (BasisClass((), 0, 1),))

    seen = set()
    full, short = [], []
    for state in itertools.combinations(range(1, N + 1), n):
        if state in seen:
            continue
        rep = min(_rotate(state, k, N) for k in range(N))
        orbit = [rep]
        cur = _rotate(rep, 1, N)
        while cur != rep:
            orbit.append(cur)
            cur = _rotate(cur, 1, N)
        seen.update(orbit)
        entry = (_canonical_gaps(rep, N), orbit)
        (full if len(orbit) == N else short).append(entry)

    full.sort(key=lambda e: e[0])
    short.sort(key=lambda e: e[0])
    states, classes = [], []
    for gaps, orbit in full + short:
        classes.append(BasisClass(gaps, len(states), len(orbit)))
        states.extend(orbit)
    assert len(states) == math.comb(N, n)
    return ExcitationBasis(N, n, tuple(states), tuple(classes))


@dataclass(frozen=True)
class HamiltonianBlock:
    """Interaction matrix on one excitation block, plus the uniform diagonal.

    ``matrix`` is complex symmetric with zero diagonal: entry (A, B) is
    the coupling of the single vertex pair by which the excitation sets
    A and B differ, or 0 if they differ in more than one vertex.  The
    free evolution and damping contribute only the uniform complex
    offset n*(omega + i*gamma), kept separate so all reported shifts
    and decays are relative to it.
    """

    basis: ExcitationBasis
    matrix: np.ndarray
    diagonal_offset: complex

    @property
    def dim(self):
        return self.basis.dim


def build_hamiltonian_block(basis: ExcitationBasis, couplings: CouplingSet,
                            omega=0.0, gamma=1.0) -> HamiltonianBlock:
    """Assemble the n-excitation interaction block from one coupling set.

    The single-swap rule: H[A, B] = coupling(i, j) when A = S + {i} and
    B = S + {j}; everything else vanishes.
    """
    N = basis.n_vertices
    if couplings.n_vertices != N:
        raise ValueError(f"coupling set is for N={couplings.n_vertices}, "
                         f"basis is for N={N}")
    index = {s: k for k, s in enumerate(basis.states)}
    H = np.zeros((basis.dim, basis.dim), dtype=complex)
    for k, state in enumerate(basis.states):
        occupied = set(state)
        for i in state:
            rest = occupied - {i}
            for j in range(1, N + 1):
                if j in occupied:
                    continue
                other = tuple(sorted(rest | {j}))
                H[index[other], k] = couplings.pair_coupling(i, j)
    offset = basis.n_excited * (omega + 1j * gamma)
    return HamiltonianBlock(basis, H, offset)


def rotation_permutation(basis: ExcitationBasis) -> np.ndarray:
    """Index permutation induced on the basis by the vertex rotation i -> i+1."""
    N = basis.n_vertices
    index = {s: k for k, s in enumerate(basis.states)}
    return np.array([index[_rotate(s, 1, N)] for s in basis.states])


def reflection_permutation(basis: ExcitationBasis) -> np.ndarray:
    """Index permutation induced by the reflection through vertex N (i -> N - i)."""
    N = basis.n_vertices
    index = {s: k for k, s in enumerate(basis.states)}
    def refl(state):
        return tuple(sorted((N - v) % N + 1 for v in state))
    return np.array([index[refl(s)] for s in basis.states])


def particle_hole_map(basis: ExcitationBasis) -> np.ndarray:
    """Bijection from n-excitation states to their complements in the
    (N - n)-excitation basis.

    The induced matrices are identical entry-by-entry, so the two blocks
    share their spectrum exactly.
    """
    N = basis.n_vertices
    partner = build_basis(N, N - basis.n_excited)
    index = {s: k for k, s in enumerate(partner.states)}
    allv = set(range(1, N + 1))
    return np.array([index[tuple(sorted(allv - set(s)))] for s in basis.states])
