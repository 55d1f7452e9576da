"""Eigenpair containers shared by the symmetry solvers and the dense oracle."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .basis import ExcitationBasis, rotation_permutation

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"
GENERIC = "generic"

# Relative eigenvalue distance below which two states are treated as one
# degenerate group (rotation partners v and N-v are exact up to roundoff).
DEGENERACY_RTOL = 1e-8


def canonical_phase(vec):
    """Rotate a vector's global phase so its largest component is real positive."""
    k = int(np.argmax(np.abs(vec)))
    a = vec[k]
    if abs(a) == 0:
        return vec
    return vec * (abs(a) / a)


@dataclass(frozen=True)
class Eigenstate:
    """One eigenpair: complex eigenvalue split into shift and decay, plus labels.

    ``shift`` is the energy shift G relative to n*omega (gamma units, or
    V_N units for static manifolds); ``decay`` is the full decay constant
    F in gamma units, including the free-damping offset n*gamma.  ``v``
    is the rotation mode index (1..N, N = fully symmetric) when known.
    """

    shift: float
    decay: float
    vector: np.ndarray
    v: int | None = None
    branch: int = 0
    symmetry: str = GENERIC
    group: int = -1

    @property
    def value(self):
        return complex(self.shift, self.decay)

    @property
    def label(self):
        core = f"v{self.v}" if self.v is not None else "mixed"
        return f"{core}.{self.branch}"


@dataclass(frozen=True)
class EigenManifold:
    """Complete set of eigenpairs of one (N, n) block."""

    n_vertices: int
    n_excited: int
    unit_mode: str
    basis: ExcitationBasis
    states: tuple
    flags: tuple = ()

    @property
    def dim(self):
        return len(self.states)

    def shifts(self):
        return np.array([s.shift for s in self.states])

    def decays(self):
        return np.array([s.decay for s in self.states])

    def vectors(self):
        return np.column_stack([s.vector for s in self.states])

    def interaction_values(self):
        """Eigenvalues of the bare interaction block (decay offset removed)."""
        return np.array([complex(s.shift, s.decay - self.n_excited)
                         for s in self.states])

    def state(self, label):
        for s in self.states:
            if s.label == label:
                return s
        raise KeyError(label)

    def with_flag(self, flag):
        return replace(self, flags=self.flags + (flag,))


def symmetry_tag(N, v):
    if v == N:
        return SYMMETRIC
    if N % 2 == 0 and v == N // 2:
        return ANTISYMMETRIC
    return GENERIC


def finalize_manifold(N, n, unit_mode, basis, raw_states, flags=()):
    """Sort states canonically, assign branch indices and degeneracy groups.

    ``raw_states`` holds (shift, decay, vector, v) tuples.  Ordering is
    ascending shift, then decay, then mode index; degeneracy groups join
    states whose complex eigenvalues agree to DEGENERACY_RTOL relative.
    """
    def sort_key(item):
        shift, decay, vec, v = item
        return (shift, decay, v if v is not None else 0)

    ordered = sorted(raw_states, key=sort_key)
    if len(ordered) != basis.dim:
        raise RuntimeError(
            f"manifold has {len(ordered)} eigenpairs, block dimension is {basis.dim}")
    scale = max((abs(complex(s, d)) for s, d, _, _ in ordered), default=1.0)
    scale = max(scale, 1e-300)

    groups = []
    for i, (s, d, _, _) in enumerate(ordered):
        val = complex(s, d)
        if groups and abs(val - groups[-1][1]) <= DEGENERACY_RTOL * scale:
            groups[-1][0].append(i)
        else:
            groups.append(([i], val))

    branch_counter = {}
    states = []
    for gid, (members, _) in enumerate(groups):
        for i in members:
            shift, decay, vec, v = ordered[i]
            b = branch_counter.get(v, 0)
            branch_counter[v] = b + 1
            states.append(Eigenstate(
                shift=float(shift), decay=float(decay),
                vector=np.asarray(vec),
                v=v, branch=b,
                symmetry=symmetry_tag(N, v) if v is not None else GENERIC,
                group=gid))
    return EigenManifold(N, n, unit_mode, basis, tuple(states), tuple(flags))


def rotation_eigenvalue_index(basis, vector, rtol=1e-8):
    """Mode index v such that rotating the basis multiplies ``vector`` by
    exp(-2*pi*i*v/N), or None if the vector is not a rotation eigenvector."""
    N = basis.n_vertices
    perm = rotation_permutation(basis)
    rotated = np.empty_like(vector)
    rotated[perm] = vector
    nrm = np.vdot(vector, vector).real
    ratio = np.vdot(vector, rotated) / nrm
    if abs(abs(ratio) - 1.0) > rtol or np.linalg.norm(rotated - ratio * vector) > rtol * np.sqrt(nrm):
        return None
    v = int(round(-np.angle(ratio) * N / (2 * np.pi))) % N
    return v if v else N
