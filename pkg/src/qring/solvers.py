"""Symmetry-reduced diagonalization of the ring blocks.

The vertex rotation commutes with every block, so each block splits into
rotation sectors v = 1..N.  A class of size s contributes one Fourier
vector to sector v whenever (N/s) divides v; sandwiching the block
between these vectors yields a small per-sector mode matrix (dimension
at most the number of classes) whose eigenpairs lift exactly to the full
block.  For blocks built purely from full classes the mode matrix is the
polynomial evaluation M(lambda^v) of the class submatrices, which is how
the single- and double-excitation solvers are phrased.

Long-wavelength (static) coupling sets are solved in two exact stages:
the real power-law interaction fixes the shifts, then the collective
damping matrix is diagonalized inside each degenerate shift eigenspace,
yielding real mutually orthogonal eigenvectors and decay constants that
are exact limits rather than small-kr numerics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .basis import (ExcitationBasis, HamiltonianBlock, build_basis,
                    build_hamiltonian_block, particle_hole_map)
from .dense import (dense_eigensolve, solve_block_dense,
                    solve_block_dense_static)
from .errors import SolverError, StructureError
from .geometry import CouplingSet
from .manifold import (DEGENERACY_RTOL, EigenManifold, canonical_phase,
                       finalize_manifold)

RESIDUAL_RTOL = 1e-10
QUASI_ORTHO_TOL = 1e-8


@dataclass(frozen=True)
class FourierModeSet:
    """The rotation eigenvectors u_(v) of the N-cycle shift matrix."""

    n_vertices: int
    primitive_root: complex
    modes: tuple  # (v, lambda**v, u_v) for v = 1..N

    def mode(self, v):
        return self.modes[v - 1]


def fourier_modes(N) -> FourierModeSet:
    """Eigenvectors u_(v) = (lam^v, lam^(2v), ..., lam^(Nv)) of the cyclic shift."""
    lam = np.exp(2j * np.pi / N)
    modes = []
    for v in range(1, N + 1):
        u = lam ** (v * np.arange(1, N + 1))
        modes.append((v, lam ** v, u))
    return FourierModeSet(N, lam, tuple(modes))


def shift_matrix(N) -> np.ndarray:
    """The N x N cyclic shift P with P[i, i+1] = 1."""
    P = np.zeros((N, N))
    P[np.arange(N), (np.arange(N) + 1) % N] = 1.0
    return P


def _sector_vectors(basis: ExcitationBasis):
    """Normalized per-class Fourier vectors grouped by rotation sector v."""
    N = basis.n_vertices
    lam = np.exp(2j * np.pi / N)
    sectors = {v: [] for v in range(1, N + 1)}
    for c in basis.classes:
        period = N // c.size
        for w in range(1, c.size + 1):
            v = w * period
            vec = np.zeros(basis.dim, dtype=complex)
            vec[c.start:c.start + c.size] = lam ** (v * np.arange(1, c.size + 1))
            vec /= math.sqrt(c.size)
            sectors[v].append((c, vec))
    return sectors


def _sector_matrix(H, members):
    vecs = [vec for _, vec in members]
    return np.array([[np.vdot(w1, H @ w2) for w2 in vecs] for w1 in vecs]), vecs


def _lift_sector(block, v, T, vecs, gamma):
    """Eigen-solve one sector matrix and lift its eigenvectors to the block."""
    n = block.basis.n_excited
    rep = dense_eigensolve(T)
    out = []
    for k in range(rep.dimension):
        coeff = rep.eigenvectors[:, k]
        full = sum(coeff[c] * vecs[c] for c in range(len(vecs)))
        full /= np.linalg.norm(full)
        e = rep.eigenvalues[k]
        out.append((e.real, e.imag + n * gamma, full, v))
    return out


def _solve_by_sectors(block: HamiltonianBlock, gamma=1.0,
                      sector_matrix=None) -> EigenManifold:
    """Exact block diagonalization through the rotation sectors."""
    basis = block.basis
    sectors = _sector_vectors(basis)
    raw = []
    for v in range(1, basis.n_vertices + 1):
        members = sectors[v]
        if not members:
            continue
        if sector_matrix is not None:
            T = sector_matrix(v, members)
            vecs = [vec for _, vec in members]
        else:
            T, vecs = _sector_matrix(block.matrix, members)
        raw.extend(_lift_sector(block, v, T, vecs, gamma))
    return finalize_manifold(basis.n_vertices, basis.n_excited, "physical",
                             basis, raw)


def coupling_polynomial(couplings: CouplingSet):
    """Coefficients of M(x) = sum_d coupling_d (x^d + x^(N-d)), degree < N.

    The d = N/2 term of an even ring is counted once (x^d = x^(N-d)).
    """
    N = couplings.n_vertices
    coeffs = np.zeros(N, dtype=complex)
    for d in range(1, N // 2 + 1):
        coeffs[d] += couplings.coupling(d)
        if d != N - d:
            coeffs[N - d] += couplings.coupling(d)
    return coeffs


def solve_n1(couplings: CouplingSet, omega=0.0, gamma=1.0) -> EigenManifold:
    """Single-excitation eigenstates: the block is the circulant M(P),
    so the Fourier modes diagonalize it with eigenvalues M(lambda^v)."""
    N = couplings.n_vertices
    if couplings.is_static:
        return _solve_static(N, 1, couplings)
    basis = build_basis(N, 1)
    coeffs = coupling_polynomial(couplings)
    modes = fourier_modes(N)
    raw = []
    for v, lv, u in modes.modes:
        m_v = complex(np.polyval(coeffs[::-1], lv))
        vec = u / math.sqrt(N)
        raw.append((m_v.real, m_v.imag + gamma, vec, v))
    return finalize_manifold(N, 1, "physical", basis, raw)


def extract_block_polynomials(block: HamiltonianBlock) -> np.ndarray:
    """Coefficient tables of the class-pair submatrices as polynomials in P.

    Requires every class to have full size N.  Returns an array
    ``coeffs[i, j, k]`` with submatrix(i, j) = sum_k coeffs[i, j, k] P^k;
    reconstruction is verified exactly and a failure raises
    StructureError (it would mean the basis ordering is broken).
    """
    basis = block.basis
    N = basis.n_vertices
    if any(c.size != N for c in basis.classes):
        raise StructureError("polynomial extraction needs full classes only")
    ncls = len(basis.classes)
    coeffs = np.zeros((ncls, ncls, N), dtype=complex)
    P = shift_matrix(N)
    powers = [np.linalg.matrix_power(P, k) for k in range(N)]
    for i, ci in enumerate(basis.classes):
        for j, cj in enumerate(basis.classes):
            sub = block.matrix[ci.start:ci.start + N, cj.start:cj.start + N]
            coeffs[i, j] = sub[0]
            rebuilt = sum(coeffs[i, j, k] * powers[k] for k in range(N))
            if not np.allclose(rebuilt, sub, rtol=0.0, atol=1e-14):
                raise StructureError(
                    f"class submatrix ({i}, {j}) is not a polynomial in the shift")
    return coeffs


def _polynomial_sector_matrix(coeffs, N):
    lam = np.exp(2j * np.pi / N)
    def sector_matrix(v, members):
        powers = lam ** (v * np.arange(N))
        return coeffs @ powers
    return sector_matrix


def solve_n2_odd(couplings: CouplingSet, omega=0.0, gamma=1.0) -> EigenManifold:
    """Double-excitation eigenstates of an odd ring.

    All (N-1)/2 pair classes are full, so the block is block-circulant;
    each sector v reduces to the (N-1)/2-dimensional matrix M(lambda^v)
    read off the class-submatrix polynomials, and eigenvectors lift as
    branch-vector / Fourier-mode Kronecker products.
    """
    N = couplings.n_vertices
    if N % 2 == 0 or N < 3:
        raise ValueError("solve_n2_odd needs odd N >= 3")
    if couplings.is_static:
        return _solve_static(N, 2, couplings)
    basis = build_basis(N, 2)
    block = build_hamiltonian_block(basis, couplings, omega, gamma)
    coeffs = extract_block_polynomials(block)
    return _solve_by_sectors(block, gamma,
                             sector_matrix=_polynomial_sector_matrix(coeffs, N))


def solve_n2_even(couplings: CouplingSet, omega=0.0, gamma=1.0) -> EigenManifold:
    """Double-excitation eigenstates of an even ring.

    The diameter class has only N/2 states, invariant as a set under the
    half-turn, so it joins only the even rotation sectors.  Odd sectors
    are the bare core reduction (core eigenvectors zero-padded onto the
    diameter class); each even sector bordered by the diameter Fourier
    vector gives the symmetric extensions, including diameter-only
    eigenvectors whenever the border coupling vanishes.
    """
    N = couplings.n_vertices
    if N % 2 or N < 4:
        raise ValueError("solve_n2_even needs even N >= 4")
    if couplings.is_static:
        return _solve_static(N, 2, couplings)
    basis = build_basis(N, 2)
    block = build_hamiltonian_block(basis, couplings, omega, gamma)
    return _solve_by_sectors(block, gamma)


def solve_n3(couplings: CouplingSet, omega=0.0, gamma=1.0) -> EigenManifold:
    """Triple-excitation eigenstates for rings of 6 or 7 qubits.

    N=7: all five classes are full, pure block-circulant reduction with
    5x5 sector matrices.  N=6: three full classes plus the short class
    {135, 246}, handled by the same bordered-sector construction as the
    even double-excitation case.
    """
    N = couplings.n_vertices
    if N not in (6, 7):
        raise ValueError("triple-excitation reduction implemented for N in {6, 7}")
    if couplings.is_static:
        return _solve_static(N, 3, couplings)
    basis = build_basis(N, 3)
    block = build_hamiltonian_block(basis, couplings, omega, gamma)
    if N == 7:
        coeffs = extract_block_polynomials(block)
        return _solve_by_sectors(block, gamma,
                                 sector_matrix=_polynomial_sector_matrix(coeffs, N))
    return _solve_by_sectors(block, gamma)


def _solve_static(N, n, couplings: CouplingSet) -> EigenManifold:
    """Two-stage long-wavelength solve through the rotation sectors.

    Shifts are eigenvalues of the real power-law matrix (V_N units);
    decays come from the collective damping matrix projected onto each
    degenerate shift eigenspace (gamma units, free offset included).
    Sectors v > N/2 are exact conjugates of their partners.
    """
    basis = build_basis(N, n)
    HR = build_hamiltonian_block(basis, CouplingSet(N, couplings.couplings.real)).matrix.real
    J = build_hamiltonian_block(basis, CouplingSet(N, np.ones(N // 2))).matrix.real \
        + n * np.eye(basis.dim)
    sectors = _sector_vectors(basis)
    raw = []
    half = [v for v in range(1, N + 1) if 2 * v <= N or v == N]
    for v in half:
        members = sectors[v]
        if not members:
            continue
        vecs = [vec for _, vec in members]
        TR = np.array([[np.vdot(w1, HR @ w2) for w2 in vecs] for w1 in vecs])
        TJ = np.array([[np.vdot(w1, J @ w2) for w2 in vecs] for w1 in vecs])
        rep = dense_eigensolve(TR)
        order = np.argsort(rep.eigenvalues.real)
        theta = rep.eigenvalues.real[order]
        W = rep.eigenvectors[:, order]
        scale = max(np.abs(theta).max(), 1.0)
        i = 0
        while i < len(theta):
            j = i + 1
            while j < len(theta) and abs(theta[j] - theta[i]) <= DEGENERACY_RTOL * scale:
                j += 1
            Wg = W[:, i:j]
            sub = dense_eigensolve(Wg.conj().T @ TJ @ Wg)
            for k in range(j - i):
                coeff = Wg @ sub.eigenvectors[:, k]
                full = sum(coeff[c] * vecs[c] for c in range(len(vecs)))
                full = canonical_phase(full / np.linalg.norm(full))
                if np.linalg.norm(full.imag) < 1e-10:
                    full = full.real.copy()
                f = sub.eigenvalues[k].real
                raw.append((float(theta[i]), float(f), full, v))
                if v != N and 2 * v != N:
                    raw.append((float(theta[i]), float(f), full.conj(), N - v))
            i = j
    return finalize_manifold(N, n, "static", basis, raw)


def realize_degenerate_pairs(manifold: EigenManifold) -> EigenManifold:
    """Replace each degenerate (v, N-v) pair by its real linear combinations
    (u_v + u_(N-v))/2 and (u_v - u_(N-v))/(2i), renormalized.

    Self-paired sectors (v = N and, for even N, v = N/2) are untouched,
    as is any state without a clean partner.
    """
    N = manifold.n_vertices
    states = list(manifold.states)
    used = [False] * len(states)
    new_states = {}
    for i, s in enumerate(states):
        if used[i] or s.v is None or s.v == N or 2 * s.v == N:
            continue
        partner = None
        for j, t in enumerate(states):
            if j == i or used[j] or t.v != N - s.v:
                continue
            if abs(t.value - s.value) <= 1e-8 * max(1.0, abs(s.value)) \
                    and t.branch == s.branch:
                partner = j
                break
        if partner is None:
            continue
        a, b = s.vector, states[partner].vector
        ru = 0.5 * (a + b)
        iu = (a - b) / 2j
        if np.linalg.norm(ru) < 1e-8 or np.linalg.norm(iu) < 1e-8:
            continue  # phase-degenerate pair; leave as is
        ru = canonical_phase(ru / np.linalg.norm(ru))
        iu = canonical_phase(iu / np.linalg.norm(iu))
        first, second = (i, partner) if s.v < N - s.v else (partner, i)
        new_states[first] = ru
        new_states[second] = iu
        used[i] = used[partner] = True
    if not new_states:
        return manifold
    out = []
    for i, s in enumerate(states):
        if i in new_states:
            vec = new_states[i]
            if np.linalg.norm(vec.imag) < 1e-10:
                vec = vec.real.astype(float) + 0.0
            out.append(replace(s, vector=vec))
        else:
            out.append(s)
    return EigenManifold(manifold.n_vertices, manifold.n_excited,
                         manifold.unit_mode, manifold.basis, tuple(out),
                         manifold.flags)


def verify_manifold(manifold: EigenManifold, couplings: CouplingSet,
                    gamma=1.0, rtol=RESIDUAL_RTOL):
    """Residual-check every eigenpair against the assembled block.

    Returns the worst relative residual.  Static manifolds are checked
    against both stage matrices (power-law shifts and projected damping).
    """
    N, n = manifold.n_vertices, manifold.n_excited
    basis = manifold.basis
    if manifold.unit_mode == "static":
        HR = build_hamiltonian_block(basis, CouplingSet(N, couplings.couplings.real)).matrix.real
        J = build_hamiltonian_block(basis, CouplingSet(N, np.ones(N // 2))).matrix.real \
            + n * np.eye(basis.dim)
        scale = max(np.linalg.norm(HR), np.linalg.norm(J), 1.0)
        worst = 0.0
        for s in manifold.states:
            u = s.vector
            worst = max(worst, np.linalg.norm(HR @ u - s.shift * u) / scale)
            # decay is the Rayleigh quotient of the damping matrix
            worst = max(worst, abs(np.vdot(u, J @ u).real - s.decay) / scale)
        return worst
    block = build_hamiltonian_block(basis, couplings, 0.0, gamma)
    scale = max(np.linalg.norm(block.matrix), 1e-300)
    worst = 0.0
    for s in manifold.states:
        e = complex(s.shift, s.decay - n * gamma)
        worst = max(worst, np.linalg.norm(block.matrix @ s.vector - e * s.vector) / scale)
    return worst


def quasi_orthogonality_defect(manifold: EigenManifold):
    """Departure of the eigenbasis from complex-symmetric quasi-orthogonality.

    Under the unconjugated bilinear form, eigenvectors at distinct
    eigenvalues must be orthogonal, and every eigenvector must pair with
    some partner (possibly itself) with an order-one product; a vector
    whose whole bilinear row vanishes is the signature of a defective
    block, where back-substitution silently returns parallel vectors.
    """
    V = manifold.vectors()
    G = V.T @ V
    vals = np.array([s.value for s in manifold.states])
    scale = max(np.abs(vals).max(), 1.0)
    distinct = np.abs(vals[:, None] - vals[None, :]) > 1e-6 * scale
    defect = float(np.abs(G * distinct).max()) if distinct.any() else 0.0
    weakest_row = float(np.abs(G).max(axis=1).min())
    if weakest_row < 1e-4:
        defect = max(defect, 1.0)
    return defect


def _trivial_manifold(N, n, unit_mode, gamma=1.0):
    basis = build_basis(N, n)
    vec = np.ones(1, dtype=float if unit_mode == "static" else complex)
    raw = [(0.0, float(n * gamma), vec, N)]
    return finalize_manifold(N, n, unit_mode, basis, raw)


def _particle_hole_lift(manifold: EigenManifold, n_target, gamma=1.0):
    """Map a solved n-block manifold onto its complement block N - n."""
    N = manifold.n_vertices
    perm = particle_hole_map(manifold.basis)
    basis = build_basis(N, n_target)
    raw = []
    for s in manifold.states:
        vec = np.zeros(basis.dim, dtype=s.vector.dtype)
        vec[perm] = s.vector
        decay = s.decay + (n_target - manifold.n_excited) * gamma
        raw.append((s.shift, decay, vec, s.v))
    return finalize_manifold(N, n_target, manifold.unit_mode, basis, raw,
                             manifold.flags)


def solve_auto(N, n, couplings: CouplingSet, omega=0.0, gamma=1.0) -> EigenManifold:
    """Dispatch to the cheapest exact solver for the (N, n) block.

    Reduced paths cover n (or N-n) in {0, 1}, n = 2 for any N, and n = 3
    for N in {6, 7}; everything else is brute force.  The result is
    always residual-verified against the assembled block; a reduced
    result that fails verification or quasi-orthogonality falls back to
    the dense oracle with a warning flag.
    """
    if not 0 <= n <= N:
        raise ValueError(f"excitation number {n} out of range 0..{N}")
    n_eff = min(n, N - n)
    static = couplings.is_static

    if n_eff == 0:
        return _trivial_manifold(N, n, couplings.unit_mode, gamma)

    def reduced(n_eff):
        if n_eff > 3 or (n_eff == 3 and N not in (6, 7)):
            return None
        if static:
            return _solve_static(N, n_eff, couplings)
        if n_eff == 1:
            return solve_n1(couplings, omega, gamma)
        if n_eff == 2:
            return (solve_n2_odd if N % 2 else solve_n2_even)(couplings, omega, gamma)
        return solve_n3(couplings, omega, gamma)

    manifold = reduced(n_eff)
    used_dense = False
    if manifold is None:
        if static:
            manifold = solve_block_dense_static(N, n_eff, couplings)
        else:
            basis = build_basis(N, n_eff)
            block = build_hamiltonian_block(basis, couplings, omega, gamma)
            manifold = solve_block_dense(block, gamma)
        used_dense = True
    if n_eff != n:
        manifold = _particle_hole_lift(manifold, n, gamma)

    worst = verify_manifold(manifold, couplings, gamma)
    defect = 0.0 if (static or used_dense) else quasi_orthogonality_defect(manifold)
    if worst > RESIDUAL_RTOL or defect > QUASI_ORTHO_TOL:
        if used_dense:
            raise SolverError("dense result failed verification",
                              {"residual": worst, "N": N, "n": n})
        if static:
            fallback = solve_block_dense_static(N, n_eff, couplings)
        else:
            basis = build_basis(N, n_eff)
            block = build_hamiltonian_block(basis, couplings, omega, gamma)
            fallback = solve_block_dense(block, gamma)
        if n_eff != n:
            fallback = _particle_hole_lift(fallback, n, gamma)
        worst = verify_manifold(fallback, couplings, gamma)
        if worst > RESIDUAL_RTOL:
            raise SolverError("dense fallback failed verification",
                              {"residual": worst, "N": N, "n": n})
        return fallback.with_flag("reduced-path-fallback")
    return manifold
