"""Brute-force dense eigensolver: the ground-truth oracle for the
symmetry-reduced solvers.

The solver is self-contained (Householder reduction to Hessenberg form,
explicit shifted QR with Wilkinson shifts and deflation, eigenvectors by
back-substitution on the Schur factor, one optional inverse-iteration
refinement) so that agreement between reduced and dense routes never
rests on a shared third-party decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import build_basis, build_hamiltonian_block, rotation_permutation
from .errors import SolverError
from .geometry import CouplingSet
from .manifold import Eigenstate, finalize_manifold, rotation_eigenvalue_index

_EPS = np.finfo(float).eps
MAX_DIMENSION = 1024
RESIDUAL_RTOL = 1e-10


def _hessenberg(A):
    """Unitary reduction to upper Hessenberg form: returns (H, Q), A = Q H Q^H."""
    n = A.shape[0]
    H = np.array(A, dtype=complex)
    Q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = H[k + 1:, k]
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * nx
        nv = np.linalg.norm(v)
        if nv < _EPS * nx:
            continue
        v /= nv
        H[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, k:])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        Q[:, k + 1:] -= 2.0 * np.outer(Q[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0.0
    return H, Q


def _wilkinson_shift(a, b, c, d):
    """Eigenvalue of [[a, b], [c, d]] closer to d."""
    tr = a + d
    disc = np.sqrt((a - d) ** 2 + 4.0 * b * c + 0j)
    l1 = 0.5 * (tr + disc)
    l2 = 0.5 * (tr - disc)
    return l1 if abs(l1 - d) < abs(l2 - d) else l2


def _schur(H, Q, max_iter):
    """Shifted QR iteration on a Hessenberg matrix; returns (T, Q, iterations).

    T is upper triangular with the eigenvalues on its diagonal and
    Q^H A Q = T for the accumulated unitary Q.
    """
    n = H.shape[0]
    norm = np.linalg.norm(H)
    if norm == 0.0:
        return H, Q, 0
    hi = n - 1
    iters = 0
    stall = 0
    while hi > 0:
        # deflate converged subdiagonals at the bottom of the active block
        base = abs(H[hi - 1, hi - 1]) + abs(H[hi, hi])
        if abs(H[hi, hi - 1]) <= _EPS * (base if base > 0.0 else norm):
            H[hi, hi - 1] = 0.0
            hi -= 1
            stall = 0
            continue
        lo = hi
        while lo > 0:
            base = abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])
            if abs(H[lo, lo - 1]) <= _EPS * (base if base > 0.0 else norm):
                H[lo, lo - 1] = 0.0
                break
            lo -= 1

        if iters >= max_iter:
            raise SolverError(
                "QR iteration did not converge",
                {"dimension": n, "iterations": iters,
                 "unconverged_block": (lo, hi)})
        iters += 1
        stall += 1

        m = hi - lo + 1
        W = H[lo:hi + 1, lo:hi + 1]
        if m == 2:
            # triangularize a 2x2 window in one exact rotation
            lam = _wilkinson_shift(W[0, 0], W[0, 1], W[1, 0], W[1, 1])
            v = np.array([W[0, 1], lam - W[0, 0]])
            if abs(v[0]) + abs(v[1]) == 0.0:
                v = np.array([lam - W[1, 1], W[1, 0]])
            v /= np.linalg.norm(v)
            G = np.array([[np.conj(v[0]), np.conj(v[1])],
                          [-v[1], v[0]]])
        else:
            shift = _wilkinson_shift(H[hi - 1, hi - 1], H[hi - 1, hi],
                                     H[hi, hi - 1], H[hi, hi])
            if stall and stall % 12 == 0:
                # exceptional shift to break symmetric stagnation
                shift = H[hi, hi] + 0.75 * abs(H[hi, hi - 1])

            # Explicit shifted QR sweep on the window [lo..hi]: factor the
            # shifted window with Givens rotations (sequential), then apply
            # the accumulated rotation product to the window, tail columns
            # and Q as three dense products.
            idx = np.arange(m)
            W[idx, idx] -= shift
            G = np.eye(m, dtype=complex)
            for t in range(m - 1):
                a, b = W[t, t], W[t + 1, t]
                r = np.hypot(abs(a), abs(b))
                if r == 0.0:
                    continue
                c, s = a / r, b / r
                rot = np.array([[np.conj(c), np.conj(s)], [-s, c]])
                W[t:t + 2, t:] = rot @ W[t:t + 2, t:]
                G[t:t + 2, :t + 2] = rot @ G[t:t + 2, :t + 2]
        Gh = G.conj().T
        if m == 2:
            W[:] = G @ W @ Gh
        else:
            W[:] = W @ Gh
            idx = np.arange(m)
            W[idx, idx] += shift
        if hi + 1 < n:
            H[lo:hi + 1, hi + 1:] = G @ H[lo:hi + 1, hi + 1:]
        if lo > 0:
            H[:lo, lo:hi + 1] = H[:lo, lo:hi + 1] @ Gh
        Q[:, lo:hi + 1] = Q[:, lo:hi + 1] @ Gh
    return H, Q, iters


def _triangular_eigvecs(T):
    """Eigenvectors of an upper-triangular matrix by back-substitution.

    Column k solves (T - T[k,k]) y = 0 with y_k = 1; tiny pivots are
    bumped to eps*|T| so clustered eigenvalues stay solvable.
    """
    n = T.shape[0]
    lam = np.diag(T).copy()
    tnorm = max(np.abs(T).max(), 1.0)
    Y = np.eye(n, dtype=complex)
    for j in range(n - 2, -1, -1):
        ks = np.arange(j + 1, n)
        numer = T[j, j + 1:] @ Y[j + 1:, j + 1:]
        denom = T[j, j] - lam[ks]
        small = np.abs(denom) < _EPS * tnorm
        denom = np.where(small, _EPS * tnorm, denom)
        Y[j, ks] = -numer / denom
        big = np.abs(Y[j, ks]) > 1e120
        if np.any(big):
            cols = ks[big]
            Y[:, cols] /= np.abs(Y[j, cols])
    return Y


def _solve_shifted_schur(T, Q, value, rhs):
    """One inverse-iteration step: solve (Q T Q^H - value) x = rhs."""
    n = T.shape[0]
    tnorm = max(np.abs(T).max(), 1.0)
    w = Q.conj().T @ rhs
    z = np.zeros(n, dtype=complex)
    d = np.diag(T) - value
    d = np.where(np.abs(d) < _EPS * tnorm, _EPS * tnorm, d)
    for i in range(n - 1, -1, -1):
        z[i] = (w[i] - T[i, i + 1:] @ z[i + 1:]) / d[i]
    return Q @ z


@dataclass(frozen=True)
class DenseSolveReport:
    """Result of one brute-force diagonalization."""

    dimension: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, unit Euclidean norm
    max_residual: float
    iterations: int

    @property
    def eigenpairs(self):
        return [Eigenstate(shift=float(e.real), decay=float(e.imag),
                           vector=self.eigenvectors[:, k])
                for k, e in enumerate(self.eigenvalues)]


def dense_eigensolve(matrix, max_iter=None, refine=True) -> DenseSolveReport:
    """Full eigendecomposition of a general complex square matrix.

    Raises SolverError if the QR iteration exhausts its budget or the
    final residuals exceed RESIDUAL_RTOL * ||A||.
    """
    A = np.asarray(matrix, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    n = A.shape[0]
    if n > MAX_DIMENSION:
        raise ValueError(f"dimension {n} exceeds the oracle cap {MAX_DIMENSION}")
    if n == 1:
        v = np.ones((1, 1), dtype=complex)
        return DenseSolveReport(1, np.array([complex(A[0, 0])]), v, 0.0, 0)

    hermitian = np.abs(A - A.conj().T).max() <= 1e-13 * max(np.abs(A).max(), _EPS)
    H, Q = _hessenberg(A)
    T, Q, iters = _schur(H, Q, max_iter if max_iter is not None else 40 * n)
    if hermitian:
        # the Schur factor of a Hermitian matrix is diagonal, so the Schur
        # vectors are orthonormal eigenvectors; this keeps degenerate
        # eigenspaces orthonormal, which back-substitution would not
        V = Q.copy()
        lam = np.diag(T).real.astype(complex)
    else:
        Y = _triangular_eigvecs(T)
        V = Q @ Y
        V /= np.linalg.norm(V, axis=0)
        lam = np.diag(T).copy()

    anorm = np.linalg.norm(A)
    resid = np.linalg.norm(A @ V - V * lam[None, :], axis=0)
    bar = RESIDUAL_RTOL * max(anorm, _EPS)
    if refine:
        for k in np.nonzero(resid > 0.25 * bar)[0]:
            x = _solve_shifted_schur(T, Q, lam[k], V[:, k])
            nx = np.linalg.norm(x)
            if nx == 0.0:
                continue
            x /= nx
            r = np.linalg.norm(A @ x - lam[k] * x)
            if r < resid[k]:
                V[:, k] = x
                resid[k] = r
    worst = float(resid.max())
    if worst > bar:
        raise SolverError("dense eigensolve residual too large",
                          {"max_residual": worst, "bound": bar, "dimension": n})
    return DenseSolveReport(n, lam, V, worst, iters)


def _degenerate_groups(values, rtol=1e-8):
    order = np.lexsort((values.imag, values.real))
    scale = max(np.abs(values).max(), 1e-300)
    groups = []
    for i in order:
        if groups and abs(values[i] - values[groups[-1][0]]) <= rtol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _steady_mode_labels(basis, values, vectors):
    """Best-effort rotation-mode labels for dense eigenvectors.

    Within each degenerate eigenvalue group the rotation operator is
    diagonalized on the group's span, so members become clean rotation
    eigenvectors whenever the span allows it.
    """
    perm = rotation_permutation(basis)
    vecs = vectors.copy()
    labels = [None] * len(values)
    for group in _degenerate_groups(values):
        if len(group) > 1:
            U = vecs[:, group]
            PU = np.empty_like(U)
            PU[perm, :] = U
            B, *_ = np.linalg.lstsq(U, PU, rcond=None)
            try:
                rep = dense_eigensolve(B, refine=False)
                W = U @ rep.eigenvectors
                W /= np.linalg.norm(W, axis=0)
                vecs[:, group] = W
            except SolverError:
                pass
        for i in group:
            labels[i] = rotation_eigenvalue_index(basis, vecs[:, i])
    return labels, vecs


def solve_block_dense(block, gamma=1.0):
    """Diagonalize one assembled interaction block and wrap it as a manifold."""
    report = dense_eigensolve(block.matrix)
    labels, vecs = _steady_mode_labels(block.basis, report.eigenvalues,
                                       report.eigenvectors)
    n = block.basis.n_excited
    raw = [(report.eigenvalues[k].real,
            report.eigenvalues[k].imag + n * gamma,
            vecs[:, k], labels[k])
           for k in range(report.dimension)]
    return finalize_manifold(block.basis.n_vertices, n, "physical",
                             block.basis, raw)


def solve_block_dense_static(N, n, couplings: CouplingSet):
    """Long-wavelength limit of one block by the dense route.

    Stage one diagonalizes the real static interaction matrix (shift in
    V_N units); stage two diagonalizes the collective damping matrix
    inside each degenerate shift eigenspace (decay in gamma units).
    """
    basis = build_basis(N, n)
    if basis.dim == 1:
        vec = np.ones(1)
        raw = [(0.0, float(n), vec, N)]
        return finalize_manifold(N, n, "static", basis, raw)
    HR = build_hamiltonian_block(basis, CouplingSet(N, couplings.couplings.real)).matrix.real
    J = build_hamiltonian_block(basis, CouplingSet(N, np.ones(N // 2))).matrix.real \
        + n * np.eye(basis.dim)
    rep = dense_eigensolve(HR)
    theta = rep.eigenvalues.real
    W = rep.eigenvectors
    raw = []
    for group in _degenerate_groups(rep.eigenvalues):
        Wg = W[:, group]
        Jg = Wg.conj().T @ J @ Wg
        sub = dense_eigensolve(Jg)
        for k in range(len(group)):
            vec = Wg @ sub.eigenvectors[:, k]
            vec /= np.linalg.norm(vec)
            f = sub.eigenvalues[k].real
            v = rotation_eigenvalue_index(basis, vec)
            raw.append((float(theta[group[0]]), float(f), vec, v))
    return finalize_manifold(N, n, "static", basis, raw)


def full_spectrum(N, couplings: CouplingSet, omega=0.0, gamma=1.0):
    """Dense solve of every excitation block n = 0..N of one ring."""
    if N > 10:
        raise ValueError("full dense spectrum supported for N <= 10")
    out = []
    for n in range(N + 1):
        if couplings.is_static:
            out.append(solve_block_dense_static(N, n, couplings))
            continue
        basis = build_basis(N, n)
        block = build_hamiltonian_block(basis, couplings, omega, gamma)
        out.append(solve_block_dense(block, gamma))
    return out
