"""Collective eigenstates and emission spectra of exchange-coupled qubit rings.

Identical two-level emitters on the vertices of a regular polygon,
coupled pairwise through any separation-dependent exchange interaction
(retarded dipole-dipole, quadrupole-quadrupole, tilted moments, or a
user-supplied table).  Complex eigenvalues carry the level shift in the
real part and the full decay constant in the imaginary part; the
rotation symmetry of the ring reduces every excitation block to small
per-sector matrices, cross-checked against a self-contained dense
eigensolver.
"""

from .basis import (ExcitationBasis, HamiltonianBlock, build_basis,
                    build_hamiltonian_block, particle_hole_map,
                    reflection_permutation, rotation_permutation)
from .dense import DenseSolveReport, dense_eigensolve, full_spectrum
from .errors import ConfigError, ConsistencyError, SolverError, StructureError
from .geometry import (CouplingSet, PolygonSpec, coupling_set,
                       dipole_perp_kernel, hankel2, oriented_dipole_kernel,
                       pair_separation, quad_perp_kernel, static_nn_energy)
from .manifold import EigenManifold, Eigenstate
from .solvers import (FourierModeSet, coupling_polynomial,
                      extract_block_polynomials, fourier_modes,
                      realize_degenerate_pairs, solve_auto, solve_n1,
                      solve_n2_even, solve_n2_odd, solve_n3, verify_manifold)
from .spectra import (DecayCurvePoint, SpectralLine, absorption_amplitude,
                      biexciton_lines, biexciton_table, classify_radiance,
                      decay_sweep, exciton_line, long_wavelength_manifolds,
                      partial_decay_rates)

__version__ = "0.1.0"

__all__ = [
    "CouplingSet", "PolygonSpec", "coupling_set", "pair_separation",
    "hankel2", "dipole_perp_kernel", "quad_perp_kernel",
    "oriented_dipole_kernel", "static_nn_energy",
    "ExcitationBasis", "HamiltonianBlock", "build_basis",
    "build_hamiltonian_block", "particle_hole_map",
    "rotation_permutation", "reflection_permutation",
    "FourierModeSet", "fourier_modes", "coupling_polynomial",
    "extract_block_polynomials", "solve_n1", "solve_n2_odd",
    "solve_n2_even", "solve_n3", "solve_auto", "realize_degenerate_pairs",
    "verify_manifold", "EigenManifold", "Eigenstate",
    "DenseSolveReport", "dense_eigensolve", "full_spectrum",
    "SpectralLine", "DecayCurvePoint", "long_wavelength_manifolds",
    "exciton_line", "biexciton_lines", "biexciton_table",
    "absorption_amplitude", "decay_sweep", "partial_decay_rates",
    "classify_radiance",
    "ConfigError", "ConsistencyError", "SolverError", "StructureError",
]
