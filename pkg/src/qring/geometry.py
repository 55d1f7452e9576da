"""Ring geometry and retarded exchange-coupling kernels.

Qubits sit on the vertices of a regular polygon with N vertices on a
circle of radius R, numbered sequentially.  The exchange coupling
between two qubits depends only on their vertex offset class
d = 1 .. floor(N/2); this module evaluates the physical coupling for
each class, either at finite kr (retarded kernels built from spherical
Hankel functions) or in the long-wavelength (static) limit.

All couplings are expressed in units of the single-emitter damping
constant (half the Einstein A coefficient of the transition), so the
imaginary part of every kernel tends to exactly 1 as kr -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

KERNELS = ("dipole-perp", "quad-perp", "oriented", "custom")

_SERIES_TERMS = 18
_SERIES_CROSSOVER = 1.5


def _series_coeffs(order):
    # j_n(x) = x^n * sum_k c_k x^(2k),  c_0 = 1/(2n+1)!!,
    # c_k = c_{k-1} * (-1/2) / (k (2n+2k+1)); converges fast for x < 2.
    c = [1.0 / math.prod(range(1, 2 * order + 2, 2))]
    for k in range(1, _SERIES_TERMS):
        c.append(c[-1] * (-0.5) / (k * (2 * order + 2 * k + 1)))
    return np.array(c[::-1])


_J_SERIES = {n: _series_coeffs(n) for n in (0, 2, 4)}


def _sph_j(order, x):
    """Spherical Bessel j_n for n in {0, 2, 4}.

    Closed trigonometric form for x >= 1.5; ascending series below, where
    the closed form loses up to n*3 digits to cancellation.
    """
    x = np.asarray(x, dtype=float)
    small = x < _SERIES_CROSSOVER
    xs = np.where(small, x, 1.0)  # safe dummy
    xl = np.where(small, 1.0, x)
    series = xs**order * np.polyval(_J_SERIES[order], xs * xs)
    s, c = np.sin(xl), np.cos(xl)
    if order == 0:
        closed = s / xl
    elif order == 2:
        closed = (3 / xl**3 - 1 / xl) * s - 3 / xl**2 * c
    else:
        closed = (105 / xl**5 - 45 / xl**3 + 1 / xl) * s - (105 / xl**4 - 10 / xl**2) * c
    return np.where(small, series, closed)


def _sph_y(order, x):
    """Spherical Bessel y_n for n in {0, 2, 4} (closed form, stable for x > 0)."""
    x = np.asarray(x, dtype=float)
    s, c = np.sin(x), np.cos(x)
    if order == 0:
        return -c / x
    if order == 2:
        return -(3 / x**3 - 1 / x) * c - 3 / x**2 * s
    return -(105 / x**5 - 45 / x**3 + 1 / x) * c - (105 / x**4 - 10 / x**2) * s


def hankel2(order, x):
    """Spherical Hankel function of the second kind, h_n^(2) = j_n - i y_n.

    Parameters
    ----------
    order : int
        One of 0, 2, 4 (the only orders entering the coupling kernels).
    x : float or ndarray
        Argument, strictly positive.

    Returns
    -------
    complex or ndarray
        h_order^(2)(x).
    """
    if order not in (0, 2, 4):
        raise ValueError(f"unsupported spherical Hankel order {order}; need 0, 2 or 4")
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ValueError("spherical Hankel argument must be > 0; "
                         "use the static limit for zero separation or wavenumber")
    out = _sph_j(order, xa) - 1j * _sph_y(order, xa)
    return out if np.ndim(x) else complex(out)


def pair_separation(N, d, R):
    """Distance between two vertices of a regular N-gon at offset class d.

    Vertices sit at angles 2*pi*i/N on a circle of radius R, so the chord
    for offset d is 2 R sin(pi d / N).
    """
    if not 1 <= d <= N // 2:
        raise ValueError(f"offset class {d} out of range 1..{N // 2} for N={N}")
    return 2.0 * R * math.sin(math.pi * d / N)


def dipole_perp_kernel(x, static=False):
    """Coupling of two parallel transition dipoles perpendicular to the ring plane.

    Returns the dimensionless coupling (units of the emitter damping
    constant) at scaled separation x = k*r.  In static mode the analytic
    long-wavelength leading term is returned: 3/(2 x^3) + 1j.
    """
    if static:
        x = np.asarray(x, dtype=float)
        out = 1.5 / x**3 + 1j
        return out if out.ndim else complex(out)
    h0 = hankel2(0, x)
    h2 = hankel2(2, x)
    return 1j * (-0.5 * h2 + h0)


# Static-limit coefficient of the quadrupole kernel.  The y_4 asymptote
# y_4 -> -105/x^5 dominates, with kernel weight 9/14, so
# Re -> (9/14)*105 / x^5 = 135/(2 x^5).
QUAD_STATIC_COEFF = 67.5


def quad_perp_kernel(x, static=False):
    """Coupling of two linear transition quadrupoles perpendicular to the ring plane.

    Same conventions as :func:`dipole_perp_kernel`; normalized so the
    imaginary part tends to 1 (equal collective decoherence) as x -> 0.
    Static mode returns 135/(2 x^5) + 1j.
    """
    if static:
        x = np.asarray(x, dtype=float)
        out = QUAD_STATIC_COEFF / x**5 + 1j
        return out if out.ndim else complex(out)
    h0 = hankel2(0, x)
    h2 = hankel2(2, x)
    h4 = hankel2(4, x)
    return 1j * (-9.0 / 14.0 * h4 + 5.0 / 14.0 * h2 + h0)


def oriented_dipole_kernel(mu_i, mu_j, r_hat, x):
    """Coupling of two arbitrarily oriented unit transition dipoles.

    Parameters
    ----------
    mu_i, mu_j : array_like, shape (3,)
        Unit moment directions of the two emitters.
    r_hat : array_like, shape (3,)
        Unit vector along the separation.
    x : float
        Scaled separation k*r, > 0.
    """
    mu_i = np.asarray(mu_i, dtype=float)
    mu_j = np.asarray(mu_j, dtype=float)
    r_hat = np.asarray(r_hat, dtype=float)
    for name, vec in (("mu_i", mu_i), ("mu_j", mu_j), ("r_hat", r_hat)):
        if abs(np.linalg.norm(vec) - 1.0) > 1e-12:
            raise ValueError(f"{name} must be a unit vector (|{name}| = "
                             f"{np.linalg.norm(vec):.15g})")
    dot = float(mu_i @ mu_j)
    proj = float(mu_i @ r_hat) * float(mu_j @ r_hat)
    h0 = hankel2(0, x)
    h2 = hankel2(2, x)
    return 1j * (0.5 * (3.0 * proj - dot) * h2 + dot * h0)


@dataclass(frozen=True)
class PolygonSpec:
    """Geometry and coupling model of one ring of identical qubits.

    Attributes
    ----------
    n_vertices : int
        Number of qubits N >= 2, placed at angles 2*pi*i/N.
    circumradius : float
        Circle radius R (arbitrary length unit).
    wavenumber : float
        k = 2*pi/lambda in inverse length units.  k = 0 selects the
        analytic long-wavelength (static) limit.
    kernel : str
        One of ``dipole-perp``, ``quad-perp``, ``oriented``, ``custom``.
    tilt_deg : float, optional
        For the oriented kernel: angle between each moment and the local
        ring tangent, in degrees.
    custom_table : dict, optional
        For the custom kernel: offset class (int) -> complex coupling in
        damping units.
    free_decay : float
        Single-emitter damping constant gamma; the unit of all decays.
    transition_frequency : float
        Bare transition frequency omega; enters only as an additive
        offset n*omega, so reported shifts never depend on it.
    """

    n_vertices: int
    circumradius: float = 1.0
    wavenumber: float = 1.0
    kernel: str = "dipole-perp"
    tilt_deg: float | None = None
    custom_table: dict = None
    free_decay: float = 1.0
    transition_frequency: float = 0.0

    def __post_init__(self):
        if self.n_vertices < 2:
            raise ConfigError("n_vertices must be >= 2")
        if self.circumradius <= 0:
            raise ConfigError("circumradius must be > 0")
        if self.wavenumber < 0:
            raise ConfigError("wavenumber must be >= 0 (0 = static limit)")
        if self.kernel not in KERNELS:
            raise ConfigError(f"unknown kernel {self.kernel!r}; expected one of {KERNELS}")
        if self.kernel == "oriented" and self.tilt_deg is None:
            raise ConfigError("oriented kernel requires tilt_deg")
        if self.kernel == "custom" and not self.custom_table:
            raise ConfigError("custom kernel requires a coupling table")

    @property
    def is_static(self):
        return self.wavenumber == 0.0 and self.kernel != "custom"

    def separation(self, d):
        return pair_separation(self.n_vertices, d, self.circumradius)

    def vertex_position(self, i):
        """Cartesian position of vertex i (1-based), ring in the xy plane."""
        phi = 2.0 * math.pi * i / self.n_vertices
        return np.array([self.circumradius * math.cos(phi),
                         self.circumradius * math.sin(phi), 0.0])

    def moment_direction(self, i):
        """Unit transition-moment direction at vertex i (1-based)."""
        if self.kernel == "oriented":
            # tilted from the local tangent, out of plane
            phi = 2.0 * math.pi * i / self.n_vertices
            tangent = np.array([-math.sin(phi), math.cos(phi), 0.0])
            th = math.radians(self.tilt_deg)
            return math.cos(th) * tangent + math.sin(th) * np.array([0.0, 0.0, 1.0])
        return np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class CouplingSet:
    """The floor(N/2) characteristic couplings of one ring.

    ``couplings[d-1]`` is the complex coupling for offset class d.  In
    ``physical`` mode both parts are in units of the emitter damping
    constant gamma.  In ``static`` mode the real parts follow the
    long-wavelength power law normalized so class 1 equals 1 (i.e. they
    are in units of the nearest-neighbour interaction energy V_N) and
    every imaginary part is exactly 1 (equal collective decoherence).
    """

    n_vertices: int
    couplings: np.ndarray
    unit_mode: str = "physical"

    def __post_init__(self):
        object.__setattr__(self, "couplings",
                           np.asarray(self.couplings, dtype=complex))
        if len(self.couplings) != self.n_vertices // 2:
            raise ValueError(
                f"need {self.n_vertices // 2} couplings for N={self.n_vertices}, "
                f"got {len(self.couplings)}")
        if self.unit_mode not in ("physical", "static"):
            raise ValueError(f"unknown unit_mode {self.unit_mode!r}")

    def coupling(self, d):
        """Coupling for offset class d (1-based)."""
        return complex(self.couplings[d - 1])

    def pair_coupling(self, i, j):
        """Coupling between vertices i and j (1-based)."""
        N = self.n_vertices
        d = abs(i - j) % N
        d = min(d, N - d)
        if d == 0:
            raise ValueError("no self coupling")
        return complex(self.couplings[d - 1])

    @property
    def is_static(self):
        return self.unit_mode == "static"


def _static_exponent(kernel):
    return {"dipole-perp": 3, "quad-perp": 5}.get(kernel)


def coupling_set(spec: PolygonSpec) -> CouplingSet:
    """Evaluate the selected kernel at every offset-class separation.

    Physical mode gives couplings in gamma units; static mode (k = 0)
    gives real parts on the r^-p power law normalized to the
    nearest-neighbour value and imaginary parts exactly 1.
    """
    N = spec.n_vertices
    n_off = N // 2
    if spec.kernel == "custom":
        vals = []
        for d in range(1, n_off + 1):
            if d not in spec.custom_table:
                raise ConfigError(f"custom kernel table missing offset class {d}")
            vals.append(complex(spec.custom_table[d]))
        return CouplingSet(N, np.array(vals), "physical")

    if spec.is_static:
        p = _static_exponent(spec.kernel)
        if p is None:
            raise ConfigError(
                "static limit is defined for dipole-perp and quad-perp kernels only")
        r1 = spec.separation(1)
        rho = np.array([(r1 / spec.separation(d)) ** p for d in range(1, n_off + 1)])
        return CouplingSet(N, rho + 1j, "static")

    vals = []
    for d in range(1, n_off + 1):
        x = spec.wavenumber * spec.separation(d)
        if spec.kernel == "dipole-perp":
            vals.append(dipole_perp_kernel(x))
        elif spec.kernel == "quad-perp":
            vals.append(quad_perp_kernel(x))
        else:
            mu_i = spec.moment_direction(1)
            mu_j = spec.moment_direction(1 + d)
            rij = spec.vertex_position(1 + d) - spec.vertex_position(1)
            vals.append(oriented_dipole_kernel(mu_i, mu_j, rij / np.linalg.norm(rij), x))
    return CouplingSet(N, np.array(vals), "physical")


def static_nn_energy(spec: PolygonSpec) -> float:
    """Leading static interaction energy V_N between nearest neighbours (gamma units).

    dipole-perp: 3 gamma / (2 (k r1)^3); quad-perp: 135 gamma_q / (2 (k r1)^5).
    """
    if spec.kernel not in ("dipole-perp", "quad-perp"):
        raise ConfigError(
            f"static nearest-neighbour energy undefined for kernel {spec.kernel!r}; "
            "supply the energy scale directly")
    if spec.wavenumber <= 0:
        raise ValueError("static_nn_energy needs a finite wavenumber; "
                         "in the static limit V_N itself is the unit of energy")
    x1 = spec.wavenumber * spec.separation(1)
    if spec.kernel == "dipole-perp":
        return 1.5 / x1**3
    return QUAD_STATIC_COEFF / x1**5
