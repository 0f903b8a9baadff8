"""Multi-atom Hamiltonians, pulse envelopes, timings, and array geometries.

The coherent drive alternates two stages per period T = t_a + t_b:

- stage a: square pulse of Rabi frequency Omega, duration t_a = pi/(N Omega),
  resonant on |G> <-> |r>,
- stage b: Gaussian "kick" pulse Omega_b(t) = Omega exp[-(t - 2 t_f)^2 /
  (sqrt(2) alpha t_f)^2] of duration t_b = 4 t_f, detuned by Delta.

The kick drive defaults to the Stark-compensated two-sideband form
Omega_b(t) cos(Delta t) |r><G| + h.c.; the single-sideband form
(Omega_b(t)/2) e^{i Delta t} |r><G| + h.c. is selectable for studying the
uncompensated scheme.

Every atom below the Rydberg level carries either two qubit levels
{|0>, |1>} (levels=3 including |r>) or additionally the fast-decaying
intermediate |p> (levels=4).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import erf

from .linalg import kron

logger = logging.getLogger(__name__)

# Local level indices (fixed package-wide).
LVL_0 = 0
LVL_1 = 1
LVL_R = 2
LVL_P = 3

KB = 1.380649e-23  # J/K
AMU = 1.66053906660e-27  # kg
RB87_MASS = 86.909180531 * AMU

MIN_PAIR_DISTANCE_UM = 0.5  # vdW divergence guard


@dataclass(frozen=True)
class Geometry:
    """Atom positions in microns, shape (n, 3)."""

    positions: np.ndarray

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.positions, dtype=float))
        object.__setattr__(self, "positions", pos)
        if pos.shape[1] != 3:
            raise ValueError("positions must be (n, 3)")
        d = self.pair_distances()
        n = pos.shape[0]
        if n > 1 and float(d[np.triu_indices(n, 1)].min()) <= 0.0:
            raise ValueError("coincident atom positions")

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    def pair_distances(self) -> np.ndarray:
        """Symmetric matrix of pair distances R_ij in microns."""
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return np.sqrt((diff**2).sum(axis=-1))


@dataclass(frozen=True)
class PulseParams:
    """Coherent-drive parameters.

    omega: peak Rabi frequency (rad/s); alpha: Gaussian width parameter;
    delta: kick detuning (rad/s); kicks: number N of kick periods per pump.
    """

    omega: float
    alpha: float = 0.6
    delta: float = 0.0
    kicks: int = 100

    @property
    def t_a(self) -> float:
        return math.pi / (self.kicks * self.omega)

    @property
    def t_f(self) -> float:
        return math.sqrt(math.pi / 2.0) / (
            self.alpha * self.omega * erf(math.sqrt(2.0) / self.alpha)
        )

    @property
    def t_b(self) -> float:
        return 4.0 * self.t_f

    @property
    def period(self) -> float:
        return self.t_a + self.t_b

    @property
    def omega_eff(self) -> float:
        """Effective Rabi frequency Omega * t_a / (t_a + t_b)."""
        return self.omega * self.t_a / self.period


def pulse_timings(p: PulseParams) -> tuple[float, float, float, float]:
    """(t_a, t_f, t_b, T) in seconds."""
    return p.t_a, p.t_f, p.t_b, p.period


def envelope(p: PulseParams, t) -> np.ndarray:
    """Gaussian kick envelope Omega_b(t) on the window [0, t_b]."""
    t = np.asarray(t, dtype=float)
    tf = p.t_f
    return p.omega * np.exp(-((t - 2.0 * tf) ** 2) / (math.sqrt(2.0) * p.alpha * tf) ** 2)


@dataclass(frozen=True)
class PhysicalParams:
    """Dispersion coefficient, decay rates, dissipation drive, and thermal
    parameters.  c6 in rad/s * um^6; rates in rad/s; sigma in meters."""

    c6: float = 2 * math.pi * 1542.6e9
    gamma_p: float = 1.0 / 26.2e-9
    gamma_r: float = 2 * math.pi * 0.313e3
    omega_p: float = 10.0 / 26.2e-9  # 10 gamma_p
    temperature: float = 0.0
    sigma: tuple[float, float, float] = (0.0, 0.0, 0.0)
    lambda_red: float = 780e-9
    lambda_blue: float = 480e-9
    mass: float = RB87_MASS

    def __post_init__(self):
        for name in ("gamma_p", "gamma_r", "omega_p"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class DriveSpec:
    """Which ground-state superposition each atom couples to the Rydberg
    level, and which pulses address it.

    couplings[i] is a normalized 2-vector over {|0>, |1>} (the coupled
    state |G_i>), or None for an undriven atom.  pulses[i] in
    {"ab", "a", "b"} selects the stages addressing atom i.
    """

    couplings: tuple
    pulses: tuple = ()

    def __post_init__(self):
        cps = []
        for g in self.couplings:
            if g is None:
                cps.append(None)
                continue
            g = np.asarray(g, dtype=complex)
            nrm = np.linalg.norm(g)
            if not math.isclose(nrm, 1.0, rel_tol=0, abs_tol=1e-10):
                raise ValueError("coupled states |G_i> must be normalized")
            cps.append(g)
        object.__setattr__(self, "couplings", tuple(cps))
        if not self.pulses:
            object.__setattr__(self, "pulses", tuple("ab" for _ in cps))
        elif len(self.pulses) != len(cps):
            raise ValueError("pulses and couplings must have equal length")

    @property
    def n_atoms(self) -> int:
        return len(self.couplings)

    @property
    def active(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.couplings) if g is not None)

    def orthogonal(self, i: int) -> np.ndarray:
        """|G_i^perp>, the qubit state orthogonal to |G_i>."""
        g = self.couplings[i]
        if g is None:
            raise ValueError(f"atom {i} is not driven")
        return np.array([-g[1].conjugate(), g[0].conjugate()], dtype=complex)


@dataclass(frozen=True)
class SystemSpec:
    """Complete physical description of one array: geometry, drive
    parameters, physical constants, per-atom Rydberg detuning shifts
    (e.g. Doppler), and the local level count."""

    geometry: Geometry
    pulse: PulseParams
    physical: PhysicalParams = field(default_factory=PhysicalParams)
    detuning_shifts: np.ndarray | None = None
    levels: int = 3
    nearest_neighbor_only: bool = False
    kick_form: str = "cos"  # "cos" (Stark-compensated) or "exp" (single sideband)

    def __post_init__(self):
        if self.levels not in (3, 4):
            raise ValueError("levels must be 3 or 4")
        if self.kick_form not in ("cos", "exp"):
            raise ValueError("kick_form must be 'cos' or 'exp'")
        if self.detuning_shifts is not None:
            d = np.asarray(self.detuning_shifts, dtype=float)
            if d.shape != (self.geometry.n_atoms,):
                raise ValueError("detuning_shifts must have one entry per atom")
            object.__setattr__(self, "detuning_shifts", d)

    @property
    def n_atoms(self) -> int:
        return self.geometry.n_atoms

    @property
    def dim(self) -> int:
        return self.levels**self.n_atoms

    def with_geometry(self, geometry: Geometry) -> "SystemSpec":
        return replace(self, geometry=geometry)


def facilitation_spacing(c6: float, delta: float) -> float:
    """Spacing R (um) with -C6/R^6 = -Delta, i.e. U_rr = -Delta."""
    if delta <= 0:
        raise ValueError("facilitation requires delta > 0")
    return (c6 / delta) ** (1.0 / 6.0)


def make_geometry(kind: str, n: int, spacing: float) -> Geometry:
    """Standard array layouts with nearest-neighbor spacing `spacing` (um).

    zigzag: triangular strip in the x-y plane where consecutive atoms and
    next-nearest atoms are all at the nearest-neighbor distance, so the
    three atoms of any bulk pump form an equilateral triangle.
    tshape: atom 1 centrally adjacent to atoms 2-4.
    triangular / square: two-row six-site 2D patches.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    r = float(spacing)
    if kind == "zigzag":
        pos = [(k * r / 2.0, (k % 2) * r * math.sqrt(3.0) / 2.0, 0.0) for k in range(n)]
    elif kind == "tshape":
        if n != 4:
            raise ValueError("tshape geometry has exactly 4 atoms")
        pos = [(0.0, 0.0, 0.0), (-r, 0.0, 0.0), (r, 0.0, 0.0), (0.0, -r, 0.0)]
    elif kind == "triangular":
        if n != 6:
            raise ValueError("triangular patch has exactly 6 atoms")
        h = r * math.sqrt(3.0) / 2.0
        pos = [
            (0.0, 0.0, 0.0),
            (r, 0.0, 0.0),
            (2 * r, 0.0, 0.0),
            (r / 2.0, h, 0.0),
            (3 * r / 2.0, h, 0.0),
            (5 * r / 2.0, h, 0.0),
        ]
    elif kind == "square":
        if n != 6:
            raise ValueError("square patch has exactly 6 atoms")
        pos = [
            (0.0, 0.0, 0.0),
            (r, 0.0, 0.0),
            (2 * r, 0.0, 0.0),
            (0.0, r, 0.0),
            (r, r, 0.0),
            (2 * r, r, 0.0),
        ]
    else:
        raise ValueError(f"unsupported geometry kind: {kind!r}")
    return Geometry(np.array(pos[:n] if kind == "zigzag" else pos))


def local_op(n_atoms: int, levels: int, site: int, op: np.ndarray) -> np.ndarray:
    """Embed a single-atom operator at `site` (atom 1 = leftmost factor)."""
    eye = np.eye(levels, dtype=complex)
    return kron(*[op if k == site else eye for k in range(n_atoms)])


def number_r(n_atoms: int, levels: int, site: int) -> np.ndarray:
    op = np.zeros((levels, levels), dtype=complex)
    op[LVL_R, LVL_R] = 1.0
    return local_op(n_atoms, levels, site, op)


def raise_to_r(levels: int, g: np.ndarray) -> np.ndarray:
    """Single-atom operator |r><G| for the coupled state g over {|0>,|1>}."""
    op = np.zeros((levels, levels), dtype=complex)
    op[LVL_R, LVL_0] = np.conj(g[0])
    op[LVL_R, LVL_1] = np.conj(g[1])
    return op


def vdw_hamiltonian(system: SystemSpec) -> np.ndarray:
    """Diagonal van der Waals term sum_{i<j} U_rr^{(ij)} n_r^i n_r^j with
    U_rr = -C6/R_ij^6.  Beyond-nearest-neighbor couplings are included
    unless the system requests nearest-neighbor truncation."""
    n, levels = system.n_atoms, system.levels
    dist = system.geometry.pair_distances()
    h = np.zeros((system.dim, system.dim), dtype=complex)
    if n < 2:
        return h
    nn = dist[dist > 0].min()
    for i in range(n):
        for j in range(i + 1, n):
            if system.nearest_neighbor_only and dist[i, j] > nn * 1.0001:
                continue
            if dist[i, j] < MIN_PAIR_DISTANCE_UM:
                raise ValueError(
                    f"atoms {i},{j} closer than {MIN_PAIR_DISTANCE_UM} um"
                )
            u = -system.physical.c6 / dist[i, j] ** 6
            h += u * (number_r(n, levels, i) @ number_r(n, levels, j))
    return h


def detuning_hamiltonian(system: SystemSpec) -> np.ndarray:
    """Per-atom Rydberg-level shifts (Doppler detunings) on the diagonal."""
    h = np.zeros((system.dim, system.dim), dtype=complex)
    if system.detuning_shifts is None:
        return h
    for i, d in enumerate(system.detuning_shifts):
        h += d * number_r(system.n_atoms, system.levels, i)
    return h


def coupling_operator(system: SystemSpec, drive: DriveSpec, stage: str) -> np.ndarray:
    """Sum over addressed atoms of |r_i><G_i| (no envelope factor)."""
    n, levels = system.n_atoms, system.levels
    if drive.n_atoms != n:
        raise ValueError("drive atom count does not match system")
    op = np.zeros((system.dim, system.dim), dtype=complex)
    for i in drive.active:
        if stage in drive.pulses[i]:
            op += local_op(n, levels, i, raise_to_r(levels, drive.couplings[i]))
    return op


def build_ha(drive: DriveSpec, system: SystemSpec) -> np.ndarray:
    """Resonant-stage Hamiltonian: sum_i (Omega/2)|r_i><G_i| + h.c. plus
    the vdW term, active atoms only."""
    c = coupling_operator(system, drive, "a")
    if not np.any(c):
        logger.warning("build_ha: no atom is addressed by stage a")
    h = (system.pulse.omega / 2.0) * (c + c.conj().T)
    return h + vdw_hamiltonian(system) + detuning_hamiltonian(system)


def kick_coefficient(system: SystemSpec, t: float) -> complex:
    """Scalar multiplying |r><G| in the kick Hamiltonian at time t."""
    amp = float(envelope(system.pulse, t))
    delta = system.pulse.delta
    if system.kick_form == "cos":
        return amp * math.cos(delta * t)
    return 0.5 * amp * np.exp(1j * delta * t)


def build_hb(drive: DriveSpec, system: SystemSpec, t: float) -> np.ndarray:
    """Kick-stage Hamiltonian at time t in [0, t_b]."""
    if t < 0.0 or t > system.pulse.t_b * (1 + 1e-12):
        raise ValueError(f"t={t} outside the kick window [0, {system.pulse.t_b}]")
    c = coupling_operator(system, drive, "b")
    coeff = kick_coefficient(system, t)
    h = coeff * c
    h = h + h.conj().T
    return h + vdw_hamiltonian(system) + detuning_hamiltonian(system)


def kick_terms(drive: DriveSpec, system: SystemSpec):
    """(coupling operator, scalar coefficient function, static part) for
    efficient time stepping of the kick stage: H(t) = f(t) C + f*(t) C^dag
    + H_static."""
    c = coupling_operator(system, drive, "b")
    static = vdw_hamiltonian(system) + detuning_hamiltonian(system)

    def coeff(t: float) -> complex:
        return kick_coefficient(system, t)

    return c, coeff, static
