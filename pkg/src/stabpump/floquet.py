"""One-period propagators, Floquet Hamiltonians, quasienergy sweeps, and
Zeno effective Hamiltonians.

The stroboscopic generator is H_F = (i/T) log[U_b(t_b) U_a(t_a)], with the
kick propagator U_b obtained as a time-ordered product of midpoint
piecewise-constant exponentials.  Step doubling continues until the
sup-norm change drops below a set tolerance, which doubles as the
integration certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import matexp, matlog_unitary, quasienergies
from .system import DriveSpec, SystemSpec, build_ha, kick_terms


class PulseConvergenceError(RuntimeError):
    """Step-doubling certificate failed; carries the achieved delta."""

    def __init__(self, delta: float, steps: int, tol: float):
        super().__init__(
            f"time-ordered integration not converged: delta {delta:.3e} > "
            f"tol {tol:.3e} at {steps} steps"
        )
        self.delta = delta
        self.steps = steps
        self.tol = tol


def _ordered_product(
    coupling: np.ndarray, coeff, static: np.ndarray, t_total: float, steps: int
) -> np.ndarray:
    """Product of midpoint exponentials, earliest factor applied first."""
    dt = t_total / steps
    ts = (np.arange(steps) + 0.5) * dt
    coeffs = np.array([coeff(t) for t in ts])
    hs = coeffs[:, None, None] * coupling[None, :, :]
    hs = hs + np.conj(np.transpose(hs, (0, 2, 1)))
    hs += static[None, :, :]
    w, v = np.linalg.eigh(hs)  # batched over steps
    phases = np.exp(-1j * w * dt)
    us = np.einsum("sij,sj,skj->sik", v, phases, v.conj())
    u = np.eye(coupling.shape[0], dtype=complex)
    for k in range(steps):
        u = us[k] @ u
    return u


def propagate_pulse(
    drive: DriveSpec,
    system: SystemSpec,
    initial_steps: int = 512,
    tol: float = 1e-7,
    max_steps: int = 1 << 16,
) -> np.ndarray:
    """Kick-stage propagator U_b over [0, t_b], with step-doubling
    certificate: doubling the accepted step count changes the result by
    less than `tol` in sup norm."""
    if initial_steps < 1:
        raise ValueError("initial_steps >= 1 required")
    coupling, coeff, static = kick_terms(drive, system)
    t_b = system.pulse.t_b
    steps = initial_steps
    u_prev = _ordered_product(coupling, coeff, static, t_b, steps)
    while steps <= max_steps:
        steps *= 2
        u = _ordered_product(coupling, coeff, static, t_b, steps)
        delta = float(np.abs(u - u_prev).max())
        if delta < tol:
            return u
        u_prev = u
    raise PulseConvergenceError(delta, steps, tol)


def one_period_propagator(drive: DriveSpec, system: SystemSpec, **kwargs) -> np.ndarray:
    """U(T) = U_b(t_b) U_a(t_a) for one drive period."""
    ha = build_ha(drive, system)
    ua = matexp(ha, system.pulse.t_a)
    ub = propagate_pulse(drive, system, **kwargs)
    return ub @ ua


def floquet_hamiltonian(drive: DriveSpec, system: SystemSpec, **kwargs) -> np.ndarray:
    """Hermitian H_F with exp(-i H_F T) equal to the one-period propagator."""
    u = one_period_propagator(drive, system, **kwargs)
    return matlog_unitary(u, system.pulse.period)


@dataclass
class QuasienergySpectrum:
    """Branch-tracked quasienergy sweep.

    grid: sweep values (Delta/Omega); energies: (points, dim) folded
    quasienergies per branch; overlaps: (points, n_probes, dim) squared
    projections of each probe state onto each branch; period: drive
    period used for folding.
    """

    grid: np.ndarray
    energies: np.ndarray
    overlaps: np.ndarray
    period: float


def _track_branches(v_prev: np.ndarray, v_now: np.ndarray) -> np.ndarray:
    """Greedy maximal-overlap assignment of current eigenvectors to the
    previous point's branch order; returns the column permutation."""
    overlap = np.abs(v_prev.conj().T @ v_now) ** 2
    dim = overlap.shape[0]
    perm = np.full(dim, -1, dtype=int)
    work = overlap.copy()
    for _ in range(dim):
        i, j = np.unravel_index(np.argmax(work), work.shape)
        perm[i] = j
        work[i, :] = -1.0
        work[:, j] = -1.0
    return perm


def quasienergy_sweep(
    system_builder,
    grid,
    probes,
    **propagate_kwargs,
) -> QuasienergySpectrum:
    """Sweep quasienergies over a sorted grid of Delta/Omega values.

    system_builder(x) must return a (drive, system) pair for the grid
    value x.  Branch continuity across the sweep is enforced by greedy
    maximal-overlap matching between adjacent grid points.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    probes = [np.asarray(p, dtype=complex) for p in probes]
    energies = []
    overlaps = []
    v_prev = None
    period = None
    for x in grid:
        drive, system = system_builder(x)
        period = system.pulse.period
        u = one_period_propagator(drive, system, **propagate_kwargs)
        eps, v = quasienergies(u, period)
        if v_prev is not None:
            perm = _track_branches(v_prev, v)
            eps, v = eps[perm], v[:, perm]
        energies.append(eps)
        overlaps.append([np.abs(p.conj() @ v) ** 2 for p in probes])
        v_prev = v
    return QuasienergySpectrum(
        grid=grid,
        energies=np.array(energies),
        overlaps=np.array(overlaps),
        period=period,
    )


def detect_avoided_crossings(
    spec: QuasienergySpectrum,
    probe_index: int = 0,
    dip_threshold: float = 0.05,
) -> list[tuple[float, float]]:
    """Avoided-crossing locations for one probe state.

    A crossing is a local maximum of the hybridization signal
    h = 1 - max_k |<probe|eps_k>|^2 exceeding `dip_threshold`.  Returns
    (grid value, gap) pairs where the gap is the quasienergy separation
    of the two branches carrying the most probe weight there.
    """
    if len(spec.grid) < 3:
        raise ValueError("need at least 3 grid points")
    pmax = spec.overlaps[:, probe_index, :].max(axis=1)
    h = 1.0 - pmax
    out = []
    for k in range(1, len(spec.grid) - 1):
        if h[k] >= h[k - 1] and h[k] > h[k + 1] and h[k] > dip_threshold:
            idx = np.argsort(spec.overlaps[k, probe_index, :])[-2:]
            gap = float(abs(spec.energies[k, idx[0]] - spec.energies[k, idx[1]]))
            out.append((float(spec.grid[k]), gap))
    return out


def crossing_predictions(t_b: float, delta_min: float, delta_max: float) -> np.ndarray:
    """Detunings in [delta_min, delta_max] solving Delta * t_b = (2m+1) pi."""
    m_lo = int(np.floor((delta_min * t_b / np.pi - 1) / 2))
    m_hi = int(np.ceil((delta_max * t_b / np.pi - 1) / 2))
    vals = np.array([(2 * m + 1) * np.pi / t_b for m in range(m_lo, m_hi + 1)])
    return vals[(vals >= delta_min) & (vals <= delta_max)]


def zeno_hamiltonian(ha: np.ndarray, ub: np.ndarray, phase_tol: float = 1e-6) -> np.ndarray:
    """Zeno effective generator sum_mu P_mu H_a P_mu from the eigenprojectors
    of the kick propagator.

    Eigenphases of U_b within `phase_tol` of each other (on the circle)
    are merged into a single projector.
    """
    eps, v = quasienergies(ub, 1.0)  # eigenphases, sorted
    dim = ha.shape[0]
    # Cluster sorted phases; the fold point -pi/+pi needs a wraparound check.
    groups: list[list[int]] = [[0]]
    for k in range(1, dim):
        if eps[k] - eps[k - 1] <= phase_tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    if len(groups) > 1:
        wrap = (eps[0] + np.pi) + (np.pi - eps[-1])
        if wrap <= phase_tol:
            groups[0].extend(groups.pop())
    hz = np.zeros_like(ha, dtype=complex)
    for idx in groups:
        p = v[:, idx] @ v[:, idx].conj().T
        hz += p @ ha @ p
    return 0.5 * (hz + hz.conj().T)
