"""The homogeneous Kuramoto model on a graph: energy landscape and flow.

Phases live in (-pi, pi] with pi kept at the branch point. The energy is
E(theta) = (1/2) * sum_{x,y} A[x,y] (1 - cos(theta_x - theta_y)), evaluated
per edge as 2 sin^2(delta/2) because the textbook form loses the monotone
descent property to cancellation once the flow is nearly converged.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, InputError

__all__ = [
    "wrap_phases",
    "random_phases",
    "energy",
    "gradient",
    "hessian",
    "daido",
    "rotate_to_real_rho1",
    "kernel_K",
    "kernel_stability_violations",
    "s_func",
    "arc_set",
    "half_circle_check",
    "flow",
    "classify_equilibrium",
    "FlowResult",
    "EquilibriumReport",
]

GRAD_TOL = 1e-10
STEP_CAP = 10 ** 6


def wrap_phases(theta):
    """Normalize phases into (-pi, pi], choosing pi at the branch point."""
    w = np.mod(np.asarray(theta, dtype=np.float64), 2.0 * np.pi)
    return np.where(w > np.pi, w - 2.0 * np.pi, w)


def random_phases(n, seed):
    """Uniform i.i.d. phases, one per vertex."""
    rng = np.random.default_rng(seed)
    return wrap_phases(rng.uniform(-np.pi, np.pi, size=n))


def _check_state(g, theta):
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (g.n,):
        raise InputError(f"state has shape {theta.shape}, graph has n={g.n}")
    return theta


def energy(g, theta):
    theta = _check_state(g, theta)
    eu, ev = g.edge_arrays()
    if len(eu) == 0:
        return 0.0
    half = 0.5 * (theta[eu] - theta[ev])
    return float(2.0 * np.sum(np.sin(half) ** 2))


def gradient(g, theta):
    """Component x: sum_z A[x,z] sin(theta_x - theta_z)."""
    theta = _check_state(g, theta)
    z = np.exp(1j * theta)
    az = g.adjacency() @ z
    return np.imag(z * np.conj(az))


def hessian(g, theta):
    """Dense Hessian; rows sum to zero (global rotation symmetry)."""
    theta = _check_state(g, theta)
    n = g.n
    H = np.zeros((n, n))
    eu, ev = g.edge_arrays()
    c = np.cos(theta[eu] - theta[ev])
    np.add.at(H, (eu, ev), -c)
    np.add.at(H, (ev, eu), -c)
    np.add.at(H, (eu, eu), c)
    np.add.at(H, (ev, ev), c)
    return H


def daido(theta, k=1):
    """Order parameter rho_k = (1/n) sum_x exp(i k theta_x)."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InputError(f"order parameter index must be a positive integer, got {k!r}")
    theta = np.asarray(theta, dtype=np.float64)
    return complex(np.mean(np.exp(1j * k * theta)))


def rotate_to_real_rho1(theta):
    """Shift by a global constant so rho_1 is real and nonnegative.

    A state with rho_1 = 0 is returned unchanged (no preferred frame).
    """
    theta = np.asarray(theta, dtype=np.float64)
    r = np.mean(np.exp(1j * theta))
    if abs(r) < 1e-15:
        return theta.copy()
    return wrap_phases(theta - np.angle(r))


def kernel_K(a, b):
    """sin(|a| - min(|b|, pi/2)); equals -cos(a) once |b| >= pi/2."""
    return float(np.sin(abs(a) - min(abs(b), np.pi / 2)))


def kernel_stability_violations(g, theta, tol_per_degree=1e-9):
    """Vertices y where sum_x A[x,y] K(theta_x, theta_y) < -tol*deg(y).

    The state must be pre-rotated (rho_1 real, nonnegative); every true
    stable state then yields an empty list. Returns (vertex, deficit) pairs.
    """
    theta = _check_state(g, theta)
    A = g.adjacency()
    # K(a, b) expands to sin|a| cos(m_b) - cos|a| sin(m_b), m_b = min(|b|, pi/2),
    # so both matvecs are shared across all y
    m = np.minimum(np.abs(theta), np.pi / 2)
    s_abs = A @ np.sin(np.abs(theta))
    c_abs = A @ np.cos(np.abs(theta))
    sums = np.cos(m) * s_abs - np.sin(m) * c_abs
    degs = g.degrees
    out = []
    for y in np.nonzero(sums < -tol_per_degree * np.maximum(degs, 1))[0]:
        out.append((int(y), float(sums[y])))
    return out


def s_func(a):
    """sin^2(a) on |a| <= pi/2, then the plateau value 1."""
    a = np.abs(np.asarray(a, dtype=np.float64))
    out = np.where(a <= np.pi / 2, np.sin(a) ** 2, 1.0)
    return float(out) if out.ndim == 0 else out


def arc_set(theta, psi):
    """Vertices with cos(theta_x) <= cos(psi), i.e. |theta_x| >= psi."""
    if not (0.0 <= psi <= np.pi):
        raise InputError(f"arc angle must lie in [0, pi], got {psi}")
    theta = np.asarray(theta, dtype=np.float64)
    return np.nonzero(np.abs(theta) >= psi)[0]


def half_circle_check(g, theta):
    """True iff the state lies in the open half circle |theta| < pi/2.

    Preconditions (caller's contract): pre-rotated, classified stable, and
    g connected. When true the half-circle lemma forces the synchronized
    state, so max |theta| < 1e-6 is asserted; a violation means the state
    was misclassified or the flow is buggy and raises ConsistencyError.
    """
    theta = _check_state(g, theta)
    if len(arc_set(theta, np.pi / 2)) > 0:
        return False
    spread = float(np.max(np.abs(theta))) if g.n else 0.0
    if spread >= 1e-6:
        raise ConsistencyError(
            f"stable state confined to a half circle has phase spread {spread:.3e}"
        )
    return True


@dataclass
class FlowResult:
    final: np.ndarray
    steps: int
    terminated: str  # converged | step_cap | stalled
    times: np.ndarray
    energies: np.ndarray
    grad_norms: np.ndarray
    rho1s: np.ndarray

    @property
    def energy_trace(self):
        return list(zip(self.times.tolist(), self.energies.tolist()))

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time", "energy", "grad_norm", "rho1"])
            for row in zip(self.times, self.energies, self.grad_norms, self.rho1s):
                w.writerow([repr(float(v)) for v in row])


def flow(g, theta0, grad_tol=GRAD_TOL, step_cap=STEP_CAP, dt_init=None):
    """Integrate d(theta)/dt = -grad E with adaptive explicit Euler.

    A step is accepted only if the energy does not increase; the step size
    halves on rejection, grows by 1.2 on acceptance, and never exceeds
    1/(2*d_max), the stability ceiling of the explicit scheme. Terminates
    converged when the sup norm of the gradient drops below grad_tol,
    step_cap after that many accepted steps, or stalled if the step
    underflows (no representable phase change can lower the energy; this
    is the generic exit near minima with positive energy, where the
    descent per step falls below the energy ulp before grad_tol is met).
    """
    if not grad_tol > 0:
        raise InputError(f"grad_tol must be positive, got {grad_tol}")
    theta = wrap_phases(_check_state(g, theta0))
    d_max = int(g.degrees.max()) if g.n else 0
    if d_max == 0:
        grad = gradient(g, theta)
        gn = float(np.max(np.abs(grad))) if g.n else 0.0
        return FlowResult(
            final=theta, steps=0, terminated="converged",
            times=np.array([0.0]), energies=np.array([energy(g, theta)]),
            grad_norms=np.array([gn]), rho1s=np.array([abs(daido(theta))]),
        )
    dt_cap = 1.0 / (2.0 * d_max)
    dt = dt_init if dt_init is not None else 1.0 / (4.0 * d_max)
    dt = min(dt, dt_cap)
    t = 0.0
    ene = energy(g, theta)
    grad = gradient(g, theta)
    gn = float(np.max(np.abs(grad)))
    times, energies, grad_norms, rho1s = [t], [ene], [gn], [abs(daido(theta))]
    steps = 0
    terminated = "converged"
    while gn >= grad_tol:
        if steps >= step_cap:
            terminated = "step_cap"
            break
        trial = wrap_phases(theta - dt * grad)
        ene_trial = energy(g, trial)
        if ene_trial <= ene:
            if np.array_equal(trial, theta):
                # dt * grad underflowed every phase ulp: float64 cannot
                # resolve further descent (happens near minima with E > 0)
                terminated = "stalled"
                break
            theta = trial
            ene = ene_trial
            t += dt
            steps += 1
            grad = gradient(g, theta)
            gn = float(np.max(np.abs(grad)))
            times.append(t)
            energies.append(ene)
            grad_norms.append(gn)
            rho1s.append(abs(daido(theta)))
            dt = min(dt * 1.2, dt_cap)
        else:
            dt *= 0.5
            if dt < 1e-18:
                terminated = "stalled"
                break
    return FlowResult(
        final=theta, steps=steps, terminated=terminated,
        times=np.asarray(times), energies=np.asarray(energies),
        grad_norms=np.asarray(grad_norms), rho1s=np.asarray(rho1s),
    )


@dataclass(frozen=True)
class EquilibriumReport:
    classification: str  # not_equilibrium | stable | strict_saddle | degenerate
    gradient_norm: float
    hessian_min_eig_orth: float
    rho1: float
    rho2: complex


def _min_eig_orthogonal(H):
    # restrict to the complement of the all-ones direction; the rotation
    # mode is a symmetry, not an instability
    n = H.shape[0]
    if n == 1:
        return 0.0
    basis = np.column_stack([np.ones(n), np.eye(n)[:, : n - 1]])
    q, _ = np.linalg.qr(basis)
    B = q[:, 1:]
    return float(np.linalg.eigvalsh(B.T @ H @ B)[0])


def classify_equilibrium(g, theta, grad_tol=GRAD_TOL, eig_tol=None):
    """Classify a state from its gradient norm and restricted Hessian.

    not_equilibrium if the sup-norm gradient is at least grad_tol. Otherwise
    stable, strict_saddle or degenerate according to the sign of the minimum
    Hessian eigenvalue on the subspace orthogonal to the all-ones vector,
    against the threshold eig_tol (default 1e-8 * d_max). Degenerate is
    surfaced as its own class; third-order saddles exist and coercing them
    either way would be wrong.
    """
    if not grad_tol > 0:
        raise InputError(f"grad_tol must be positive, got {grad_tol}")
    theta = _check_state(g, theta)
    if eig_tol is None:
        eig_tol = 1e-8 * max(int(g.degrees.max()) if g.n else 1, 1)
    if not eig_tol > 0:
        raise InputError(f"eig_tol must be positive, got {eig_tol}")
    gn = float(np.max(np.abs(gradient(g, theta)))) if g.n else 0.0
    min_eig = _min_eig_orthogonal(hessian(g, theta))
    if gn >= grad_tol:
        cls = "not_equilibrium"
    elif min_eig > eig_tol:
        cls = "stable"
    elif min_eig < -eig_tol:
        cls = "strict_saddle"
    else:
        cls = "degenerate"
    return EquilibriumReport(
        classification=cls, gradient_norm=gn, hessian_min_eig_orth=min_eig,
        rho1=abs(daido(theta)), rho2=daido(theta, 2),
    )
