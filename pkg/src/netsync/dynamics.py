"""Time-domain simulation and synchronization metrics.

Three simulators share one classical fixed-step 4th-order Runge-Kutta
core (reproducibility beats adaptive stepping for regression runs):

* :func:`simulate_linear`, the Laplacian-coupled linear network
  ``dx/dt = (I (x) A) x + sigma (L (x) H_eff) x``;
* :func:`simulate_agents`, the multi-agent closed loop with distributed
  feedback ``u_i = c K sum_j a_ij (x_i - x_j)``, integrated from the
  pairwise-difference form so its step-for-step agreement with
  :func:`simulate_linear` under ``H_eff = B K, sigma = c`` is a genuine
  cross-check rather than a tautology;
* :func:`simulate_nonlinear`, node dynamics F with diffusive
  state-dependent coupling ``sum_j G_ij M(x_j) x_j`` over a zero-row-sum
  connection matrix G (the chaotic three-oscillator probe lives here).

A non-finite state truncates the trajectory at the last finite step and
flags it; a divergent run still produces a synchronization report.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .coupling import stiffest_mode_modulus
from .duality import AgentModel
from .errors import DimensionMismatch, PreconditionViolation
from .graph import Laplacian, spectrum

__all__ = [
    "LinearNetworkSystem",
    "Trajectory",
    "SyncReport",
    "NonlinearCouplingSpec",
    "NonlinearNetworkSystem",
    "simulate_linear",
    "simulate_agents",
    "rossler_vector_field",
    "rossler_jacobian_parts",
    "build_three_oscillator",
    "design_nonlinear_coupling",
    "simulate_nonlinear",
    "sync_error",
    "component_settle_times",
    "rms_amplitude",
    "write_trajectory_csv",
    "sync_report_dict",
]

# |stiffest eigenvalue| * dt beyond which explicit RK4 is warned about.
_STABILITY_LIMIT = 2.5


@dataclass(frozen=True)
class LinearNetworkSystem:
    """Linear network: node dynamic A, coupling H_eff, strength sigma,
    and the topology Laplacian."""

    A: np.ndarray
    H_eff: np.ndarray
    sigma: float
    laplacian: Laplacian

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        H = np.atleast_2d(np.asarray(self.H_eff, dtype=float))
        if A.shape != H.shape or A.shape[0] != A.shape[1]:
            raise DimensionMismatch(
                f"A {A.shape} and H_eff {H.shape} must be square and equal"
            )
        if self.sigma <= 0.0:
            raise PreconditionViolation("sigma must be positive")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "H_eff", H)

    @property
    def n_nodes(self) -> int:
        return self.laplacian.n_nodes

    @property
    def node_dim(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class Trajectory:
    """Simulated node states on a uniform time grid.

    states[t, i, :] is node i at times[t].  ``diverged`` marks a run
    truncated at the last finite step.
    """

    times: np.ndarray
    states: np.ndarray
    diverged: bool = False

    def __post_init__(self):
        if self.times.shape[0] != self.states.shape[0]:
            raise DimensionMismatch("times and states lengths differ")

    @property
    def n_nodes(self) -> int:
        return self.states.shape[1]

    @property
    def node_dim(self) -> int:
        return self.states.shape[2]


@dataclass(frozen=True)
class SyncReport:
    """Synchronization-error summary of a trajectory.

    error_series[t] = max_{i,j} ||x_i(t) - x_j(t)||_inf; sync_time is the
    first grid time after which the error stays below tol for the rest of
    the horizon (None when it never does), and converged mirrors that.
    """

    error_series: np.ndarray
    sync_time: Optional[float]
    converged: bool
    tol: float

    @property
    def final_error(self) -> float:
        return float(self.error_series[-1])


def _time_grid(t_end: float, dt: float) -> np.ndarray:
    if dt <= 0.0 or t_end <= 0.0:
        raise PreconditionViolation("t_end and dt must be positive")
    if dt > t_end:
        raise PreconditionViolation("dt must not exceed t_end")
    steps = int(round(t_end / dt))
    return dt * np.arange(steps + 1)


def _integrate_rk4(rhs: Callable[[np.ndarray], np.ndarray],
                   x0: np.ndarray, times: np.ndarray) -> Trajectory:
    """Classical RK4 over a uniform grid with divergence truncation.

    Overflow is not an error here: a non-finite state ends the run at
    the last finite step with the diverged flag set.
    """
    dt = float(times[1] - times[0])
    out = np.empty((times.shape[0],) + x0.shape)
    out[0] = x0
    X = x0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(times.shape[0] - 1):
            k1 = rhs(X)
            k2 = rhs(X + 0.5 * dt * k1)
            k3 = rhs(X + 0.5 * dt * k2)
            k4 = rhs(X + dt * k3)
            X = X + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.isfinite(X).all():
                return Trajectory(times=times[:k + 1].copy(),
                                  states=out[:k + 1].copy(), diverged=True)
            out[k + 1] = X
    return Trajectory(times=times, states=out)


def _check_x0(x0, n_nodes: int, node_dim: int) -> np.ndarray:
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (n_nodes, node_dim):
        raise DimensionMismatch(
            f"x0 must be ({n_nodes}, {node_dim}), got {x0.shape}"
        )
    return x0


def simulate_linear(sys: LinearNetworkSystem, x0, t_end: float,
                    dt: float) -> Trajectory:
    """Integrate the Laplacian-coupled linear network.

    Warns when the stiffest mode modulus times dt exceeds 2.5 (the edge
    of RK4's stability region on the negative real axis); the run still
    proceeds and divergence, if any, is flagged on the trajectory.
    """
    x0 = _check_x0(x0, sys.n_nodes, sys.node_dim)
    times = _time_grid(t_end, dt)
    worst = stiffest_mode_modulus(sys.A, sys.H_eff, sys.sigma,
                                  spectrum(sys.laplacian))
    if worst * dt >= _STABILITY_LIMIT:
        warnings.warn(
            f"stiffest mode modulus {worst:.3g} * dt {dt:.3g} = "
            f"{worst * dt:.3g} >= {_STABILITY_LIMIT}; expect instability",
            stacklevel=2,
        )
    A_T = sys.A.T.copy()
    H_T = sys.H_eff.T.copy()
    L = sys.laplacian.matrix
    sigma = sys.sigma

    def rhs(X):
        return X @ A_T + sigma * (L @ X) @ H_T

    return _integrate_rk4(rhs, x0, times)


def simulate_agents(model: AgentModel, laplacian: Laplacian, x0,
                    t_end: float, dt: float) -> Trajectory:
    """Integrate the multi-agent closed loop.

    Each agent runs dx_i/dt = A x_i + c B K sum_j a_ij (x_i - x_j) with
    the adjacency weights a_ij recovered from the Laplacian off-diagonal.
    The trajectory coincides with :func:`simulate_linear` under
    ``H_eff = B K, sigma = c``; asserted in the test suite, not assumed
    here: the right-hand side below is evaluated from degrees and
    adjacency, not from L itself.
    """
    if model.K is None:
        raise PreconditionViolation("agent model has no feedback gain K")
    x0 = _check_x0(x0, laplacian.n_nodes, model.n)
    times = _time_grid(t_end, dt)
    L = laplacian.matrix
    adjacency = -(L - np.diag(np.diag(L)))
    degrees = adjacency.sum(axis=1)
    BK_T = (model.B @ model.K).T.copy()
    A_T = model.A.T.copy()
    c = model.c

    worst = stiffest_mode_modulus(model.A, model.B @ model.K, c,
                                  spectrum(laplacian))
    if worst * dt >= _STABILITY_LIMIT:
        warnings.warn(
            f"stiffest mode modulus {worst:.3g} * dt {dt:.3g} = "
            f"{worst * dt:.3g} >= {_STABILITY_LIMIT}; expect instability",
            stacklevel=2,
        )

    def rhs(X):
        consensus_error = degrees[:, None] * X - adjacency @ X
        return X @ A_T + c * consensus_error @ BK_T

    return _integrate_rk4(rhs, x0, times)


# ---------------------------------------------------------------------------
# chaotic three-oscillator probe
# ---------------------------------------------------------------------------

def rossler_vector_field(state, a: float = 0.2, b: float = 0.2,
                         c: float = 7.0) -> np.ndarray:
    """Rossler flow (dx, dy, dz) = (-(y+z), x + a*y, b + z*(x-c)).

    Broadcasts over leading axes: an (N, 3) stack of node states maps to
    (N, 3) derivatives.
    """
    state = np.asarray(state, dtype=float)
    x, y, z = state[..., 0], state[..., 1], state[..., 2]
    return np.stack([-(y + z), x + a * y, b + z * (x - c)], axis=-1)


def rossler_jacobian_parts(a: float = 0.2, b: float = 0.2, c: float = 7.0):
    """Constant/state-dependent split of the Rossler Jacobian.

    Returns ``(Phi1, Phi2)`` with Phi1 the constant part and Phi2 a
    callable mapping a state (broadcastable over leading axes) to the
    state-dependent part, so that ``Phi1 + Phi2(s)`` is the Jacobian of
    :func:`rossler_vector_field` at s.
    """
    Phi1 = np.array([
        [0.0, -1.0, -1.0],
        [1.0, a, 0.0],
        [0.0, 0.0, -c],
    ])

    def Phi2(state) -> np.ndarray:
        state = np.asarray(state, dtype=float)
        out = np.zeros(state.shape[:-1] + (3, 3))
        out[..., 2, 0] = state[..., 2]
        out[..., 2, 2] = state[..., 0]
        return out

    return Phi1, Phi2


@dataclass(frozen=True)
class NonlinearCouplingSpec:
    """Ingredients for a state-dependent coupling design.

    The node Jacobian is split as DF(s) = Phi1 + Phi2(s) with Phi1
    constant; the designed coupling is M(x) = Psi1 + Psi2(x) with

        Psi2(x) = -(1/kappa) * Phi2(diag(rho) @ x),

    so that in every transverse mode the state-dependent parts cancel in
    real part when kappa matches the smallest real part of the nonzero
    connection-matrix eigenvalues.  rho rescales the state fed to Phi2
    (all ones by default).
    """

    Phi1: np.ndarray
    Phi2: Callable[[np.ndarray], np.ndarray]
    Psi1: np.ndarray
    kappa: float
    rho: np.ndarray | None = None

    def __post_init__(self):
        if self.kappa == 0.0:
            raise PreconditionViolation("kappa must be nonzero")
        Phi1 = np.atleast_2d(np.asarray(self.Phi1, dtype=float))
        Psi1 = np.atleast_2d(np.asarray(self.Psi1, dtype=float))
        if Phi1.shape != Psi1.shape or Phi1.shape[0] != Phi1.shape[1]:
            raise DimensionMismatch("Phi1 and Psi1 must be square and equal")
        object.__setattr__(self, "Phi1", Phi1)
        object.__setattr__(self, "Psi1", Psi1)
        rho = (np.ones(Phi1.shape[0]) if self.rho is None
               else np.asarray(self.rho, dtype=float).reshape(-1))
        if rho.shape[0] != Phi1.shape[0]:
            raise DimensionMismatch("rho must have one entry per state")
        object.__setattr__(self, "rho", rho)


def design_nonlinear_coupling(spec: NonlinearCouplingSpec):
    """Build the state-dependent coupling matrix function
    M(x) = Psi1 - (1/kappa) * Phi2(diag(rho) * x).

    The returned callable broadcasts over leading axes whenever the
    spec's Phi2 does.
    """
    Psi1, Phi2, kappa, rho = spec.Psi1, spec.Phi2, spec.kappa, spec.rho

    def coupling_matrix(state) -> np.ndarray:
        state = np.asarray(state, dtype=float)
        return Psi1 - (1.0 / kappa) * Phi2(rho * state)

    return coupling_matrix


@dataclass(frozen=True)
class NonlinearNetworkSystem:
    """Diffusively coupled identical nonlinear nodes.

    node_dynamics maps a state to its uncoupled derivative;
    coupling_matrix_fn maps the transmitting node's state x_j to the
    matrix M(x_j) applied to that same state, so node i receives
    ``sum_j G_ij M(x_j) x_j``.  G must have zero row sums (the coupling
    vanishes on the synchronization manifold); unlike a Laplacian its
    off-diagonal entries may take either sign.
    """

    node_dynamics: Callable[[np.ndarray], np.ndarray]
    coupling_matrix_fn: Callable[[np.ndarray], np.ndarray]
    connection: np.ndarray
    n_nodes: int

    def __post_init__(self):
        G = np.atleast_2d(np.asarray(self.connection, dtype=float))
        if G.shape != (self.n_nodes, self.n_nodes):
            raise DimensionMismatch(
                f"connection must be {self.n_nodes} x {self.n_nodes}"
            )
        if np.abs(G.sum(axis=1)).max() > 1e-9 * max(1.0, np.abs(G).max()):
            raise PreconditionViolation("connection rows must sum to zero")
        object.__setattr__(self, "connection", G)


def build_three_oscillator(eps: float, delta: float, coupling_matrix_fn,
                           a: float = 0.2, b: float = 0.2,
                           c: float = 7.0) -> NonlinearNetworkSystem:
    """Three Rossler oscillators on a cyclic connection matrix.

    The connection is the circulant with diagonal -2*eps/3, forward
    weight eps/3 + delta/sqrt(3) and backward weight eps/3 - delta/sqrt(3);
    its eigenvalues are {0, -eps + i*delta, -eps - i*delta}, so eps sets
    the transverse damping and delta the rotation of the two transverse
    modes.
    """
    fwd = eps / 3.0 + delta / np.sqrt(3.0)
    bwd = eps / 3.0 - delta / np.sqrt(3.0)
    diag = -2.0 * eps / 3.0
    G = np.array([
        [diag, fwd, bwd],
        [bwd, diag, fwd],
        [fwd, bwd, diag],
    ])
    return NonlinearNetworkSystem(
        node_dynamics=lambda s: rossler_vector_field(s, a=a, b=b, c=c),
        coupling_matrix_fn=coupling_matrix_fn,
        connection=G,
        n_nodes=3,
    )


def _eval_per_row(fn, X: np.ndarray, out_shape: tuple):
    """Apply a single-state callable to every row of X."""
    out = np.empty(out_shape)
    for i in range(X.shape[0]):
        out[i] = fn(X[i])
    return out


def _make_nonlinear_rhs(sys: NonlinearNetworkSystem, x0: np.ndarray):
    """RHS closure; prefers batched callable evaluation when safe.

    Batched use of node_dynamics / coupling_matrix_fn is enabled only
    after checking, on the initial state, that the batched result matches
    the per-node loop; guards against callables that silently broadcast
    wrong.
    """
    N, n = x0.shape
    G = sys.connection
    F, M = sys.node_dynamics, sys.coupling_matrix_fn

    def f_loop(X):
        return _eval_per_row(F, X, (N, n))

    def m_loop(X):
        return _eval_per_row(M, X, (N, n, n))

    def probe(batched, loop, shape):
        try:
            got = np.asarray(batched(x0), dtype=float)
        except Exception:
            return False
        return got.shape == shape and np.allclose(got, loop(x0), atol=1e-12)

    f_eval = F if probe(F, f_loop, (N, n)) else f_loop
    m_eval = M if probe(M, m_loop, (N, n, n)) else m_loop

    def rhs(X):
        transmitted = np.einsum("jab,jb->ja", m_eval(X), X)
        return f_eval(X) + G @ transmitted

    return rhs


def simulate_nonlinear(sys: NonlinearNetworkSystem, x0, t_end: float,
                       dt: float = 1e-3) -> Trajectory:
    """Integrate dx_i/dt = F(x_i) + sum_j G_ij M(x_j) x_j with fixed-step
    RK4.  Deterministic for fixed inputs; divergence truncates and flags."""
    x0 = np.asarray(x0, dtype=float)
    if x0.ndim != 2 or x0.shape[0] != sys.n_nodes:
        raise DimensionMismatch(
            f"x0 must be ({sys.n_nodes}, node_dim), got {x0.shape}"
        )
    times = _time_grid(t_end, dt)
    rhs = _make_nonlinear_rhs(sys, x0)
    return _integrate_rk4(rhs, x0, times)


# ---------------------------------------------------------------------------
# synchronization metrics
# ---------------------------------------------------------------------------

def _settle_time(errors: np.ndarray, times: np.ndarray,
                 tol: float) -> Optional[float]:
    """First grid time after which errors stay below tol (None if never)."""
    above = np.nonzero(errors >= tol)[0]
    if above.size == 0:
        return float(times[0])
    if above[-1] == errors.shape[0] - 1:
        return None
    return float(times[above[-1] + 1])


def sync_error(traj: Trajectory, tol: float) -> SyncReport:
    """Pairwise synchronization error and convergence verdict.

    sync_time is the first grid time t such that e(s) < tol for every
    s >= t within the horizon; a trajectory below tol everywhere gets
    sync_time = times[0].
    """
    if traj.states.shape[0] == 0:
        raise PreconditionViolation("trajectory is empty")
    if tol <= 0.0:
        raise PreconditionViolation("tol must be positive")
    spread = traj.states.max(axis=1) - traj.states.min(axis=1)
    errors = spread.max(axis=1)
    sync_time = _settle_time(errors, traj.times, tol)
    return SyncReport(
        error_series=errors,
        sync_time=sync_time,
        converged=sync_time is not None,
        tol=float(tol),
    )


def component_settle_times(traj: Trajectory, tol: float) -> tuple:
    """Per-state-component settle times of the cross-node spread.

    Entry c is the first grid time after which
    ``max_i x_i[c] - min_i x_i[c]`` stays below tol (None if it never
    does); resolves which components of a design synchronize sooner.
    """
    if tol <= 0.0:
        raise PreconditionViolation("tol must be positive")
    spread = traj.states.max(axis=1) - traj.states.min(axis=1)
    return tuple(
        _settle_time(spread[:, c], traj.times, tol)
        for c in range(traj.node_dim)
    )


def rms_amplitude(traj: Trajectory) -> float:
    """Root-mean-square state amplitude over the whole trajectory; the
    reference scale for relative synchronization tolerances of chaotic
    systems."""
    return float(np.sqrt(np.mean(traj.states ** 2)))


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Write a trajectory as CSV rows ``t,node,x1..xn`` (one row per
    time sample per node)."""
    n = traj.node_dim
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "node"] + [f"x{i + 1}" for i in range(n)])
        for t_idx in range(traj.times.shape[0]):
            t = repr(float(traj.times[t_idx]))
            for node in range(traj.n_nodes):
                writer.writerow(
                    [t, node + 1]
                    + [repr(float(v)) for v in traj.states[t_idx, node]]
                )


def sync_report_dict(report: SyncReport) -> dict:
    """JSON-ready synchronization report:
    {"sync_time": t|null, "converged": bool, "tol": v, "final_error": e}."""
    return {
        "sync_time": report.sync_time,
        "converged": report.converged,
        "tol": report.tol,
        "final_error": report.final_error,
    }
