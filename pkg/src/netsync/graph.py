"""Weighted network topologies, their Laplacians, and Laplacian spectra.

A topology is a weighted digraph on N >= 2 nodes with nonnegative edge
weights and no self-loops; ``weights[i, j]`` is the weight of the edge
from node j into node i.  Its Laplacian is L = D - A with the in-degree
matrix D on the diagonal, so every row of L sums to zero and the all-ones
vector is always a right eigenvector with eigenvalue zero.

All types here are immutable values; the operations are pure functions
and safe to call from concurrent readers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EigensolverFailure, InvalidInput

__all__ = [
    "Topology",
    "Laplacian",
    "LaplacianSpectrum",
    "build_laplacian",
    "spectrum",
    "is_connected",
    "load_topology",
    "save_topology",
]

# Eigenvector-matrix condition number above which a spectrum is flagged
# as defective (repeated eigenvalues without a full eigenbasis).
_DEFECTIVE_CONDITION = 1e12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Topology:
    """A weighted digraph.  ``weights[i, j]`` weights the edge j -> i."""

    n_nodes: int
    directed: bool
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InvalidInput(f"weights must be square, got shape {w.shape}")
        if self.n_nodes != w.shape[0]:
            raise InvalidInput(
                f"n_nodes={self.n_nodes} disagrees with weights shape {w.shape}"
            )
        if self.n_nodes < 2:
            raise InvalidInput("a topology needs at least 2 nodes")
        if not np.isfinite(w).all():
            raise InvalidInput("weights must be finite")
        if np.any(np.diag(w) != 0.0):
            raise InvalidInput("self-loop weights must be zero")
        if np.any(w < 0.0):
            raise InvalidInput("edge weights must be nonnegative")
        if not self.directed and not np.array_equal(w, w.T):
            raise InvalidInput("undirected topology requires symmetric weights")
        object.__setattr__(self, "weights", _freeze(w))

    @classmethod
    def from_weights(cls, weights, directed: bool = False) -> "Topology":
        w = np.asarray(weights, dtype=float)
        return cls(n_nodes=w.shape[0] if w.ndim == 2 else 0,
                   directed=directed, weights=w)


@dataclass(frozen=True)
class Laplacian:
    """An N x N Laplacian: zero row sums, nonpositive off-diagonal."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidInput(f"Laplacian must be square, got shape {m.shape}")
        n = m.shape[0]
        row_sums = m.sum(axis=1)
        if np.abs(row_sums).max() > 1e-12 * n * max(1.0, np.abs(m).max()):
            raise InvalidInput("Laplacian rows must sum to zero")
        off = m - np.diag(np.diag(m))
        if off.max(initial=0.0) > 1e-12 * max(1.0, np.abs(m).max()):
            raise InvalidInput("Laplacian off-diagonal entries must be <= 0")
        if np.diag(m).min(initial=0.0) < -1e-12 * max(1.0, np.abs(m).max()):
            raise InvalidInput("Laplacian diagonal entries must be >= 0")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def n_nodes(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class LaplacianSpectrum:
    """Sorted eigenvalues/eigenvectors of a Laplacian.

    Eigenvalues are sorted by ascending real part, ties broken by
    ascending imaginary part, so the zero eigenvalue of a connected
    topology is always first and mode indices are reproducible.

    Attributes
    ----------
    eigenvalues : (N,) complex
        Sorted spectrum.
    eigenvectors : (N, N) complex
        Columns aligned with ``eigenvalues``.
    lambda2 : complex
        Second eigenvalue in the sort: the algebraic connectivity for
        an undirected topology, and the smallest-real-part transverse
        mode in general.
    theta_max : float
        Largest absolute argument (radians) over eigenvalues of modulus
        above ``zero_tolerance``.
    zero_tolerance : float
        Modulus threshold under which an eigenvalue is treated as zero.
    defective : bool
        True when the eigenvector matrix is ill-conditioned (repeated
        eigenvalues without a full eigenbasis); design operations reject
        such spectra.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    lambda2: complex
    theta_max: float
    zero_tolerance: float
    defective: bool = field(default=False)

    @property
    def n_nodes(self) -> int:
        return self.eigenvalues.shape[0]


def build_laplacian(topology: Topology) -> Laplacian:
    """Build L = D - A from a topology.

    The in-degree d_ii is the i-th row sum of the weight matrix, so the
    rows of the result sum to zero exactly (up to float addition).
    """
    a = topology.weights
    return Laplacian(matrix=np.diag(a.sum(axis=1)) - a)


def spectrum(lap: Laplacian, zero_tolerance: float | None = None) -> LaplacianSpectrum:
    """Eigendecompose a Laplacian with a deterministic mode order.

    Parameters
    ----------
    lap : Laplacian
    zero_tolerance : float, optional
        Modulus below which an eigenvalue counts as zero.  Defaults to
        ``1e-9 * ||L||_inf`` (with a floor of 1e-12 for the zero matrix).

    Raises
    ------
    EigensolverFailure
        If the dense eigensolver does not converge.
    """
    m = lap.matrix
    try:
        vals, vecs = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(f"eigendecomposition failed: {exc}") from exc

    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    vecs = vecs[:, order]

    if zero_tolerance is None:
        scale = np.abs(m).sum(axis=1).max()
        zero_tolerance = max(1e-9 * scale, 1e-12)

    nonzero = vals[np.abs(vals) > zero_tolerance]
    if nonzero.size:
        theta_max = float(np.abs(np.arctan2(nonzero.imag, nonzero.real)).max())
    else:
        theta_max = 0.0

    cond = np.linalg.cond(vecs)
    return LaplacianSpectrum(
        eigenvalues=_freeze(vals),
        eigenvectors=_freeze(vecs),
        lambda2=complex(vals[1]),
        theta_max=theta_max,
        zero_tolerance=float(zero_tolerance),
        defective=bool(not np.isfinite(cond) or cond > _DEFECTIVE_CONDITION),
    )


def is_connected(spec: LaplacianSpectrum, tol: float) -> bool:
    """True iff exactly one eigenvalue is zero (modulus <= tol) and all
    others have real part > tol."""
    if tol <= 0.0:
        raise InvalidInput("tol must be positive")
    vals = spec.eigenvalues
    n_zero = int(np.count_nonzero(np.abs(vals) <= tol))
    others = vals[np.abs(vals) > tol]
    return n_zero == 1 and bool((others.real > tol).all())


def load_topology(path) -> Topology:
    """Read a topology from a JSON file.

    Expected format::

        {"directed": bool, "weights": [[...], ...]}

    with a row-major N x N array.  Raises :class:`InvalidInput` on
    malformed files or invariant violations.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read topology file {path}: {exc}") from exc
    if not isinstance(payload, dict) or "weights" not in payload:
        raise InvalidInput("topology JSON must be an object with a 'weights' key")
    directed = bool(payload.get("directed", False))
    weights = payload["weights"]
    if not isinstance(weights, Sequence):
        raise InvalidInput("'weights' must be an array of arrays")
    try:
        w = np.array(weights, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"'weights' is not numeric: {exc}") from exc
    if w.ndim != 2:
        raise InvalidInput("'weights' must be a 2-D array")
    return Topology(n_nodes=w.shape[0], directed=directed, weights=w)


def save_topology(topology: Topology, path) -> None:
    """Write a topology to the JSON format accepted by :func:`load_topology`."""
    payload = {
        "directed": topology.directed,
        "weights": topology.weights.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
