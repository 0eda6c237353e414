"""
Discrete-time causal linear operators as state-space realizations

    x[k+1] = A x[k] + B u[k]
    y[k]   = C x[k] + D u[k]

Certification always starts from x[0] = 0, so G is the operator u -> y. The
finite-horizon action of G is a block lower-triangular Toeplitz matrix of
Markov parameters; rho-weighting is realized by the scaled system
(A/rho, B/rho, C, D).
"""

from dataclasses import dataclass
from typing import Any, Optional, Tuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike

from .errors import DimensionError, MatrixError, NumericsError, SingularityError
from .signals import UNIT_WEIGHT, Signal, Weight

SCHUR_MARGIN = 1e-12


def _as_matrix(value: Any, rows: Optional[int], cols: Optional[int], name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.size == 0:
        return np.zeros((rows or 0, cols or 0))
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        # a flat list is a row when a single row is expected, else a column
        arr = arr.reshape(1, -1) if rows == 1 else arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be a 2-D matrix, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Realization (A, B, C, D) of a causal LTI operator; n = 0 is a static gain D"""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        D = _as_matrix(self.D, None, None, "D")
        if D.size == 0:
            raise DimensionError("D must be a non-empty p x m matrix")
        p, m = D.shape
        A = _as_matrix(self.A, None, None, "A")
        n = int(A.shape[0])
        B = _as_matrix(self.B, n, m, "B")
        C = _as_matrix(self.C, p, n, "C")

        if A.shape != (n, n):
            raise DimensionError(f"A must be square, got shape {A.shape}")
        if B.shape != (n, m):
            raise DimensionError(f"B must be {n}x{m}, got shape {B.shape}")
        if C.shape != (p, n):
            raise DimensionError(f"C must be {p}x{n}, got shape {C.shape}")
        for name, mat in (("A", A), ("B", B), ("C", C), ("D", D)):
            if not np.all(np.isfinite(mat)):
                raise MatrixError(f"{name} has non-finite entries")
            mat.setflags(write=False)
            object.__setattr__(self, name, mat)

    @classmethod
    def static(cls, D: ArrayLike) -> "StateSpace":
        gain = _as_matrix(D, None, None, "D")
        p, m = gain.shape
        return cls(np.zeros((0, 0)), np.zeros((0, m)), np.zeros((p, 0)), gain)

    @property
    def n_states(self) -> int:
        return int(self.A.shape[0])

    @property
    def n_inputs(self) -> int:
        return int(self.D.shape[1])

    @property
    def n_outputs(self) -> int:
        return int(self.D.shape[0])

    @property
    def is_square(self) -> bool:
        return self.n_inputs == self.n_outputs

    def to_dict(self) -> dict:
        return {
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "C": self.C.tolist(),
            "D": self.D.tolist(),
        }


def simulate_lti(
    G: StateSpace, u: Signal, x0: Optional[ArrayLike] = None
) -> Tuple[Signal, np.ndarray]:
    """
    Run the state recursion for k = 0..T.

    Returns the output signal (same horizon as u) and the states x[0..T+1]
    as a (T+2, n) array.
    """
    if u.dim != G.n_inputs:
        raise DimensionError(f"input dim {u.dim} does not match G inputs {G.n_inputs}")
    n = G.n_states
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).reshape(-1)
    if x.shape != (n,):
        raise DimensionError(f"x0 must have dimension {n}, got {x.shape}")

    T = u.horizon
    ys = np.zeros((T + 1, G.n_outputs))
    xs = np.zeros((T + 2, n))
    xs[0] = x
    for k in range(T + 1):
        ys[k] = G.C @ x + G.D @ u[k]
        x = G.A @ x + G.B @ u[k]
        xs[k + 1] = x
    return Signal(ys), xs


def impulse_response(G: StateSpace, T: int) -> np.ndarray:
    """Markov parameters h[0] = D, h[k] = C A^{k-1} B, as a (T+1, p, m) array"""
    if T < 0:
        raise DimensionError(f"T must be >= 0, got {T}")
    h = np.zeros((T + 1, G.n_outputs, G.n_inputs))
    h[0] = G.D
    v = G.B
    for k in range(1, T + 1):
        h[k] = G.C @ v
        v = G.A @ v
    return h


def rho_scale(G: StateSpace, rho: Weight = UNIT_WEIGHT) -> StateSpace:
    """
    (A/rho, B/rho, C, D): with u_bar[k] = rho^{-k} u[k] and zero initial state,
    (G_rho u_bar)[k] = rho^{-k} (G u)[k].
    """
    weight = rho if isinstance(rho, Weight) else Weight(rho)
    if weight.is_unit:
        return G
    r = weight.rho
    return StateSpace(G.A / r, G.B / r, G.C, G.D)


def toeplitz_matrix(G: StateSpace, T: int, weight: Weight = UNIT_WEIGHT) -> np.ndarray:
    """
    Lifted matrix of the rho-scaled system over k = 0..T.

    Block (i, j) is h_rho[i - j] for i >= j and zero otherwise, so multiplying
    a time-major stacked input reproduces simulate_lti(rho_scale(G), u_bar, 0).
    """
    h = impulse_response(rho_scale(G, weight), T)
    p, m = G.n_outputs, G.n_inputs
    idx = np.arange(T + 1)
    lag = idx[:, None] - idx[None, :]
    padded = np.concatenate([h, np.zeros((1, p, m))], axis=0)
    # negative lags point at the trailing zero block
    blocks = padded[np.where(lag >= 0, lag, T + 1)]
    return blocks.transpose(0, 2, 1, 3).reshape(p * (T + 1), m * (T + 1))


def transfer_eval(G: StateSpace, z: complex) -> np.ndarray:
    """Frequency response C (zI - A)^{-1} B + D at a complex point z"""
    n = G.n_states
    if n == 0:
        return G.D.astype(complex)
    resolvent = z * np.eye(n) - G.A
    try:
        cond = np.linalg.cond(resolvent)
    except np.linalg.LinAlgError as e:
        raise SingularityError(f"zI - A is singular at z={z}: {e}")
    if not np.isfinite(cond) or cond > 1.0 / np.finfo(float).eps:
        raise SingularityError(f"zI - A is singular at z={z} (cond={cond:.3e})")
    X = scipy.linalg.solve(resolvent, G.B.astype(complex))
    return G.C @ X + G.D


def spectral_radius(G: StateSpace) -> float:
    if G.n_states == 0:
        return 0.0
    try:
        eigs = scipy.linalg.eigvals(G.A)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericsError(f"eigenvalue computation failed: {e}")
    return float(np.max(np.abs(eigs)))


def is_schur(G: StateSpace) -> bool:
    """True iff the spectral radius of A is below 1 - 1e-12 (always for n = 0)"""
    return spectral_radius(G) < 1.0 - SCHUR_MARGIN


def frequency_response(G: StateSpace, omegas: ArrayLike) -> np.ndarray:
    """Batched transfer_eval at z = exp(i omega), shape (len(omegas), p, m)"""
    z = np.exp(1j * np.asarray(omegas, dtype=float).reshape(-1))
    n = G.n_states
    if n == 0:
        return np.broadcast_to(G.D.astype(complex), (z.size,) + G.D.shape).copy()
    resolvents = z[:, None, None] * np.eye(n)[None, :, :] - G.A[None, :, :]
    rhs = np.broadcast_to(G.B.astype(complex), (z.size,) + G.B.shape)
    try:
        X = np.linalg.solve(resolvents, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularityError(f"zI - A is singular on the unit-circle grid: {e}")
    return G.C[None, :, :] @ X + G.D[None, :, :]


def peak_gain(G: StateSpace, grid: int = 4096) -> float:
    """Largest singular value of the frequency response over a unit-circle grid"""
    omegas = 2.0 * np.pi * np.arange(grid) / grid
    responses = frequency_response(G, omegas)
    return float(np.max(np.linalg.norm(responses, ord=2, axis=(1, 2))))
