"""
S-lemma engine: minimize g(tau) = lambda_max(Q0 + tau Q1) over tau in [0, tau_max]

g is convex in tau (a maximum of affine functions), so a coarse log grid
followed by a bounded scalar refinement between the neighbours of the best
grid point finds the global minimizer.

    lambda* <= tol  ->  x'Q0x + tau* x'Q1x <= 0 for all x, so no x has
                        x'Q1x >= 0 and x'Q0x > 0
    lambda* >  tol  ->  a separating x exists; it is found in the span of the
                        top eigenvectors on either side of tau*
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import brentq, minimize_scalar

from ..config import settings
from ..utils.logger import get_logger
from .errors import DimensionError, MatrixError, NumericsError

logger = get_logger(__name__)

GRID_DECADES = (-8, 8)
GRID_POINTS_PER_DECADE = 10
ANGLE_SAMPLES = 721


@dataclass(frozen=True)
class SLemmaResult:
    tau_star: float
    lambda_star: float
    x_star: np.ndarray
    tol: float
    holds: bool
    # True when x_star satisfies x'Q1x >= 0 and x'Q0x > 0
    separated: bool = False
    trace: List[Tuple[float, float]] = field(default_factory=list)


def _symmetric(Q: np.ndarray, name: str) -> np.ndarray:
    mat = np.asarray(Q, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise MatrixError(f"{name} has non-finite entries")
    if not np.allclose(mat, mat.T, rtol=1e-12, atol=1e-12 * (1.0 + np.abs(mat).max())):
        raise MatrixError(f"{name} is not symmetric")
    return 0.5 * (mat + mat.T)


def _top_eig(Q: np.ndarray) -> Tuple[float, np.ndarray]:
    n = Q.shape[0]
    try:
        w, v = scipy.linalg.eigh(Q, subset_by_index=[n - 1, n - 1])
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericsError(f"symmetric eigenvalue computation failed: {e}")
    return float(w[0]), v[:, 0]


def _lambda_max(Q: np.ndarray) -> float:
    return _top_eig(Q)[0]


def _spectral_norm(Q: np.ndarray) -> float:
    if Q.size == 0:
        return 0.0
    w = scipy.linalg.eigvalsh(Q)
    return float(max(abs(w[0]), abs(w[-1])))


def _tau_grid(tau_max: float) -> np.ndarray:
    lo, hi = GRID_DECADES
    taus = np.logspace(lo, hi, (hi - lo) * GRID_POINTS_PER_DECADE + 1)
    taus = taus[taus < tau_max]
    return np.concatenate([[0.0], taus, [tau_max]])


def _refine(Q0: np.ndarray, Q1: np.ndarray, lo: float, hi: float) -> Tuple[float, float]:
    if hi <= lo:
        return lo, _lambda_max(Q0 + lo * Q1)
    res = minimize_scalar(
        lambda t: _lambda_max(Q0 + t * Q1),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12 * max(hi, 1.0)},
    )
    return float(res.x), float(res.fun)


def _candidate_vectors(
    Q0: np.ndarray, Q1: np.ndarray, tau: float, lam: float, tol: float, tau_max: float
) -> List[np.ndarray]:
    """Top eigenvectors at tau* and at nearby tau on both sides"""
    w, v = scipy.linalg.eigh(Q0 + tau * Q1)
    gap = max(1e-6 * (1.0 + abs(lam)), 10.0 * tol)
    vectors = [v[:, i] for i in range(len(w)) if w[i] >= w[-1] - gap]
    for rel in (1e-2, 1e-4, 1e-6, 1e-8):
        step = rel * max(tau, 1.0)
        for t in (tau - step, tau + step):
            if 0.0 <= t <= tau_max:
                vectors.append(_top_eig(Q0 + t * Q1)[1])
    return vectors


def _best_on_circle(
    Q0: np.ndarray, Q1: np.ndarray, a: np.ndarray, b: np.ndarray
) -> Optional[Tuple[float, np.ndarray]]:
    """Maximize x'Q0x over x = cos(t) a + sin(t) b subject to x'Q1x >= 0"""

    def forms(t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        c, s = np.cos(t), np.sin(t)
        q0 = c * c * (a @ Q0 @ a) + 2 * c * s * (a @ Q0 @ b) + s * s * (b @ Q0 @ b)
        q1 = c * c * (a @ Q1 @ a) + 2 * c * s * (a @ Q1 @ b) + s * s * (b @ Q1 @ b)
        return q0, q1

    thetas = np.linspace(0.0, np.pi, ANGLE_SAMPLES)
    q0, q1 = forms(thetas)
    candidates = [float(t) for t, f in zip(thetas, q1) if f >= 0.0]

    # the constrained maximum sits on the boundary x'Q1x = 0 when the grid misses it
    sign_change = np.nonzero(np.signbit(q1[:-1]) != np.signbit(q1[1:]))[0]
    for i in sign_change:
        try:
            root = brentq(lambda t: float(forms(np.array(t))[1]), thetas[i], thetas[i + 1], xtol=1e-15)
        except ValueError:
            continue
        for t in (root, np.nextafter(root, thetas[i]), np.nextafter(root, thetas[i + 1])):
            if float(forms(np.array(t))[1]) >= 0.0:
                candidates.append(float(t))

    if not candidates:
        return None
    values = forms(np.array(candidates))[0]
    k = int(np.argmax(values))
    t = candidates[k]
    return float(values[k]), np.cos(t) * a + np.sin(t) * b


def _separate(
    Q0: np.ndarray, Q1: np.ndarray, vectors: List[np.ndarray]
) -> Optional[np.ndarray]:
    basis = scipy.linalg.orth(np.column_stack(vectors))
    cols = [basis[:, i] for i in range(basis.shape[1])]
    found: List[Tuple[float, np.ndarray]] = [
        (float(a @ Q0 @ a), a) for a in cols if a @ Q1 @ a >= 0.0
    ]
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            on_circle = _best_on_circle(Q0, Q1, cols[i], cols[j])
            if on_circle is not None:
                found.append(on_circle)
    best = max(found, key=lambda item: item[0], default=None)
    if best is None or best[0] <= 0.0:
        return None
    x = best[1]
    return x / np.linalg.norm(x)


def slemma_min_tau(
    Q0: np.ndarray,
    Q1: np.ndarray,
    tau_max: Optional[float] = None,
    rtol: Optional[float] = None,
) -> SLemmaResult:
    """
    Minimize lambda_max(Q0 + tau Q1) over tau in [0, tau_max].

    Returns the minimizer tau*, the value lambda*, and either the top eigenvector
    at tau* (when the S-lemma certificate holds) or a separating vector x* with
    x*'Q1x* >= 0 and x*'Q0x* > 0.
    """
    Q0 = _symmetric(Q0, "Q0")
    Q1 = _symmetric(Q1, "Q1")
    if Q0.shape != Q1.shape:
        raise DimensionError(f"Q0 and Q1 differ in shape: {Q0.shape} vs {Q1.shape}")
    tau_max = settings.tau_max if tau_max is None else float(tau_max)
    rtol = settings.eig_rtol if rtol is None else float(rtol)

    taus = _tau_grid(tau_max)
    values = np.array([_lambda_max(Q0 + t * Q1) for t in taus])
    trace = list(zip(taus.tolist(), values.tolist()))
    i = int(np.argmin(values))

    lo = taus[max(i - 1, 0)]
    hi = taus[min(i + 1, len(taus) - 1)]
    tau_ref, lam_ref = _refine(Q0, Q1, lo, hi)
    if lam_ref < values[i]:
        tau_star, lam_star = tau_ref, lam_ref
        trace.append((tau_ref, lam_ref))
    else:
        tau_star, lam_star = float(taus[i]), float(values[i])

    tol = rtol * (1.0 + _spectral_norm(Q0) + tau_star * _spectral_norm(Q1))
    _, x_top = _top_eig(Q0 + tau_star * Q1)

    if lam_star <= tol:
        logger.debug(f"[SLemma] certificate holds: tau*={tau_star:.6g}, lambda*={lam_star:.3e}")
        return SLemmaResult(tau_star, lam_star, x_top, tol, holds=True, trace=trace)

    x_sep = _separate(Q0, Q1, _candidate_vectors(Q0, Q1, tau_star, lam_star, tol, tau_max))
    if x_sep is None:
        logger.warning(
            f"[SLemma] lambda*={lam_star:.3e} > tol but no separating vector was found "
            f"near tau*={tau_star:.6g}"
        )
        return SLemmaResult(tau_star, lam_star, x_top, tol, holds=False, trace=trace)

    logger.debug(
        f"[SLemma] violation: tau*={tau_star:.6g}, lambda*={lam_star:.3e}, "
        f"x'Q0x={x_sep @ Q0 @ x_sep:.3e}, x'Q1x={x_sep @ Q1 @ x_sep:.3e}"
    )
    return SLemmaResult(tau_star, lam_star, x_sep, tol, holds=False, separated=True, trace=trace)
