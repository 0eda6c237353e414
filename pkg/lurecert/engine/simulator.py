"""
Time-domain simulation of the feedback interconnection

    e1 = u1 + s y2,  e2 = u2 + y1,  y1 = G e1,  y2 = Phi e2     (s = +1 or -1)

plus empirical gain estimation, pointwise sector checks and exponential
decay verification for autonomous loops.
"""

from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..utils.logger import get_logger
from ..utils.parallel import parallel_map
from .errors import (
    ConsistencyError,
    DimensionError,
    HorizonError,
    InputError,
    KindError,
    ParameterError,
    ReplayError,
    WellPosednessError,
)
from .lti import StateSpace, simulate_lti
from .nonlinearity import Nonlinearity, NonlinearityKind
from .sector import Feedback, QuadSpec
from .signals import (
    UNIT_WEIGHT,
    Signal,
    SipConfig,
    Weight,
    as_symmetric_2x2,
    cumulative_quad_forms,
    seminorm,
    stack_channels,
)

logger = get_logger(__name__)

RELAXATION = 0.5
FIXED_POINT_TOL = 1e-10
FIXED_POINT_ITERS = 100
RESIDUAL_RTOL = 1e-10
REPLAY_RTOL = 1e-9
SECTOR_ATOL = 1e-9
DECAY_SLOPE_TOL = 1e-6


@dataclass(frozen=True)
class Trajectory:
    u1: Signal
    u2: Signal
    e1: Signal
    e2: Signal
    y1: Signal
    y2: Signal
    states: np.ndarray
    residual: float
    feedback: Feedback = Feedback.POSITIVE

    @property
    def horizon(self) -> int:
        return self.e1.horizon

    @property
    def u(self) -> Signal:
        return stack_channels(self.u1, self.u2)

    @property
    def e(self) -> Signal:
        return stack_channels(self.e1, self.e2)

    @property
    def y(self) -> Signal:
        return stack_channels(self.y1, self.y2)

    def to_columns(self) -> Dict[str, np.ndarray]:
        """Columns for CSV output: k, e1, e2, y1, y2 and the states x[0..T]"""
        cols: Dict[str, np.ndarray] = {"k": np.arange(self.horizon + 1)}
        for name in ("e1", "e2", "y1", "y2"):
            sig: Signal = getattr(self, name)
            if sig.dim == 1:
                cols[name] = sig.data[:, 0]
            else:
                for i in range(sig.dim):
                    cols[f"{name}_{i}"] = sig.data[:, i]
        for i in range(self.states.shape[1]):
            cols[f"x{i}"] = self.states[: self.horizon + 1, i]
        return cols


def _relative(diff: np.ndarray, ref: np.ndarray) -> float:
    return float(np.abs(diff).max() / (1.0 + np.abs(ref).max())) if diff.size else 0.0


def _solve_linear_step(
    G: StateSpace, c: np.ndarray, sign: float, rhs: np.ndarray
) -> np.ndarray:
    """(I - s D diag(c)) e2 = u2 + C x + D u1"""
    lhs = np.eye(G.n_outputs) - sign * G.D * c[None, :]
    cond = np.linalg.cond(lhs)
    if not np.isfinite(cond) or cond > 1.0 / np.finfo(float).eps:
        raise WellPosednessError(f"algebraic loop I - D diag(c) is singular (cond={cond:.3e})")
    return scipy.linalg.solve(lhs, rhs)


def interconnect(
    G: StateSpace,
    phi: Nonlinearity,
    u1: Signal,
    u2: Signal,
    T: Optional[int] = None,
    x0: Optional[Any] = None,
    feedback: Feedback = Feedback.POSITIVE,
) -> Trajectory:
    """
    Simulate k = 0..T.

    Per-step loop resolution: a recorded relation replays y2 first; a strictly
    causal Phi gives y2 first; D = 0 gives y1 first; a linear per-step gain
    solves the algebraic loop exactly; anything else uses a damped fixed point.
    """
    if not G.is_square:
        raise DimensionError(f"G must be square, got {G.n_outputs}x{G.n_inputs}")
    m = G.n_inputs
    if u1.dim != m or u2.dim != m:
        raise DimensionError(f"inputs must have dim {m}, got u1={u1.dim}, u2={u2.dim}")
    if phi.dim is not None and phi.dim != m:
        raise DimensionError(f"nonlinearity acts on dim {phi.dim}, loop has dim {m}")
    T = min(u1.horizon, u2.horizon) if T is None else int(T)
    if T < 0 or T > min(u1.horizon, u2.horizon):
        raise HorizonError(f"horizon {T} is outside the input signals")
    if phi.horizon is not None and phi.horizon < T:
        raise HorizonError(f"nonlinearity is defined up to k={phi.horizon}, loop needs {T}")
    sign = 1.0 if Feedback(feedback) is Feedback.POSITIVE else -1.0

    n = G.n_states
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).reshape(-1)
    if x.shape != (n,):
        raise DimensionError(f"x0 must have dimension {n}, got {x.shape}")
    x_init = x.copy()

    E1 = np.zeros((T + 1, m))
    E2 = np.zeros((T + 1, m))
    Y1 = np.zeros((T + 1, m))
    Y2 = np.zeros((T + 1, m))
    U1, U2 = u1.data[: T + 1], u2.data[: T + 1]
    D_zero = not np.any(G.D)

    for k in range(T + 1):
        free = G.C @ x
        if phi.kind is NonlinearityKind.PAIR_RELATION:
            assert phi.e2 is not None and phi.y2 is not None
            Y2[k] = phi.y2[k]
            E1[k] = U1[k] + sign * Y2[k]
            Y1[k] = free + G.D @ E1[k]
            E2[k] = U2[k] + Y1[k]
            if _relative(E2[k] - phi.e2[k], phi.e2[k]) > REPLAY_RTOL:
                raise ReplayError(
                    f"input drives e2 off the recorded relation at k={k}: "
                    f"{E2[k].tolist()} vs {phi.e2[k].tolist()}"
                )
        elif phi.strictly_causal:
            Y2[k] = phi.output(k, E2)
            E1[k] = U1[k] + sign * Y2[k]
            Y1[k] = free + G.D @ E1[k]
            E2[k] = U2[k] + Y1[k]
        elif D_zero:
            Y1[k] = free
            E2[k] = U2[k] + Y1[k]
            Y2[k] = phi.output(k, E2)
            E1[k] = U1[k] + sign * Y2[k]
        elif phi.is_linear:
            c = phi.gain_at(k, m)
            E2[k] = _solve_linear_step(G, c, sign, U2[k] + free + G.D @ U1[k])
            Y2[k] = c * E2[k]
            E1[k] = U1[k] + sign * Y2[k]
            Y1[k] = free + G.D @ E1[k]
            E2[k] = U2[k] + Y1[k]
        else:
            guess = U2[k] + free + G.D @ U1[k]
            for _ in range(FIXED_POINT_ITERS):
                E2[k] = guess
                update = U2[k] + free + G.D @ (U1[k] + sign * phi.output(k, E2))
                nxt = (1.0 - RELAXATION) * guess + RELAXATION * update
                if not np.all(np.isfinite(nxt)):
                    raise WellPosednessError(f"fixed-point iteration diverged at k={k}")
                step = float(np.abs(nxt - guess).max())
                guess = nxt
                if step <= FIXED_POINT_TOL * (1.0 + float(np.abs(guess).max())):
                    break
            else:
                raise WellPosednessError(
                    f"algebraic loop did not converge in {FIXED_POINT_ITERS} iterations at k={k}"
                )
            E2[k] = guess
            Y2[k] = phi.output(k, E2)
            E1[k] = U1[k] + sign * Y2[k]
            Y1[k] = free + G.D @ E1[k]
            E2[k] = U2[k] + Y1[k]
        x = G.A @ x + G.B @ E1[k]

    e1 = Signal(E1)
    y1_check, states = simulate_lti(G, e1, x_init)
    residual = max(
        _relative(E1 - U1 - sign * Y2, E1),
        _relative(E2 - U2 - Y1, E2),
        _relative(Y1 - y1_check.data, Y1),
    )
    if residual > RESIDUAL_RTOL:
        raise ConsistencyError(f"loop residual {residual:.3e} exceeds {RESIDUAL_RTOL:g}")

    return Trajectory(
        u1=Signal(U1),
        u2=Signal(U2),
        e1=e1,
        e2=Signal(E2),
        y1=Signal(Y1),
        y2=Signal(Y2),
        states=states,
        residual=residual,
        feedback=Feedback(feedback),
    )


def _probe_points(m: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    eye = np.eye(m)
    probes = [np.zeros((1, m)), eye, -eye, 10.0 * eye, -10.0 * eye, 0.1 * eye]
    scales = rng.choice([0.1, 1.0, 10.0], size=(samples, 1))
    probes.append(rng.standard_normal((samples, m)) * scales)
    return np.vstack(probes)


def _pointwise_forms(K: np.ndarray, xi: np.ndarray, out: np.ndarray) -> np.ndarray:
    xx = np.einsum("ij,ij->i", xi, xi)
    xo = np.einsum("ij,ij->i", xi, out)
    oo = np.einsum("ij,ij->i", out, out)
    return K[0, 0] * xx + 2.0 * K[0, 1] * xo + K[1, 1] * oo


def check_pointwise_sector(
    phi: Nonlinearity,
    M: QuadSpec,
    samples: int = 1000,
    m: int = 1,
    rng: Optional[np.random.Generator] = None,
) -> bool:
    """<[xi; phi(xi)], M [xi; phi(xi)]> >= -1e-9 on random and probe points (every k for gains)"""
    K = as_symmetric_2x2(M)
    rng = np.random.default_rng(0) if rng is None else rng
    dim = phi.dim or m
    xi = _probe_points(dim, samples, rng)

    if phi.kind is NonlinearityKind.STATIC_MAP:
        forms = _pointwise_forms(K, xi, phi.static_value(xi))
    elif phi.kind is NonlinearityKind.TIME_VARYING_GAIN:
        assert phi.gains is not None
        gains = np.broadcast_to(phi.gains, (phi.gains.shape[0], dim))
        forms = np.concatenate([_pointwise_forms(K, xi, xi * c[None, :]) for c in gains])
    else:
        raise KindError(f"pointwise sector check does not apply to {phi.kind.value}")

    ok = bool(np.all(forms >= -SECTOR_ATOL))
    if not ok:
        logger.debug(f"[Simulate] pointwise sector violated: min form {forms.min():.3e}")
    return ok


def cumulative_sector_margin(traj: Trajectory, M: QuadSpec, cfg: SipConfig) -> float:
    """min over t <= T of the cumulative form <[e2; y2], M [e2; y2]>_{rho,t}"""
    return float(np.min(cumulative_quad_forms(traj.e2, traj.y2, M, cfg)))


InputPair = Tuple[Signal, Signal]


def empirical_gain(
    G: StateSpace,
    phi: Nonlinearity,
    inputs: Iterable[InputPair],
    T: int,
    weight: Weight = UNIT_WEIGHT,
    feedback: Feedback = Feedback.POSITIVE,
    threads: Optional[int] = None,
) -> float:
    """Largest ||y|| / ||u|| over the input pairs; pairs with ||u|| = 0 are skipped"""
    cfg = SipConfig(T, weight)

    def ratio(pair: InputPair) -> Optional[float]:
        u1, u2 = pair
        traj = interconnect(G, phi, u1, u2, T, feedback=feedback)
        nu = seminorm(traj.u, cfg)
        if nu == 0.0:
            return None
        return seminorm(traj.y, cfg) / nu

    ratios = [r for r in parallel_map(ratio, list(inputs), threads) if r is not None]
    if not ratios:
        raise InputError("no input pair with nonzero seminorm")
    return float(max(ratios))


@dataclass(frozen=True)
class DecayResult:
    c_fit: float
    passed: bool
    slopes: List[float]

    def to_report(self) -> Dict[str, Any]:
        return {"c_fit": self.c_fit, "pass": self.passed, "slopes": self.slopes}


def _tail_slope(log_ratio: np.ndarray) -> float:
    K = log_ratio.shape[0] - 1
    start = max(0, K - max(K // 4, 1))
    ks = np.arange(start, K + 1)
    vals = log_ratio[start:]
    finite = np.isfinite(vals)
    if finite.sum() < 2:
        return float("-inf")
    return float(np.polyfit(ks[finite], vals[finite], 1)[0])


def verify_exponential_decay(
    G: StateSpace,
    phi: Nonlinearity,
    rho: Weight,
    x0_set: Sequence[Any],
    K: int,
    feedback: Feedback = Feedback.POSITIVE,
) -> DecayResult:
    """
    Simulate the autonomous loop (u = 0) from every x0 and fit ||x[k]|| <= c rho^k ||x[0]||.

    pass requires a finite c_fit and no growth of log(||x[k]|| / rho^k) over the
    last quartile of each run.
    """
    if K < 1:
        raise ParameterError(f"K must be >= 1, got {K}")
    if not x0_set:
        raise InputError("x0_set is empty")
    w8 = rho if isinstance(rho, Weight) else Weight(float(rho))
    m = G.n_inputs
    zero = Signal.zeros(K, m)
    log_rho = np.log(w8.rho)

    c_logs: List[float] = []
    slopes: List[float] = []
    for x0 in x0_set:
        x0_arr = np.asarray(x0, dtype=float).reshape(-1)
        norm0 = float(np.linalg.norm(x0_arr))
        if norm0 == 0.0:
            continue
        traj = interconnect(G, phi, zero, zero, K, x0=x0_arr, feedback=feedback)
        norms = np.linalg.norm(traj.states[: K + 1], axis=1)
        with np.errstate(divide="ignore"):
            log_ratio = np.log(norms) - np.log(norm0) - np.arange(K + 1) * log_rho
        c_logs.append(float(np.max(log_ratio)))
        slopes.append(_tail_slope(log_ratio))

    if not c_logs:
        raise InputError("every initial state in x0_set is zero")
    c_fit = float(np.exp(max(c_logs)))
    passed = bool(np.isfinite(c_fit) and all(s <= DECAY_SLOPE_TOL for s in slopes))
    logger.debug(f"[Simulate] decay at rho={w8.rho:.6g}: c_fit={c_fit:.6g}, pass={passed}")
    return DecayResult(c_fit=c_fit, passed=passed, slopes=slopes)
