"""
Certification engine

Both directions of the robust stability equivalence for the interconnection

    e1 = u1 + y2,   e2 = u2 + y1,   y1 = G e1,   y2 = Phi e2

with Phi in the cumulative sector M:

- sufficiency: a certificate N = -(1/tau) I - M such that G satisfies the
  hard (all horizons) quadratic condition for N; the gain bound gamma then
  follows in closed form from (M, N)
- necessity: when no tau works, an S-lemma search over the finite-horizon
  loop subspace produces an explicit triple (u, y, e) with a sector-consistent
  y2 and ||y|| > gamma ||u||

All checks are exact finite-horizon eigenvalue tests on the block Toeplitz
lifting of the rho-scaled system.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from ..config import settings
from ..utils.logger import get_logger
from ..utils.parallel import parallel_map
from .errors import (
    CompatibilityError,
    ConsistencyError,
    DimensionError,
    FrequencyDomainError,
    HorizonError,
    NumericsError,
    ParameterError,
)
from .lti import (
    StateSpace,
    frequency_response,
    is_schur,
    rho_scale,
    simulate_lti,
    toeplitz_matrix,
)
from .sector import (
    Feedback,
    QuadSpec,
    Side,
    compatibility,
    flip_sign,
    g_spec,
    indefinite,
    nested,
    sector_interval_to_M,
    to_positive_feedback,
)
from .signals import (
    UNIT_WEIGHT,
    Signal,
    SipConfig,
    Weight,
    quad_form,
    scale_signal,
    seminorm,
    split_channels,
    stack_channels,
)
from .slemma import SLemmaResult, slemma_min_tau

logger = get_logger(__name__)

# certificate tau is backed off from the bisection limit by this factor
TAU_BACKOFF = 1e-3
TAU_REL_TOL = 1e-6
WITNESS_RTOL = 1e-9
SIGMA1_ATOL = 1e-9

WeightLike = Union[Weight, float]


class CertificateMethod(str, Enum):
    TOEPLITZ_EXACT = "toeplitz_exact"
    FREQUENCY_ASYMPTOTIC = "frequency_asymptotic"


def _weight(weight: WeightLike) -> Weight:
    return weight if isinstance(weight, Weight) else Weight(float(weight))


def _require_square(G: StateSpace) -> None:
    if not G.is_square:
        raise DimensionError(
            f"G must be square for the loop (p = m), got {G.n_outputs}x{G.n_inputs}"
        )


def _phi_side(M: QuadSpec) -> QuadSpec:
    if M.side is not Side.PHI_SIDE:
        raise ParameterError("M must be a phi-side quadratic spec")
    return to_positive_feedback(M)


def _g_side(N: QuadSpec) -> QuadSpec:
    if N.side is not Side.G_SIDE:
        raise ParameterError("N must be a g-side quadratic spec")
    return to_positive_feedback(N)


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaBound:
    eta: float
    r: float
    q: float
    gamma: float


@dataclass(frozen=True)
class HardConditionResult:
    """Outcome of the hard (cumulative) G-side check"""

    passed: bool
    horizon: int
    min_eig: float
    T_fail: Optional[int] = None
    xi_witness: Optional[Signal] = None
    quad_value: Optional[float] = None

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class FrequencyConditionResult:
    passed: bool
    min_eig: float
    omega_worst: float
    grid: int

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class Certificate:
    """
    N = -(1/tau) I - M for the generating M, with eta = 1/tau and the closed-form
    gain bound gamma = (r + sqrt(r^2 + eta q)) / eta.
    """

    N: QuadSpec
    M: QuadSpec
    tau: float
    eta: float
    r: float
    q: float
    gamma: float
    horizon: int
    weight: Weight = UNIT_WEIGHT
    method: CertificateMethod = CertificateMethod.TOEPLITZ_EXACT

    @property
    def rho(self) -> float:
        return self.weight.rho

    def to_report(self) -> Dict[str, Any]:
        return {
            "method": self.method.value,
            "tau": self.tau,
            "eta": self.eta,
            "r": self.r,
            "q": self.q,
            "gamma": self.gamma,
            "horizon": self.horizon,
            "rho": self.rho,
            "N": self.N.K.tolist(),
            "M": self.M.K.tolist(),
            "feedback": self.N.feedback.value,
        }


@dataclass(frozen=True)
class Infeasible:
    """No tau in the bracket passes; carries the check at the largest tau"""

    M: QuadSpec
    tau_max: float
    horizon: int
    weight: Weight
    check: HardConditionResult

    def to_report(self) -> Dict[str, Any]:
        report: Dict[str, Any] = {
            "certified": False,
            "tau_max": self.tau_max,
            "horizon": self.horizon,
            "rho": self.weight.rho,
            "T_fail": self.check.T_fail,
            "min_eig": self.check.min_eig,
        }
        if self.check.xi_witness is not None:
            report["xi_witness"] = self.check.xi_witness.to_list()
        return report


CertifyOutcome = Union[Certificate, Infeasible]


@dataclass(frozen=True)
class ViolationWitness:
    """
    Loop triple (u, y, e), each stacked as two channels (ch1; ch2), that satisfies
    the interconnection equations at horizon T, keeps y2 inside the cumulative
    sector of M (sigma1 >= 0) and breaks the gain bound (sigma0 > 0).
    """

    u: Signal
    y: Signal
    e: Signal
    gamma_target: float
    T: int
    weight: Weight
    sigma0: float
    sigma1: float
    tau_star: float
    lambda_star: float
    gains: Optional[np.ndarray] = None
    feedback: Feedback = Feedback.POSITIVE
    trace: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.u.dim // 2

    @property
    def operator_realizable(self) -> bool:
        return self.gains is not None

    def channels(self) -> Dict[str, Signal]:
        u1, u2 = split_channels(self.u, self.dim)
        y1, y2 = split_channels(self.y, self.dim)
        e1, e2 = split_channels(self.e, self.dim)
        return {"u1": u1, "u2": u2, "y1": y1, "y2": y2, "e1": e1, "e2": e2}

    @property
    def ratio(self) -> float:
        cfg = SipConfig(self.T, self.weight)
        nu = seminorm(self.u, cfg)
        return float("inf") if nu == 0.0 else seminorm(self.y, cfg) / nu

    def to_report(self) -> Dict[str, Any]:
        return {
            "gamma_target": self.gamma_target,
            "T": self.T,
            "rho": self.weight.rho,
            "sigma0": self.sigma0,
            "sigma1": self.sigma1,
            "ratio": self.ratio,
            "u": self.u.to_list(),
            "y": self.y.to_list(),
            "e": self.e.to_list(),
            "tau_star": self.tau_star,
            "lambda_star": self.lambda_star,
            "operator_realizable": self.operator_realizable,
            "gains": None if self.gains is None else self.gains.tolist(),
            "feedback": self.feedback.value,
        }


# ---------------------------------------------------------------------------
# Closed-form gain bound
# ---------------------------------------------------------------------------


def gamma_bound(M: QuadSpec, N: QuadSpec) -> GammaBound:
    """
    Gain bound ||y|| <= gamma ||u|| implied by M + N < 0.

    eta = -lambda_max(M + N), r = ||[[N12, M11], [N22, M21]]||,
    q = ||[[N22, 0], [0, M11]]||, gamma = (r + sqrt(r^2 + eta q)) / eta.
    """
    ok, eta = compatibility(M, N)
    if not ok:
        raise CompatibilityError(f"M + N is not negative definite (lambda_max = {-eta:.6g})")
    Mk, Nk = to_positive_feedback(M).K, to_positive_feedback(N).K
    r = float(np.linalg.norm(np.array([[Nk[0, 1], Mk[0, 0]], [Nk[1, 1], Mk[1, 0]]]), 2))
    q = float(np.linalg.norm(np.array([[Nk[1, 1], 0.0], [0.0, Mk[0, 0]]]), 2))
    gamma = (r + np.sqrt(r * r + eta * q)) / eta
    return GammaBound(eta=float(eta), r=r, q=q, gamma=float(gamma))


def e_gain_bound(gamma: float) -> float:
    """||e|| <= (1 + gamma) ||u|| whenever ||y|| <= gamma ||u||, since e = u + swap(y)"""
    return 1.0 + float(gamma)


# ---------------------------------------------------------------------------
# G-side conditions
# ---------------------------------------------------------------------------


def _lifted_form(Gt: np.ndarray, Nk: np.ndarray) -> np.ndarray:
    Q = Nk[0, 0] * (Gt.T @ Gt) + Nk[0, 1] * (Gt + Gt.T) + Nk[1, 1] * np.eye(Gt.shape[0])
    return 0.5 * (Q + Q.T)


def _horizon_min_eig(big: np.ndarray, Nk: np.ndarray, m: int, T: int, rtol: float):
    s = m * (T + 1)
    Q = _lifted_form(big[:s, :s], Nk)
    try:
        w, v = scipy.linalg.eigh(Q)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericsError(f"eigenvalue computation failed at T={T}: {e}")
    tol = rtol * (1.0 + max(abs(w[0]), abs(w[-1])))
    return float(w[0]), v[:, 0], tol


def check_hard_condition(
    G: StateSpace,
    N: QuadSpec,
    T_max: int,
    weight: WeightLike = UNIT_WEIGHT,
    rtol: Optional[float] = None,
    threads: Optional[int] = None,
) -> HardConditionResult:
    """
    Check <[G xi; xi], N [G xi; xi]>_{rho,T} >= 0 for every xi and T = 0..T_max.

    The lifted matrix of horizon T is the leading block of the T_max lifting,
    so the Toeplitz matrix is built once.
    """
    if T_max < 0:
        raise HorizonError(f"T_max must be >= 0, got {T_max}")
    _require_square(G)
    w8 = _weight(weight)
    Nk = _g_side(N).K
    rtol = settings.eig_rtol if rtol is None else rtol
    m = G.n_inputs
    big = toeplitz_matrix(G, T_max, w8)

    fail: Optional[Tuple[int, float, np.ndarray]] = None
    worst = np.inf
    threads = settings.threads if threads is None else threads
    if threads > 1:
        sweep = parallel_map(
            lambda T: _horizon_min_eig(big, Nk, m, T, rtol), range(T_max + 1), threads
        )
        for T, (lam, vec, tol) in enumerate(sweep):
            worst = min(worst, lam)
            if lam < -tol:
                fail = (T, lam, vec)
                break
    else:
        for T in range(T_max + 1):
            lam, vec, tol = _horizon_min_eig(big, Nk, m, T, rtol)
            worst = min(worst, lam)
            if lam < -tol:
                fail = (T, lam, vec)
                break

    if fail is None:
        return HardConditionResult(passed=True, horizon=T_max, min_eig=float(worst))

    T, lam, vec = fail
    xi = scale_signal(Signal.from_stacked(vec, m), w8, inverse=True)
    y, _ = simulate_lti(G, xi)
    value = quad_form(y, xi, Nk, SipConfig(T, w8))
    if not value < 0.0:
        raise ConsistencyError(
            f"failing direction at T={T} re-evaluates to {value:.3e} (eigenvalue {lam:.3e})"
        )
    logger.debug(f"[Certify] hard condition fails at T={T}: min eig {lam:.3e}, form {value:.3e}")
    return HardConditionResult(
        passed=False,
        horizon=T_max,
        min_eig=lam,
        T_fail=T,
        xi_witness=xi,
        quad_value=float(value),
    )


def check_frequency_condition(
    G: StateSpace,
    N: QuadSpec,
    grid: Optional[int] = None,
    weight: WeightLike = UNIT_WEIGHT,
    rtol: Optional[float] = None,
) -> FrequencyConditionResult:
    """
    Asymptotic screen: N11 G*G + N12 (G + G*) + N22 I >= 0 on the unit circle.

    Only meaningful for a Schur-stable scaled system; never issues certificates.
    """
    _require_square(G)
    w8 = _weight(weight)
    Gs = rho_scale(G, w8)
    if not is_schur(Gs):
        raise FrequencyDomainError(
            f"rho-scaled system is not Schur stable (rho={w8.rho}); the frequency check is meaningless"
        )
    grid = settings.default_grid if grid is None else int(grid)
    if grid < 1:
        raise ParameterError(f"grid must be >= 1, got {grid}")
    rtol = settings.eig_rtol if rtol is None else rtol
    Nk = _g_side(N).K

    omegas = 2.0 * np.pi * np.arange(grid) / grid
    R = frequency_response(Gs, omegas)
    RH = np.conj(np.transpose(R, (0, 2, 1)))
    eye = np.eye(R.shape[1])[None, :, :]
    H = Nk[0, 0] * (RH @ R) + Nk[0, 1] * (R + RH) + Nk[1, 1] * eye
    H = 0.5 * (H + np.conj(np.transpose(H, (0, 2, 1))))
    eigs = np.linalg.eigvalsh(H)
    mins = eigs[:, 0]
    scale = np.max(np.abs(eigs), axis=1)
    ok = mins >= -rtol * (1.0 + scale)
    k = int(np.argmin(mins))
    return FrequencyConditionResult(
        passed=bool(np.all(ok)), min_eig=float(mins[k]), omega_worst=float(omegas[k]), grid=grid
    )


# ---------------------------------------------------------------------------
# Certificate search
# ---------------------------------------------------------------------------


def n_of_tau(M: QuadSpec, tau: float) -> QuadSpec:
    """N(tau) = -(1/tau) I - M in the positive-feedback convention"""
    Mp = to_positive_feedback(M)
    return g_spec(-np.eye(2) / tau - Mp.K)


def _convention_of(M: QuadSpec, N: QuadSpec) -> QuadSpec:
    return flip_sign(N) if M.feedback is Feedback.NEGATIVE else N


def certify(
    G: StateSpace,
    M: QuadSpec,
    T_max: Optional[int] = None,
    weight: WeightLike = UNIT_WEIGHT,
    tau_min: Optional[float] = None,
    tau_max: Optional[float] = None,
    max_steps: Optional[int] = None,
) -> CertifyOutcome:
    """
    Smallest tau (to a factor 1 + 1e-6) for which G passes the hard condition
    with N(tau), searched by bisection on log tau.

    The returned certificate uses tau* (1 + 1e-3), which passes as well since
    N(tau) grows with tau.
    """
    _require_square(G)
    Mp = _phi_side(M)
    w8 = _weight(weight)
    T_max = settings.default_horizon if T_max is None else int(T_max)
    lo = settings.tau_min if tau_min is None else float(tau_min)
    hi = settings.tau_max if tau_max is None else float(tau_max)
    max_steps = settings.max_bisection_steps if max_steps is None else int(max_steps)
    if not 0.0 < lo < hi:
        raise ParameterError(f"tau bracket must satisfy 0 < tau_min < tau_max, got [{lo}, {hi}]")

    if not indefinite(Mp):
        logger.warning(
            "[Certify] M is negative semidefinite; a certificate still proves the bound "
            "but infeasibility does not imply a violation"
        )

    def passes(tau: float) -> HardConditionResult:
        return check_hard_condition(G, n_of_tau(Mp, tau), T_max, w8)

    top = passes(hi)
    if not top:
        logger.info(f"[Certify] infeasible: tau={hi:.3g} fails at T={top.T_fail}")
        return Infeasible(M=M, tau_max=hi, horizon=T_max, weight=w8, check=top)

    if passes(lo):
        tau_star = lo
    else:
        steps = 0
        while hi / lo > 1.0 + TAU_REL_TOL and steps < max_steps:
            mid = float(np.sqrt(lo * hi))
            if passes(mid):
                hi = mid
            else:
                lo = mid
            steps += 1
        tau_star = hi
        logger.debug(f"[Certify] bisection on log tau: {steps} steps, tau*={tau_star:.9g}")

    tau_cert = tau_star * (1.0 + TAU_BACKOFF)
    N = n_of_tau(Mp, tau_cert)
    gb = gamma_bound(Mp, N)
    cert = Certificate(
        N=_convention_of(M, N),
        M=M,
        tau=tau_cert,
        eta=gb.eta,
        r=gb.r,
        q=gb.q,
        gamma=gb.gamma,
        horizon=T_max,
        weight=w8,
    )
    logger.info(
        f"[Certify] certified: tau={cert.tau:.6g}, gamma={cert.gamma:.6g} "
        f"(T_max={T_max}, rho={w8.rho:.6g})"
    )
    return cert


def relaxed_certify(
    G: StateSpace,
    N_hat: QuadSpec,
    M: QuadSpec,
    T_max: Optional[int] = None,
    weight: WeightLike = UNIT_WEIGHT,
) -> Tuple[CertifyOutcome, bool]:
    """
    Sufficient-only check with a user-supplied N_hat: G satisfies the hard
    condition for N_hat and M + N_hat < 0.

    Returns the outcome and whether N_hat <= N(tau) for tau = 1/eta, i.e. whether
    the one-parameter family dominates the supplied multiplier.
    """
    _require_square(G)
    w8 = _weight(weight)
    T_max = settings.default_horizon if T_max is None else int(T_max)
    gb = gamma_bound(M, N_hat)
    check = check_hard_condition(G, N_hat, T_max, w8)
    Mp = _phi_side(M)
    tau = 1.0 / gb.eta
    dominated = nested(_g_side(N_hat), n_of_tau(Mp, tau))
    if not check:
        return Infeasible(M=M, tau_max=tau, horizon=T_max, weight=w8, check=check), dominated
    cert = Certificate(
        N=N_hat,
        M=M,
        tau=tau,
        eta=gb.eta,
        r=gb.r,
        q=gb.q,
        gamma=gb.gamma,
        horizon=T_max,
        weight=w8,
    )
    return cert, dominated


def certify_sweep(
    G: StateSpace,
    M: QuadSpec,
    rhos: Sequence[float],
    T_max: Optional[int] = None,
    threads: Optional[int] = None,
) -> List[CertifyOutcome]:
    """Independent certify runs over a list of weights, in input order"""
    return parallel_map(lambda rho: certify(G, M, T_max, Weight(rho)), rhos, threads)


# ---------------------------------------------------------------------------
# Necessity: counterexample synthesis
# ---------------------------------------------------------------------------


def _loop_forms(
    big: np.ndarray, Mk: np.ndarray, gamma: float
) -> Tuple[np.ndarray, np.ndarray, Dict[str, np.ndarray]]:
    """Q0, Q1 over free coordinates z = (u1, u2, y2) in rho-scaled time"""
    s = big.shape[0]
    eye = np.eye(s)
    zero = np.zeros((s, s))
    U1 = np.hstack([eye, zero, zero])
    U2 = np.hstack([zero, eye, zero])
    Y2 = np.hstack([zero, zero, eye])
    E1 = U1 + Y2
    Y1 = big @ E1
    E2 = U2 + Y1

    Q0 = Y1.T @ Y1 + Y2.T @ Y2 - gamma * gamma * (U1.T @ U1 + U2.T @ U2)
    Q1 = Mk[0, 0] * (E2.T @ E2) + Mk[0, 1] * (E2.T @ Y2 + Y2.T @ E2) + Mk[1, 1] * (Y2.T @ Y2)
    maps = {"u1": U1, "u2": U2, "y2": Y2, "e1": E1, "y1": Y1, "e2": E2}
    return 0.5 * (Q0 + Q0.T), 0.5 * (Q1 + Q1.T), maps


def _realizing_gains(e2: Signal, y2: Signal) -> Optional[np.ndarray]:
    scale = 1.0 + float(np.abs(e2.data).max()) + float(np.abs(y2.data).max())
    tiny = 1e-12 * scale
    gains = np.zeros_like(e2.data)
    for k, i in np.ndindex(*e2.data.shape):
        if abs(e2.data[k, i]) > tiny:
            gains[k, i] = y2.data[k, i] / e2.data[k, i]
        elif abs(y2.data[k, i]) > tiny:
            return None
    return gains


def find_violation(
    G: StateSpace,
    M: QuadSpec,
    gamma: float,
    T: int,
    weight: WeightLike = UNIT_WEIGHT,
) -> Optional[ViolationWitness]:
    """
    Search the loop subspace at horizon T for a triple with sigma1 >= 0
    (sector-consistent y2) and sigma0 = ||y||^2 - gamma^2 ||u||^2 > 0.

    Returns None when the S-lemma certificate holds at this horizon.
    """
    if not gamma > 0.0:
        raise ParameterError(f"gamma must be > 0, got {gamma}")
    if T < 0:
        raise HorizonError(f"T must be >= 0, got {T}")
    _require_square(G)
    Mp = _phi_side(M)
    w8 = _weight(weight)
    m = G.n_inputs

    big = toeplitz_matrix(G, T, w8)
    Q0, Q1, maps = _loop_forms(big, Mp.K, gamma)
    res: SLemmaResult = slemma_min_tau(Q0, Q1)
    if res.holds:
        logger.debug(f"[Certify] no violation at T={T}, gamma={gamma:.6g}: lambda*={res.lambda_star:.3e}")
        return None
    if not res.separated:
        raise ConsistencyError(
            f"S-lemma value {res.lambda_star:.3e} exceeds tol but no separating vector was built"
        )

    z = res.x_star
    scaled = {
        name: scale_signal(Signal.from_stacked(mat @ z, m), w8, inverse=True)
        for name, mat in maps.items()
    }
    u1, u2, y2 = scaled["u1"], scaled["u2"], scaled["y2"]
    e1 = u1 + y2
    y1, _ = simulate_lti(G, e1)
    e2 = u2 + y1

    ref = 1.0 + float(np.abs(scaled["y1"].data).max())
    if float(np.abs(y1.data - scaled["y1"].data).max()) > WITNESS_RTOL * ref:
        raise ConsistencyError("witness reconstruction disagrees with the simulated G output")

    cfg = SipConfig(T, w8)
    u = stack_channels(u1, u2)
    y = stack_channels(y1, y2)
    e = stack_channels(e1, e2)
    sigma0 = seminorm(y, cfg) ** 2 - gamma * gamma * seminorm(u, cfg) ** 2
    sigma1 = quad_form(e2, y2, Mp, cfg)

    sigma_scale = 1.0 + seminorm(e2, cfg) ** 2 + seminorm(y2, cfg) ** 2
    if sigma1 < -SIGMA1_ATOL * sigma_scale or not sigma0 > 0.0:
        raise ConsistencyError(
            f"reconstructed witness fails verification: sigma0={sigma0:.3e}, sigma1={sigma1:.3e}"
        )

    gains = _realizing_gains(e2, y2)
    feedback = M.feedback
    if feedback is Feedback.NEGATIVE:
        # e1 = u1 - y2 in the caller's convention: report -y2, and -c for the gains
        y = stack_channels(y1, -y2)
        gains = None if gains is None else -gains

    logger.info(
        f"[Certify] violation at T={T}: ||y||/||u|| exceeds gamma={gamma:.6g} "
        f"(sigma0={sigma0:.3e}, sigma1={sigma1:.3e}, realizable={gains is not None})"
    )
    return ViolationWitness(
        u=u,
        y=y,
        e=e,
        gamma_target=float(gamma),
        T=T,
        weight=w8,
        sigma0=float(sigma0),
        sigma1=float(sigma1),
        tau_star=res.tau_star,
        lambda_star=res.lambda_star,
        gains=gains,
        feedback=feedback,
        trace=res.trace,
    )


# ---------------------------------------------------------------------------
# Convergence rates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RateResult:
    rho_star: float
    certificate: Certificate
    monotone: bool = True
    sweep: List[Tuple[float, bool]] = field(default_factory=list)

    def to_report(self) -> Dict[str, Any]:
        return {
            "rho_star": self.rho_star,
            "certificate": self.certificate.to_report(),
            "monotone": self.monotone,
            "sweep": [{"rho": r, "certified": c} for r, c in self.sweep],
        }


def best_rate(
    G: StateSpace,
    M: QuadSpec,
    rho_lo: float,
    rho_hi: float = 1.0,
    tol: float = 1e-3,
    T_max: Optional[int] = None,
    validate: int = 0,
) -> Optional[RateResult]:
    """
    Smallest certified rho in [rho_lo, rho_hi], to within tol, by bisection.

    Certifiability is assumed monotone in rho; `validate` > 0 sweeps that many
    grid points and warns when the assumption is observed to fail.
    """
    if not 0.0 < rho_lo < rho_hi <= 1.0:
        raise ParameterError(f"need 0 < rho_lo < rho_hi <= 1, got ({rho_lo}, {rho_hi})")
    if not tol > 0.0:
        raise ParameterError(f"tol must be > 0, got {tol}")

    top = certify(G, M, T_max, Weight(rho_hi))
    if not isinstance(top, Certificate):
        logger.info(f"[Certify] rho_hi={rho_hi} is not certified; no rate")
        return None

    best = top
    bottom = certify(G, M, T_max, Weight(rho_lo))
    lo, hi = rho_lo, rho_hi
    if isinstance(bottom, Certificate):
        best, hi = bottom, rho_lo
    else:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            outcome = certify(G, M, T_max, Weight(mid))
            if isinstance(outcome, Certificate):
                best, hi = outcome, mid
            else:
                lo = mid

    sweep: List[Tuple[float, bool]] = []
    monotone = True
    if validate > 0:
        rhos = np.linspace(rho_lo, rho_hi, validate).tolist()
        outcomes = certify_sweep(G, M, rhos, T_max)
        sweep = [(r, isinstance(o, Certificate)) for r, o in zip(rhos, outcomes)]
        seen_pass = False
        for r, ok in sweep:
            if ok:
                seen_pass = True
            elif seen_pass:
                monotone = False
                logger.warning(
                    f"[Certify] certifiability is not monotone in rho: rho={r:.6g} fails "
                    "after a smaller rho passed"
                )
                break

    logger.info(f"[Certify] best rate rho*={hi:.6g} (tol {tol:g})")
    return RateResult(rho_star=hi, certificate=best, monotone=monotone, sweep=sweep)


def gradient_method_lure(m: float, L: float, alpha: float) -> Tuple[StateSpace, QuadSpec]:
    """
    Gradient descent x+ = x - alpha grad f(x), with grad f in the sector [m, L],
    as the loop G = (1, -alpha, 1, 0) with y2 = grad f(e2).
    """
    if not 0.0 < m < L:
        raise ParameterError(f"need 0 < m < L, got m={m}, L={L}")
    if not alpha > 0.0:
        raise ParameterError(f"step size must be > 0, got {alpha}")
    G = StateSpace(A=[[1.0]], B=[[-float(alpha)]], C=[[1.0]], D=[[0.0]])
    return G, sector_interval_to_M(m, L)
