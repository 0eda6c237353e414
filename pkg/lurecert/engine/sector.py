"""
Quadratic-constraint matrices M (on the nonlinearity) and N (on the linear system)

All presets follow the positive-feedback convention e1 = u1 + y2. The
negative-feedback convention is obtained by negating the off-diagonal entries
(flip_sign), which is a similarity by diag(1, -1) and so preserves eigenvalues.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..utils.logger import get_logger
from .errors import ConventionError, ParameterError
from .signals import as_symmetric_2x2

logger = get_logger(__name__)

# relative slack on strict matrix inequalities, scaled by 1 + ||M|| + ||N||
STRICT_RTOL = 1e-12


class Side(str, Enum):
    G_SIDE = "g"
    PHI_SIDE = "phi"


class Feedback(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    def toggled(self) -> "Feedback":
        return Feedback.NEGATIVE if self is Feedback.POSITIVE else Feedback.POSITIVE


class PresetName(str, Enum):
    CONIC = "conic"
    EXTENDED_CONIC = "extended_conic"
    PASSIVITY = "passivity"
    SMALL_GAIN = "small_gain"


@dataclass(frozen=True, eq=False)
class QuadSpec:
    """Symmetric 2x2 constraint matrix tagged with its side and feedback convention"""

    K: np.ndarray
    side: Side = Side.PHI_SIDE
    feedback: Feedback = Feedback.POSITIVE

    def __post_init__(self):
        mat = np.array(as_symmetric_2x2(self.K))
        mat.setflags(write=False)
        object.__setattr__(self, "K", mat)
        object.__setattr__(self, "side", Side(self.side))
        object.__setattr__(self, "feedback", Feedback(self.feedback))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, QuadSpec):
            return NotImplemented
        return (
            bool(np.array_equal(self.K, other.K))
            and self.side == other.side
            and self.feedback == other.feedback
        )

    def __hash__(self) -> int:
        return hash((self.K.tobytes(), self.side, self.feedback))

    def with_matrix(self, K: np.ndarray) -> "QuadSpec":
        return QuadSpec(K, self.side, self.feedback)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "K": self.K.tolist(),
            "side": self.side.value,
            "feedback": self.feedback.value,
        }


def phi_spec(K: Any, feedback: Feedback = Feedback.POSITIVE) -> QuadSpec:
    return QuadSpec(np.asarray(K, dtype=float), Side.PHI_SIDE, feedback)


def g_spec(K: Any, feedback: Feedback = Feedback.POSITIVE) -> QuadSpec:
    return QuadSpec(np.asarray(K, dtype=float), Side.G_SIDE, feedback)


@dataclass(frozen=True)
class SectorPair:
    """(M, N) for a classical condition together with its parameter-validity verdict"""

    name: PresetName
    M: QuadSpec
    N: QuadSpec
    params: Dict[str, float] = field(default_factory=dict)
    valid: bool = False


def _lambda_max(K: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(K)[-1])


def _strict_slack(*mats: np.ndarray) -> float:
    return STRICT_RTOL * (1.0 + sum(float(np.abs(m).max()) for m in mats))


def _ratio(num: float, den: float, what: str) -> float:
    if den == 0.0:
        raise ParameterError(f"zero denominator in {what}")
    return num / den


def _require(params: Dict[str, float], names: List[str], preset: str) -> List[float]:
    missing = [n for n in names if n not in params]
    if missing:
        raise ParameterError(f"preset {preset} is missing parameters {missing}")
    values = [float(params[n]) for n in names]
    if not all(np.isfinite(v) for v in values):
        raise ParameterError(f"preset {preset} parameters must be finite")
    return values


def _conic_branch(params: Dict[str, float], preset: str) -> Tuple[float, float, float, float]:
    a, b = _require(params, ["a", "b"], preset)
    delta = float(params.get("delta", 0.0))
    Delta = float(params.get("Delta", 0.0))
    if a >= b:
        raise ParameterError(f"{preset} requires a < b, got a={a}, b={b}")
    if delta != 0.0 and Delta != 0.0:
        raise ParameterError(
            f"{preset} takes either delta or Delta, not both (delta={delta}, Delta={Delta})"
        )
    return a, b, delta, Delta


def _conic(params: Dict[str, float]) -> SectorPair:
    a, b, delta, Delta = _conic_branch(params, "conic")
    dM = b - a - 2.0 * Delta
    dN = b - a + 2.0 * a * b * delta
    off_M = _ratio(-a - b, 2.0 * dM, "conic M")
    M = [
        [_ratio(-(a + Delta) * (b - Delta), dM, "conic M"), off_M],
        [off_M, _ratio(-1.0, dM, "conic M")],
    ]
    off_N = _ratio(a + b, 2.0 * dN, "conic N")
    N = [
        [_ratio(a * b, dN, "conic N"), off_N],
        [off_N, _ratio((1.0 + a * delta) * (1.0 - b * delta), dN, "conic N")],
    ]
    valid = (delta == 0.0 and Delta > 0.0 and dM > 0.0) or (
        Delta == 0.0 and delta > 0.0 and dN > 0.0 and a * b != 0.0
    )
    return SectorPair(PresetName.CONIC, phi_spec(M), g_spec(N), dict(a=a, b=b, delta=delta, Delta=Delta), valid)


def _extended_conic(params: Dict[str, float]) -> SectorPair:
    a, b, delta, Delta = _conic_branch(params, "extended_conic")
    dM = b - a + 2.0 * Delta
    dN = b - a - 2.0 * a * b * delta
    off_M = _ratio(a + b, 2.0 * dM, "extended_conic M")
    M = [
        [_ratio((a - Delta) * (b + Delta), dM, "extended_conic M"), off_M],
        [off_M, _ratio(1.0, dM, "extended_conic M")],
    ]
    off_N = _ratio(-a - b, 2.0 * dN, "extended_conic N")
    N = [
        [_ratio(-a * b, dN, "extended_conic N"), off_N],
        [off_N, _ratio(-(1.0 - a * delta) * (1.0 + b * delta), dN, "extended_conic N")],
    ]
    valid = (delta == 0.0 and Delta > 0.0 and dM > 0.0) or (
        Delta == 0.0 and delta > 0.0 and dN > 0.0 and a * b != 0.0
    )
    return SectorPair(
        PresetName.EXTENDED_CONIC, phi_spec(M), g_spec(N), dict(a=a, b=b, delta=delta, Delta=Delta), valid
    )


def _passivity(params: Dict[str, float]) -> SectorPair:
    eps1, eps2, delta1, delta2 = _require(params, ["eps1", "eps2", "delta1", "delta2"], "passivity")
    M = [[-eps2, 0.5], [0.5, -delta2]]
    N = [[-delta1, -0.5], [-0.5, -eps1]]
    valid = delta1 + eps2 > 0.0 and delta2 + eps1 > 0.0
    return SectorPair(
        PresetName.PASSIVITY,
        phi_spec(M),
        g_spec(N),
        dict(eps1=eps1, eps2=eps2, delta1=delta1, delta2=delta2),
        valid,
    )


def _small_gain(params: Dict[str, float]) -> SectorPair:
    gamma1, gamma2 = _require(params, ["gamma1", "gamma2"], "small_gain")
    if gamma1 <= 0.0 or gamma2 <= 0.0:
        raise ParameterError(f"small_gain needs positive gains, got {gamma1}, {gamma2}")
    M = [[gamma2, 0.0], [0.0, -1.0 / gamma2]]
    N = [[-1.0 / gamma1, 0.0], [0.0, gamma1]]
    valid = gamma1 * gamma2 < 1.0
    return SectorPair(PresetName.SMALL_GAIN, phi_spec(M), g_spec(N), dict(gamma1=gamma1, gamma2=gamma2), valid)


_PRESETS: Dict[PresetName, Callable[[Dict[str, float]], SectorPair]] = {
    PresetName.CONIC: _conic,
    PresetName.EXTENDED_CONIC: _extended_conic,
    PresetName.PASSIVITY: _passivity,
    PresetName.SMALL_GAIN: _small_gain,
}


def preset(name: Any, **params: float) -> SectorPair:
    """Build (M, N) for a named classical condition in the positive-feedback convention"""
    try:
        key = PresetName(name)
    except ValueError:
        raise ParameterError(f"unknown preset {name!r}; choose from {[p.value for p in PresetName]}")
    pair = _PRESETS[key](dict(params))
    logger.debug(f"[Sector] preset {key.value} {pair.params} valid={pair.valid}")
    return pair


def preset_table() -> List[Dict[str, Any]]:
    """Preset rows: name, parameter names and the validity condition"""
    return [
        {
            "name": PresetName.CONIC.value,
            "title": "Conic sector theorem",
            "params": ["a", "b", "delta", "Delta"],
            "condition": "a < b, and either delta = 0, Delta > 0 (b - a - 2 Delta > 0) "
            "or delta > 0, Delta = 0 (b - a + 2ab delta > 0, ab != 0)",
        },
        {
            "name": PresetName.EXTENDED_CONIC.value,
            "title": "Extended conic sector theorem",
            "params": ["a", "b", "delta", "Delta"],
            "condition": "a < b, and either delta = 0, Delta > 0 "
            "or delta > 0, Delta = 0 (b - a - 2ab delta > 0, ab != 0)",
        },
        {
            "name": PresetName.PASSIVITY.value,
            "title": "Extended passivity",
            "params": ["eps1", "eps2", "delta1", "delta2"],
            "condition": "delta1 + eps2 > 0 and delta2 + eps1 > 0",
        },
        {
            "name": PresetName.SMALL_GAIN.value,
            "title": "Small gain theorem",
            "params": ["gamma1", "gamma2"],
            "condition": "gamma1 * gamma2 < 1",
        },
    ]


def sector_interval_to_M(a: float, b: float) -> QuadSpec:
    """
    Pointwise sector [a, b]: (phi - a xi)(b xi - phi) >= 0, i.e.
    M = [[-ab, (a+b)/2], [(a+b)/2, -1]] (unnormalized).
    """
    if not (np.isfinite(a) and np.isfinite(b)) or a >= b:
        raise ParameterError(f"sector interval needs a < b, got a={a}, b={b}")
    mid = (a + b) / 2.0
    return phi_spec([[-a * b, mid], [mid, -1.0]])


def flip_sign(K: QuadSpec) -> QuadSpec:
    """Negate off-diagonal entries and toggle the feedback tag"""
    flipped = np.array(K.K)
    flipped[0, 1] = -flipped[0, 1]
    flipped[1, 0] = -flipped[1, 0]
    return QuadSpec(flipped, K.side, K.feedback.toggled())


def to_positive_feedback(K: QuadSpec) -> QuadSpec:
    return K if K.feedback is Feedback.POSITIVE else flip_sign(K)


def compatibility(M: QuadSpec, N: QuadSpec) -> Tuple[bool, float]:
    """
    ok iff M + N < 0; eta = -lambda_max(M + N) when ok (else the same value,
    which is then <= 0).
    """
    if M.feedback != N.feedback:
        raise ConventionError(
            f"feedback conventions differ: M is {M.feedback.value}, N is {N.feedback.value}"
        )
    if M.side is not Side.PHI_SIDE or N.side is not Side.G_SIDE:
        raise ConventionError(
            f"expected (phi-side M, g-side N), got ({M.side.value}, {N.side.value})"
        )
    lam = _lambda_max(M.K + N.K)
    ok = lam < -_strict_slack(M.K, N.K)
    return ok, -lam


def indefinite(M: QuadSpec) -> bool:
    """True iff lambda_max(M) > 0, i.e. M is not negative semidefinite"""
    return _lambda_max(M.K) > 0.0


def nested(K1: QuadSpec, K2: QuadSpec) -> bool:
    """True iff K1 <= K2 in the semidefinite order"""
    if K1.side != K2.side or K1.feedback != K2.feedback:
        raise ConventionError("nested() needs specs with the same side and feedback tags")
    return _lambda_max(K1.K - K2.K) <= _strict_slack(K1.K, K2.K)


def gain_interval(M: QuadSpec) -> Optional[Tuple[float, float]]:
    """
    Scalar gains c with <[1; c], M [1; c]> >= 0, when that set is a bounded interval.
    """
    m11, m12, m22 = float(M.K[0, 0]), float(M.K[0, 1]), float(M.K[1, 1])
    if m22 >= 0.0:
        return None
    disc = m12 * m12 - m11 * m22
    if disc < 0.0:
        return None
    root = float(np.sqrt(disc))
    lo, hi = (-m12 + root) / m22, (-m12 - root) / m22
    return (min(lo, hi), max(lo, hi))
