"""
Nonlinearities Phi for the feedback channel y2 = Phi e2

Four kinds:
    static_map          y2[k] = phi(e2[k]), componentwise library maps
    time_varying_gain   y2[k] = c[k] * e2[k]
    delay_gain          y2[k] = c[k] * e2[k - d]   (strictly causal for d >= 1)
    pair_relation       a recorded (e2, y2) pair, replayed only on that pair
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from ..utils.logger import get_logger
from .errors import DimensionError, KindError, ParameterError
from .sector import QuadSpec, gain_interval
from .signals import UNIT_WEIGHT, Signal, SignalLike, Weight, as_signal

logger = get_logger(__name__)

REJECTION_TRIES = 1000


class NonlinearityKind(str, Enum):
    STATIC_MAP = "static_map"
    TIME_VARYING_GAIN = "time_varying_gain"
    DELAY_GAIN = "delay_gain"
    PAIR_RELATION = "pair_relation"


class StaticMap(str, Enum):
    GAIN = "gain"
    SATURATION = "saturation"
    DEADZONE = "deadzone"
    SECTOR_SATURATION = "sector_saturation"
    SECTOR_TANH = "sector_tanh"


@dataclass(frozen=True, eq=False)
class Nonlinearity:
    kind: NonlinearityKind
    map: Optional[StaticMap] = None
    params: Dict[str, float] = field(default_factory=dict)
    gains: Optional[np.ndarray] = None
    delay: int = 0
    e2: Optional[Signal] = None
    y2: Optional[Signal] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", NonlinearityKind(self.kind))
        if self.kind is NonlinearityKind.STATIC_MAP:
            if self.map is None:
                raise ParameterError("static_map needs a map name")
            object.__setattr__(self, "map", StaticMap(self.map))
        if self.kind in (NonlinearityKind.TIME_VARYING_GAIN, NonlinearityKind.DELAY_GAIN):
            if self.gains is None:
                raise ParameterError(f"{self.kind.value} needs a gain sequence")
            gains = np.array(self.gains, dtype=float)
            if gains.ndim == 1:
                gains = gains.reshape(-1, 1)
            if gains.ndim != 2 or gains.shape[0] == 0:
                raise DimensionError(f"gains must be a (T+1, m) array, got shape {gains.shape}")
            if not np.all(np.isfinite(gains)):
                raise ParameterError("gain sequence has non-finite entries")
            gains.setflags(write=False)
            object.__setattr__(self, "gains", gains)
        if self.kind is NonlinearityKind.DELAY_GAIN and self.delay < 0:
            raise ParameterError(f"delay must be >= 0, got {self.delay}")
        if self.kind is NonlinearityKind.PAIR_RELATION:
            if self.e2 is None or self.y2 is None:
                raise ParameterError("pair_relation needs both e2 and y2")
            if self.e2.data.shape != self.y2.data.shape:
                raise DimensionError(
                    f"relation pair shapes differ: {self.e2.data.shape} vs {self.y2.data.shape}"
                )

    @property
    def strictly_causal(self) -> bool:
        return self.kind is NonlinearityKind.DELAY_GAIN and self.delay >= 1

    @property
    def horizon(self) -> Optional[int]:
        """Last time index the nonlinearity is defined for (None when unbounded)"""
        if self.gains is not None:
            return int(self.gains.shape[0]) - 1
        if self.e2 is not None:
            return self.e2.horizon
        return None

    @property
    def dim(self) -> Optional[int]:
        if self.gains is not None and self.gains.shape[1] > 1:
            return int(self.gains.shape[1])
        if self.e2 is not None:
            return self.e2.dim
        return None

    @property
    def is_linear(self) -> bool:
        """y2[k] = c[k] * e2[k] with a known per-step gain"""
        if self.kind is NonlinearityKind.TIME_VARYING_GAIN:
            return True
        if self.kind is NonlinearityKind.DELAY_GAIN:
            return self.delay == 0
        return self.kind is NonlinearityKind.STATIC_MAP and self.map is StaticMap.GAIN

    def gain_at(self, k: int, m: int) -> np.ndarray:
        if self.kind is NonlinearityKind.STATIC_MAP and self.map is StaticMap.GAIN:
            return np.full(m, float(self.params.get("gain", 0.0)))
        if self.gains is None:
            raise KindError(f"{self.kind.value} has no per-step gain")
        if k >= self.gains.shape[0]:
            raise DimensionError(f"gain sequence ends at k={self.gains.shape[0] - 1}, asked for {k}")
        return np.broadcast_to(self.gains[k], (m,)).astype(float)

    def static_value(self, xi: np.ndarray) -> np.ndarray:
        """Apply the static map componentwise; accepts any array shape"""
        if self.kind is not NonlinearityKind.STATIC_MAP:
            raise KindError(f"{self.kind.value} is not a static map")
        x = np.asarray(xi, dtype=float)
        p = self.params
        if self.map is StaticMap.GAIN:
            return float(p.get("gain", 0.0)) * x
        if self.map is StaticMap.SATURATION:
            level = float(p.get("level", 1.0))
            return np.clip(x, -level, level)
        if self.map is StaticMap.DEADZONE:
            width = float(p.get("width", 1.0))
            return np.sign(x) * np.maximum(np.abs(x) - width, 0.0)
        a, b = float(p["a"]), float(p["b"])
        if self.map is StaticMap.SECTOR_SATURATION:
            level = float(p.get("level", 1.0))
            return a * x + (b - a) * np.clip(x, -level, level)
        return a * x + (b - a) * np.tanh(x)

    def output(self, k: int, e2_history: np.ndarray) -> np.ndarray:
        """
        y2[k] given e2[0..k] (rows of e2_history). Strictly causal kinds only read
        rows up to k - delay.
        """
        m = e2_history.shape[1]
        if self.kind is NonlinearityKind.STATIC_MAP:
            return self.static_value(e2_history[k])
        if self.kind is NonlinearityKind.TIME_VARYING_GAIN:
            return self.gain_at(k, m) * e2_history[k]
        if self.kind is NonlinearityKind.DELAY_GAIN:
            src = k - self.delay
            if src < 0:
                return np.zeros(m)
            return self.gain_at(k, m) * e2_history[src]
        raise KindError("pair_relation outputs are replayed, not computed")

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value}
        if self.map is not None:
            data["map"] = self.map.value
            data.update(self.params)
        if self.gains is not None:
            data["gains"] = self.gains.tolist()
        if self.kind is NonlinearityKind.DELAY_GAIN:
            data["delay"] = self.delay
        if self.e2 is not None and self.y2 is not None:
            data["e2"] = self.e2.to_list()
            data["y2"] = self.y2.to_list()
        return data


# ---------------------------------------------------------------------------
# Library
# ---------------------------------------------------------------------------


def static_map(name: Any, **params: float) -> Nonlinearity:
    key = StaticMap(name)
    if key in (StaticMap.SECTOR_SATURATION, StaticMap.SECTOR_TANH):
        if "a" not in params or "b" not in params:
            raise ParameterError(f"{key.value} needs sector bounds a and b")
        if not params["a"] < params["b"]:
            raise ParameterError(f"{key.value} needs a < b, got a={params['a']}, b={params['b']}")
    for name_ in ("level", "width"):
        if name_ in params and not params[name_] > 0.0:
            raise ParameterError(f"{key.value} needs {name_} > 0, got {params[name_]}")
    return Nonlinearity(NonlinearityKind.STATIC_MAP, map=key, params={k: float(v) for k, v in params.items()})


def gain(c: float) -> Nonlinearity:
    return static_map(StaticMap.GAIN, gain=c)


def saturation(level: float = 1.0) -> Nonlinearity:
    """clip(xi, -level, level); lies in the sector [0, 1]"""
    return static_map(StaticMap.SATURATION, level=level)


def deadzone(width: float = 1.0) -> Nonlinearity:
    return static_map(StaticMap.DEADZONE, width=width)


def sector_saturation(a: float, b: float, level: float = 1.0) -> Nonlinearity:
    """a xi + (b - a) sat(xi); lies in the sector [a, b]"""
    return static_map(StaticMap.SECTOR_SATURATION, a=a, b=b, level=level)


def sector_tanh(a: float, b: float) -> Nonlinearity:
    return static_map(StaticMap.SECTOR_TANH, a=a, b=b)


def time_varying_gain(gains: Any) -> Nonlinearity:
    return Nonlinearity(NonlinearityKind.TIME_VARYING_GAIN, gains=np.asarray(gains, dtype=float))


def delay_gain(gains: Any, delay: int = 1) -> Nonlinearity:
    return Nonlinearity(NonlinearityKind.DELAY_GAIN, gains=np.asarray(gains, dtype=float), delay=int(delay))


def pair_relation(e2: SignalLike, y2: SignalLike) -> Nonlinearity:
    return Nonlinearity(NonlinearityKind.PAIR_RELATION, e2=as_signal(e2), y2=as_signal(y2))


def from_witness(witness: Any, relation: bool = False) -> Nonlinearity:
    """
    Nonlinearity reproducing a violation witness: its per-step gains when the
    witness is operator-realizable (unless relation is set), else the recorded pair.
    """
    ch = witness.channels()
    if not relation and witness.gains is not None:
        return time_varying_gain(witness.gains)
    return pair_relation(ch["e2"], ch["y2"])


# ---------------------------------------------------------------------------
# Random sector members
# ---------------------------------------------------------------------------


def _rejection_gains(M: QuadSpec, shape: tuple, rng: np.random.Generator) -> np.ndarray:
    K = M.K
    radius = 10.0 * (1.0 + float(np.abs(K).max()))
    out = np.empty(shape)
    for idx in np.ndindex(*shape):
        for _ in range(REJECTION_TRIES):
            c = rng.uniform(-radius, radius)
            if K[0, 0] + 2.0 * K[0, 1] * c + K[1, 1] * c * c >= 0.0:
                out[idx] = c
                break
        else:
            raise ParameterError("no admissible gain found by rejection sampling for this M")
    return out


def random_sector_nonlinearity(
    M: QuadSpec,
    T: int,
    m: int,
    rng: np.random.Generator,
    kind: str = "time_varying_gain",
    weight: Weight = UNIT_WEIGHT,
) -> Nonlinearity:
    """
    Random member of the sector of M under the cumulative weight.

    kind = time_varying_gain: gains uniform in gain_interval(M) (rejection
    sampling on the pointwise form when M has no bounded interval);
    static: sector_saturation / sector_tanh over a random sub-interval;
    delay_gain: delayed gains, only for origin-centered sectors at rho = 1.
    """
    interval = gain_interval(M)
    shape = (T + 1, m)

    if kind == NonlinearityKind.TIME_VARYING_GAIN.value:
        if interval is None:
            return time_varying_gain(_rejection_gains(M, shape, rng))
        return time_varying_gain(rng.uniform(interval[0], interval[1], size=shape))

    if kind == "static":
        if interval is None:
            raise ParameterError("static sector maps need a bounded gain interval")
        lo, hi = interval
        a = rng.uniform(lo, hi)
        b = rng.uniform(a, hi)
        if not a < b:
            return gain(a)
        if rng.random() < 0.5:
            return sector_saturation(a, b, level=float(rng.uniform(0.1, 2.0)))
        return sector_tanh(a, b)

    if kind == NonlinearityKind.DELAY_GAIN.value:
        if not weight.is_unit:
            raise ParameterError(f"delayed gains are not in the sector for rho = {weight.rho} < 1")
        K = M.K
        if not (K[0, 1] == 0.0 and K[0, 0] >= 0.0 > K[1, 1]):
            raise ParameterError("delayed gains need an origin-centered sector (M12 = 0, M11 >= 0 > M22)")
        bound = float(np.sqrt(K[0, 0] / -K[1, 1]))
        delay = int(rng.integers(1, 4))
        return delay_gain(rng.uniform(-bound, bound, size=shape), delay=delay)

    raise KindError(f"unknown random nonlinearity kind {kind!r}")
