"""
Finite-horizon signals and (weighted) cumulative semi-inner products

A Signal is the computable face of an element of the extended space: a finite
sequence x[0..T] of real m-vectors, implicitly zero beyond T. The weighted
cumulative semi-inner product

    <x, y>_{rho,T} = sum_{k=0}^{T} rho^{-2k} <x[k], y[k]>

reduces to the plain cumulative product when rho = 1.
"""

from dataclasses import dataclass
from typing import Any, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionError, HorizonError, MatrixError, ParameterError


@dataclass(frozen=True)
class Weight:
    """Exponential weight rho in (0, 1]; rho = 1 is the unweighted case"""

    rho: float = 1.0

    def __post_init__(self):
        rho = float(self.rho)
        if not np.isfinite(rho) or not (0.0 < rho <= 1.0):
            raise ParameterError(f"rho must lie in (0, 1], got {self.rho}")
        object.__setattr__(self, "rho", rho)

    @property
    def is_unit(self) -> bool:
        return self.rho == 1.0


UNIT_WEIGHT = Weight(1.0)


@dataclass(frozen=True)
class SipConfig:
    """Horizon T and weight of a cumulative semi-inner product"""

    horizon: int
    weight: Weight = UNIT_WEIGHT

    def __post_init__(self):
        if int(self.horizon) != self.horizon or self.horizon < 0:
            raise HorizonError(f"horizon must be an integer >= 0, got {self.horizon}")
        object.__setattr__(self, "horizon", int(self.horizon))
        if not isinstance(self.weight, Weight):
            object.__setattr__(self, "weight", Weight(float(self.weight)))


@dataclass(frozen=True, eq=False)
class Signal:
    """
    Finite-horizon vector sequence x[0..T], stored as a read-only (T+1, m) array.

    One-dimensional input is read as a scalar signal (m = 1).
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise DimensionError(
                f"signal data must be a sequence of vectors, got shape {arr.shape}"
            )
        if arr.shape[0] == 0:
            raise HorizonError("empty signals (T < 0) are not allowed")
        if arr.shape[1] == 0:
            raise DimensionError("signal vectors must have dimension m >= 1")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def dim(self) -> int:
        return int(self.data.shape[1])

    @property
    def horizon(self) -> int:
        return int(self.data.shape[0]) - 1

    def __len__(self) -> int:
        return int(self.data.shape[0])

    def __getitem__(self, k: int) -> np.ndarray:
        return self.data[k]

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(
            np.array_equal(self.data, other.data)
        )

    def __hash__(self) -> int:
        return hash((self.data.shape, self.data.tobytes()))

    def __add__(self, other: "Signal") -> "Signal":
        _check_same_shape(self, other)
        return Signal(self.data + other.data)

    def __sub__(self, other: "Signal") -> "Signal":
        _check_same_shape(self, other)
        return Signal(self.data - other.data)

    def __mul__(self, scalar: float) -> "Signal":
        return Signal(self.data * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Signal":
        return Signal(-self.data)

    @classmethod
    def zeros(cls, horizon: int, dim: int = 1) -> "Signal":
        if horizon < 0:
            raise HorizonError("empty signals (T < 0) are not allowed")
        return cls(np.zeros((horizon + 1, dim)))

    @classmethod
    def from_array(cls, values: ArrayLike) -> "Signal":
        return cls(np.asarray(values, dtype=float))

    def to_array(self) -> np.ndarray:
        """Writable copy of the (T+1, m) data"""
        return np.array(self.data)

    def stacked(self) -> np.ndarray:
        """Time-major stacked vector (x[0], x[1], ..., x[T]) of length m(T+1)"""
        return self.data.reshape(-1).copy()

    @classmethod
    def from_stacked(cls, vector: ArrayLike, dim: int) -> "Signal":
        vec = np.asarray(vector, dtype=float).reshape(-1)
        if dim <= 0 or vec.size % dim != 0:
            raise DimensionError(
                f"stacked vector of length {vec.size} is not a multiple of dim {dim}"
            )
        return cls(vec.reshape(-1, dim))

    def to_list(self) -> list:
        return self.data.tolist()


SignalLike = Union[Signal, ArrayLike]


def as_signal(x: SignalLike) -> Signal:
    return x if isinstance(x, Signal) else Signal(np.asarray(x, dtype=float))


def _check_same_shape(x: Signal, y: Signal) -> None:
    if x.data.shape != y.data.shape:
        raise DimensionError(
            f"signal shapes differ: {x.data.shape} vs {y.data.shape}"
        )


def weight_sequence(cfg: SipConfig) -> np.ndarray:
    """
    Weights rho^{-2k} for k = 0..T, built by running product.

    Raises HorizonError instead of saturating when rho^{-2T} overflows.
    """
    factor = cfg.weight.rho ** -2
    if cfg.weight.is_unit:
        return np.ones(cfg.horizon + 1)
    steps = np.full(cfg.horizon + 1, factor)
    steps[0] = 1.0
    with np.errstate(over="ignore"):
        weights = np.cumprod(steps)
    if not np.all(np.isfinite(weights)):
        raise HorizonError(
            f"rho^(-2T) overflows for rho={cfg.weight.rho}, T={cfg.horizon}"
        )
    return weights


def scale_signal(x: Signal, rho: Union[Weight, float], inverse: bool = False) -> Signal:
    """
    Return x_bar[k] = rho^{-k} x[k] (or rho^{k} x[k] when inverse is set).

    sip(x, y, {T, rho}) equals sip(x_bar, y_bar, {T, 1}).
    """
    r = rho.rho if isinstance(rho, Weight) else Weight(rho).rho
    if r == 1.0:
        return x
    base = r if inverse else 1.0 / r
    steps = np.full(len(x), base)
    steps[0] = 1.0
    with np.errstate(over="ignore"):
        factors = np.cumprod(steps)
    if not np.all(np.isfinite(factors)):
        raise HorizonError(f"rho^(-T) overflows for rho={r}, T={x.horizon}")
    return Signal(x.data * factors[:, None])


def _check_pair(x: Signal, y: Signal, cfg: SipConfig) -> None:
    if x.dim != y.dim:
        raise DimensionError(f"signal dimensions differ: {x.dim} vs {y.dim}")
    if cfg.horizon > min(x.horizon, y.horizon):
        raise HorizonError(
            f"horizon {cfg.horizon} exceeds signal horizon "
            f"{min(x.horizon, y.horizon)}"
        )


def sip(x: Signal, y: Signal, cfg: SipConfig) -> float:
    """Weighted cumulative semi-inner product <x, y>_{rho,T}"""
    _check_pair(x, y, cfg)
    T = cfg.horizon
    w = weight_sequence(cfg)
    products = np.einsum("km,km->k", x.data[: T + 1], y.data[: T + 1])
    return float(np.dot(w, products))


def seminorm(x: Signal, cfg: SipConfig) -> float:
    """Associated semi-norm ||x||_{rho,T}"""
    value = sip(x, x, cfg)
    return float(np.sqrt(max(value, 0.0)))


def truncate(x: Signal, T: int) -> Signal:
    """x_T: agrees with x up to index T and is zero beyond, length max(horizon, T)+1"""
    if T < 0:
        raise HorizonError(f"truncation index must be >= 0, got {T}")
    out = np.zeros((max(x.horizon, T) + 1, x.dim))
    keep = min(x.horizon, T) + 1
    out[:keep] = x.data[:keep]
    return Signal(out)


def stack_channels(a: Signal, b: Signal) -> Signal:
    """Augmented two-channel signal (a; b); its seminorm is sqrt(||a||^2 + ||b||^2)"""
    if a.horizon != b.horizon:
        raise HorizonError(
            f"channels must share a horizon: {a.horizon} vs {b.horizon}"
        )
    return Signal(np.hstack([a.data, b.data]))


def split_channels(x: Signal, first_dim: int) -> Tuple[Signal, Signal]:
    if not 0 < first_dim < x.dim:
        raise DimensionError(f"cannot split a {x.dim}-dim signal at {first_dim}")
    return Signal(x.data[:, :first_dim]), Signal(x.data[:, first_dim:])


def as_symmetric_2x2(K: Any) -> np.ndarray:
    """Validate a symmetric, finite 2x2 matrix (accepts objects exposing .K)"""
    mat = np.asarray(getattr(K, "K", K), dtype=float)
    if mat.shape != (2, 2):
        raise MatrixError(f"expected a 2x2 matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise MatrixError("matrix entries must be finite")
    if mat[0, 1] != mat[1, 0]:
        raise MatrixError(
            f"matrix is not symmetric: K12={mat[0, 1]!r}, K21={mat[1, 0]!r}"
        )
    return mat


def quad_form(w: Signal, xi: Signal, K: Any, cfg: SipConfig) -> float:
    """
    <[w; xi], K [w; xi]> = K11 <w,w> + 2 K12 <w,xi> + K22 <xi,xi> under cfg.
    """
    mat = as_symmetric_2x2(K)
    _check_pair(w, xi, cfg)
    return (
        mat[0, 0] * sip(w, w, cfg)
        + 2.0 * mat[0, 1] * sip(w, xi, cfg)
        + mat[1, 1] * sip(xi, xi, cfg)
    )


def cumulative_quad_forms(w: Signal, xi: Signal, K: Any, cfg: SipConfig) -> np.ndarray:
    """quad_form at every horizon t = 0..cfg.horizon (running weighted sums)"""
    mat = as_symmetric_2x2(K)
    _check_pair(w, xi, cfg)
    T = cfg.horizon
    wts = weight_sequence(cfg)
    ww = np.einsum("km,km->k", w.data[: T + 1], w.data[: T + 1])
    wx = np.einsum("km,km->k", w.data[: T + 1], xi.data[: T + 1])
    xx = np.einsum("km,km->k", xi.data[: T + 1], xi.data[: T + 1])
    terms = wts * (mat[0, 0] * ww + 2.0 * mat[0, 1] * wx + mat[1, 1] * xx)
    return np.cumsum(terms)

