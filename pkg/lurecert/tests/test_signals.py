"""
Unit tests for finite-horizon signals and cumulative semi-inner products.
"""

import numpy as np
import pytest

from lurecert.engine.errors import DimensionError, HorizonError, MatrixError, ParameterError
from lurecert.engine.signals import (
    Signal,
    SipConfig,
    Weight,
    cumulative_quad_forms,
    quad_form,
    scale_signal,
    seminorm,
    sip,
    split_channels,
    stack_channels,
    truncate,
    weight_sequence,
)


class TestSignal:
    """Test the Signal value type"""

    def test_scalar_shape(self):
        """Test that flat input becomes a scalar signal"""
        x = Signal.from_array([1.0, 2.0, 3.0])
        assert x.dim == 1
        assert x.horizon == 2
        assert len(x) == 3

    def test_read_only(self):
        """Test that signal data cannot be modified in place"""
        x = Signal.from_array([1.0, 2.0])
        with pytest.raises(ValueError):
            x.data[0, 0] = 5.0

    def test_empty_rejected(self):
        """Test that empty signals are refused"""
        with pytest.raises(HorizonError):
            Signal.from_array(np.zeros((0, 1)))

    def test_equality_and_hash(self):
        """Test value semantics"""
        a = Signal.from_array([1.0, 2.0])
        b = Signal.from_array([[1.0], [2.0]])
        assert a == b
        assert hash(a) == hash(b)
        assert a != Signal.from_array([1.0, 2.5])

    def test_arithmetic(self):
        """Test addition, subtraction and scaling"""
        a = Signal.from_array([1.0, 2.0])
        b = Signal.from_array([3.0, 4.0])
        assert (a + b) == Signal.from_array([4.0, 6.0])
        assert (b - a) == Signal.from_array([2.0, 2.0])
        assert (2.0 * a) == Signal.from_array([2.0, 4.0])
        assert (-a) == Signal.from_array([-1.0, -2.0])
        with pytest.raises(DimensionError):
            a + Signal.from_array([1.0, 2.0, 3.0])

    def test_stacked_layout(self):
        """Test time-major stacking"""
        x = Signal.from_array([[1.0, 2.0], [3.0, 4.0]])
        assert x.stacked().tolist() == [1.0, 2.0, 3.0, 4.0]
        assert Signal.from_stacked(x.stacked(), 2) == x
        with pytest.raises(DimensionError):
            Signal.from_stacked([1.0, 2.0, 3.0], 2)


class TestWeight:
    """Test the exponential weight"""

    def test_range(self):
        """Test that rho must lie in (0, 1]"""
        assert Weight(1.0).is_unit
        assert not Weight(0.5).is_unit
        for bad in (0.0, -0.5, 1.5, float("nan")):
            with pytest.raises(ParameterError):
                Weight(bad)

    def test_horizon_validation(self):
        """Test that negative or fractional horizons are refused"""
        with pytest.raises(HorizonError):
            SipConfig(-1)
        with pytest.raises(HorizonError):
            SipConfig(1.5)

    def test_weight_sequence(self):
        """Test rho^{-2k} weights"""
        assert weight_sequence(SipConfig(2, Weight(0.5))).tolist() == [1.0, 4.0, 16.0]

    def test_weight_overflow(self):
        """Test that overflowing weights raise instead of saturating"""
        with pytest.raises(HorizonError):
            weight_sequence(SipConfig(2000, Weight(0.5)))


class TestSemiInnerProduct:
    """Test sip, seminorm and truncation"""

    def test_unweighted(self):
        """Test the plain cumulative product"""
        x = Signal.from_array([1.0, 2.0])
        y = Signal.from_array([3.0, 4.0])
        assert sip(x, y, SipConfig(1)) == pytest.approx(11.0)

    def test_weighted(self):
        """Test that the k-th term is weighted by rho^{-2k}"""
        x = Signal.from_array([1.0, 1.0])
        assert sip(x, x, SipConfig(1, Weight(0.5))) == pytest.approx(5.0)
        assert seminorm(x, SipConfig(1, Weight(0.5))) == pytest.approx(np.sqrt(5.0))

    def test_zero_signal(self):
        """Test bilinearity at zero"""
        x = Signal.zeros(3)
        y = Signal.from_array([1.0, -2.0, 3.0, 4.0])
        assert sip(x, y, SipConfig(3, Weight(0.7))) == 0.0

    def test_seminorm(self):
        """Test the 3-4-5 case"""
        assert seminorm(Signal.from_array([3.0, 4.0]), SipConfig(1)) == pytest.approx(5.0)

    def test_horizon_beyond_signal(self):
        """Test that T past the signal end is an error"""
        x = Signal.from_array([1.0, 2.0])
        with pytest.raises(HorizonError):
            sip(x, x, SipConfig(2))

    def test_dimension_mismatch(self):
        """Test that signals of different dims cannot be paired"""
        with pytest.raises(DimensionError):
            sip(Signal.from_array([1.0]), Signal.from_array([[1.0, 2.0]]), SipConfig(0))

    def test_truncate(self):
        """Test truncation and zero padding"""
        x = Signal.from_array([1.0, 2.0, 3.0])
        assert truncate(x, 1).data[:, 0].tolist() == [1.0, 2.0, 0.0]
        assert truncate(x, 5).data[:, 0].tolist() == [1.0, 2.0, 3.0, 0.0, 0.0, 0.0]

    def test_truncation_reduces_horizon(self):
        """Test that the seminorm at T only sees x up to T"""
        rng = np.random.default_rng(0)
        x = Signal.from_array(rng.standard_normal(10))
        cfg = SipConfig(4, Weight(0.9))
        assert seminorm(x, cfg) == pytest.approx(seminorm(truncate(x, 4), cfg))

    def test_scaling_equivalence(self):
        """Test that the weighted product equals the unweighted one of scaled signals"""
        rng = np.random.default_rng(1)
        x = Signal.from_array(rng.standard_normal((8, 2)))
        y = Signal.from_array(rng.standard_normal((8, 2)))
        rho = Weight(0.8)
        lhs = sip(x, y, SipConfig(7, rho))
        rhs = sip(scale_signal(x, rho), scale_signal(y, rho), SipConfig(7))
        assert lhs == pytest.approx(rhs, rel=1e-12)
        assert scale_signal(scale_signal(x, rho), rho, inverse=True).data == pytest.approx(x.data)

    def test_channel_stacking(self):
        """Test that two-channel seminorms add in squares"""
        a = Signal.from_array([3.0, 0.0])
        b = Signal.from_array([0.0, 4.0])
        both = stack_channels(a, b)
        assert both.dim == 2
        assert seminorm(both, SipConfig(1)) == pytest.approx(5.0)
        assert split_channels(both, 1) == (a, b)


class TestQuadForm:
    """Test the 2x2 quadratic form on signal pairs"""

    def test_identity(self):
        """Test the identity form"""
        one = Signal.from_array([1.0])
        assert quad_form(one, one, np.eye(2), SipConfig(0)) == pytest.approx(2.0)

    def test_diagonal(self):
        """Test a diagonal form"""
        w, xi = Signal.from_array([2.0]), Signal.from_array([1.0])
        assert quad_form(w, xi, [[-1.0, 0.0], [0.0, 1.0]], SipConfig(0)) == pytest.approx(-3.0)

    def test_cross_term(self):
        """Test a pure cross term"""
        one = Signal.from_array([1.0])
        assert quad_form(one, one, [[0.0, 0.5], [0.5, 0.0]], SipConfig(0)) == pytest.approx(1.0)

    def test_non_symmetric(self):
        """Test that a non-symmetric K is refused"""
        one = Signal.from_array([1.0])
        with pytest.raises(MatrixError):
            quad_form(one, one, [[0.0, 1.0], [0.0, 0.0]], SipConfig(0))

    def test_cumulative_forms(self):
        """Test that running forms end at the full-horizon value"""
        rng = np.random.default_rng(2)
        w = Signal.from_array(rng.standard_normal(6))
        xi = Signal.from_array(rng.standard_normal(6))
        K = [[1.0, -0.5], [-0.5, 2.0]]
        cfg = SipConfig(5, Weight(0.9))
        running = cumulative_quad_forms(w, xi, K, cfg)
        assert running.shape == (6,)
        for t in range(6):
            assert running[t] == pytest.approx(quad_form(w, xi, K, SipConfig(t, Weight(0.9))))
