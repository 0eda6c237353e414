"""
Unit tests for loop simulation, sector checks and decay verification.
"""

import numpy as np
import pytest

from lurecert.engine.certify import best_rate, gradient_method_lure
from lurecert.engine.errors import (
    DimensionError,
    HorizonError,
    InputError,
    KindError,
    ParameterError,
    ReplayError,
    WellPosednessError,
)
from lurecert.engine.lti import StateSpace
from lurecert.engine.nonlinearity import (
    NonlinearityKind,
    deadzone,
    delay_gain,
    gain,
    pair_relation,
    random_sector_nonlinearity,
    saturation,
    sector_saturation,
    sector_tanh,
    time_varying_gain,
)
from lurecert.engine.sector import Feedback, phi_spec, sector_interval_to_M
from lurecert.engine.signals import Signal, SipConfig, Weight
from lurecert.engine.simulator import (
    check_pointwise_sector,
    cumulative_sector_margin,
    empirical_gain,
    interconnect,
    verify_exponential_decay,
)


@pytest.fixture
def unit_ball():
    return phi_spec([[1.0, 0.0], [0.0, -1.0]])


@pytest.fixture(scope="module")
def gradient_rate():
    """Certified rate of the alpha = 2/11 gradient loop on [1, 10]"""
    G, M = gradient_method_lure(1.0, 10.0, 2.0 / 11.0)
    res = best_rate(G, M, 0.6, 1.0, tol=1e-3, T_max=64)
    assert res is not None
    return res.rho_star


def _zeros(T):
    return Signal.zeros(T)


class TestInterconnect:
    """Test per-step loop resolution"""

    def test_open_loop(self):
        """Test that Phi = 0 leaves y1 = G u1"""
        G = StateSpace(A=[[0.5]], B=[[1.0]], C=[[1.0]], D=[[0.0]])
        u1 = Signal.from_array([1.0, 0.0, 0.0])
        traj = interconnect(G, gain(0.0), u1, _zeros(2))
        assert traj.y1.data[:, 0].tolist() == pytest.approx([0.0, 1.0, 0.5])
        assert traj.y2.data[:, 0].tolist() == [0.0, 0.0, 0.0]
        assert traj.e2.data[:, 0].tolist() == pytest.approx([0.0, 1.0, 0.5])
        assert traj.residual <= 1e-10

    def test_static_algebraic_loop(self):
        """Test the exact solve for G = 2, Phi = 0.49"""
        eps = 1e-3
        traj = interconnect(
            StateSpace.static([[2.0]]), gain(0.49), Signal.from_array([eps]), Signal.zeros(0)
        )
        assert traj.e2.data[0, 0] == pytest.approx(100.0 * eps)
        assert traj.y2.data[0, 0] == pytest.approx(49.0 * eps)

    def test_fixed_point_matches_exact(self):
        """Test that the damped iteration agrees with the exact linear solve"""
        G = StateSpace(A=[[0.3]], B=[[1.0]], C=[[0.5]], D=[[0.4]])
        rng = np.random.default_rng(8)
        u1 = Signal.from_array(rng.standard_normal(10))
        u2 = Signal.from_array(rng.standard_normal(10))
        linear = interconnect(G, gain(0.5), u1, u2)
        # same map, but routed through the nonlinear path
        iterated = interconnect(G, sector_saturation(0.5, 0.5 + 1e-12, level=1e9), u1, u2)
        assert iterated.y.data == pytest.approx(linear.y.data, rel=1e-8, abs=1e-9)

    def test_gradient_recursion(self):
        """Test x_k = (1 - 20/11)^k for the gradient loop with Phi = 10 xi"""
        G, _ = gradient_method_lure(1.0, 10.0, 2.0 / 11.0)
        traj = interconnect(G, gain(10.0), _zeros(12), _zeros(12), x0=[1.0])
        expected = (1.0 - 20.0 / 11.0) ** np.arange(13)
        assert traj.states[:13, 0] == pytest.approx(expected, rel=1e-12)

    def test_negative_feedback(self):
        """Test that e1 = u1 - y2 under the negative convention"""
        G = StateSpace.static([[1.0]])
        traj = interconnect(
            G, gain(1.0), Signal.from_array([1.0]), Signal.zeros(0), feedback=Feedback.NEGATIVE
        )
        assert traj.e1.data[0, 0] == pytest.approx(0.5)
        assert traj.y2.data[0, 0] == pytest.approx(0.5)

    def test_delay_gain(self):
        """Test that a strictly causal Phi reads e2 one step late"""
        G = StateSpace.static([[1.0]])
        phi = delay_gain([1.0, 1.0, 1.0], delay=1)
        traj = interconnect(G, phi, Signal.from_array([1.0, 0.0, 0.0]), _zeros(2))
        assert traj.y2.data[:, 0].tolist() == [0.0, 1.0, 1.0]
        assert traj.e1.data[:, 0].tolist() == [1.0, 1.0, 1.0]

    def test_singular_loop(self):
        """Test that 1 - D c = 0 is ill-posed"""
        with pytest.raises(WellPosednessError):
            interconnect(StateSpace.static([[2.0]]), gain(0.5), Signal.from_array([1.0]), Signal.zeros(0))

    def test_divergent_iteration(self):
        """Test that a non-contracting static loop is reported"""
        G = StateSpace.static([[4.0]])
        with pytest.raises(WellPosednessError):
            interconnect(G, sector_tanh(1.0, 2.0), Signal.from_array([1.0]), Signal.zeros(0))

    def test_horizon_checks(self):
        """Test horizons beyond the inputs or the nonlinearity"""
        G = StateSpace.static([[0.5]])
        u = Signal.from_array([1.0, 2.0])
        with pytest.raises(HorizonError):
            interconnect(G, gain(0.1), u, u, T=5)
        with pytest.raises(HorizonError):
            interconnect(G, time_varying_gain([0.1]), u, u, T=1)

    def test_dimension_checks(self):
        """Test mismatched channel dimensions"""
        G = StateSpace.static(np.eye(2))
        u = Signal.from_array([1.0, 2.0])
        with pytest.raises(DimensionError):
            interconnect(G, gain(0.1), u, u)

    def test_columns(self):
        """Test the CSV column layout"""
        G = StateSpace(A=[[0.5]], B=[[1.0]], C=[[1.0]], D=[[0.0]])
        traj = interconnect(G, gain(0.2), Signal.from_array([1.0, 0.0]), _zeros(1))
        cols = traj.to_columns()
        assert list(cols) == ["k", "e1", "e2", "y1", "y2", "x0"]
        assert cols["k"].tolist() == [0, 1]


class TestRelationReplay:
    """Test recorded (e2, y2) relations"""

    def test_replay(self):
        """Test that the recording input reproduces the relation"""
        G = StateSpace.static([[1.0]])
        u1 = Signal.from_array([1.0, 2.0])
        u2 = Signal.zeros(1)
        base = interconnect(G, time_varying_gain([0.5, 0.25]), u1, u2)
        phi = pair_relation(base.e2, base.y2)
        replay = interconnect(G, phi, u1, u2)
        assert replay.y.data == pytest.approx(base.y.data)

    def test_other_input_refused(self):
        """Test that an input driving e2 off the record raises"""
        G = StateSpace.static([[1.0]])
        u1 = Signal.from_array([1.0, 2.0])
        base = interconnect(G, time_varying_gain([0.5, 0.25]), u1, Signal.zeros(1))
        phi = pair_relation(base.e2, base.y2)
        with pytest.raises(ReplayError):
            interconnect(G, phi, Signal.from_array([3.0, 2.0]), Signal.zeros(1))


class TestSectorChecks:
    """Test pointwise and cumulative sector membership"""

    def test_saturation(self):
        """Test that saturation lies in [0, 1]"""
        assert check_pointwise_sector(saturation(1.0), sector_interval_to_M(0.0, 1.0))

    def test_deadzone(self):
        """Test that a deadzone lies in [0, 1]"""
        assert check_pointwise_sector(deadzone(0.5), sector_interval_to_M(0.0, 1.0))

    def test_gain_outside(self, unit_ball):
        """Test that a gain 2 leaves the unit ball"""
        assert not check_pointwise_sector(gain(2.0), unit_ball)

    def test_sector_maps(self):
        """Test the sector-bounded library maps in their own sectors"""
        M = sector_interval_to_M(-0.5, 2.0)
        assert check_pointwise_sector(sector_saturation(-0.5, 2.0, level=0.3), M)
        assert check_pointwise_sector(sector_tanh(-0.5, 2.0), M)

    def test_time_varying(self, unit_ball):
        """Test per-step gains, one of them outside"""
        assert check_pointwise_sector(time_varying_gain([0.5, -1.0, 1.0]), unit_ball)
        assert not check_pointwise_sector(time_varying_gain([0.5, 1.5]), unit_ball)

    def test_not_applicable(self, unit_ball):
        """Test that relations and delays are not checked pointwise"""
        with pytest.raises(KindError):
            check_pointwise_sector(pair_relation([1.0], [0.5]), unit_ball)
        with pytest.raises(KindError):
            check_pointwise_sector(delay_gain([0.5, 0.5]), unit_ball)

    def test_cumulative_margin(self, unit_ball):
        """Test the running sector form along a trajectory"""
        G = StateSpace.static([[0.5]])
        traj = interconnect(G, gain(0.5), Signal.from_array([1.0, 1.0]), Signal.zeros(1))
        assert cumulative_sector_margin(traj, unit_ball, SipConfig(1)) >= 0.0
        traj = interconnect(G, gain(1.5), Signal.from_array([1.0, 1.0]), Signal.zeros(1))
        assert cumulative_sector_margin(traj, unit_ball, SipConfig(1)) < 0.0


class TestRandomNonlinearities:
    """Test random sector members"""

    @pytest.mark.parametrize("kind", ["time_varying_gain", "static"])
    def test_pointwise_members(self, kind):
        """Test that sampled maps satisfy the pointwise sector"""
        rng = np.random.default_rng(13)
        M = sector_interval_to_M(-0.5, 2.0)
        for _ in range(20):
            phi = random_sector_nonlinearity(M, 10, 1, rng, kind=kind)
            assert check_pointwise_sector(phi, M, samples=200)

    def test_delay_members(self, unit_ball):
        """Test that delayed gains satisfy the cumulative sector"""
        rng = np.random.default_rng(14)
        G = StateSpace(A=[[0.5]], B=[[1.0]], C=[[0.4]], D=[[0.2]])
        for _ in range(10):
            phi = random_sector_nonlinearity(unit_ball, 15, 1, rng, kind="delay_gain")
            assert phi.kind is NonlinearityKind.DELAY_GAIN
            assert phi.strictly_causal
            u1 = Signal.from_array(rng.standard_normal(16))
            traj = interconnect(G, phi, u1, Signal.zeros(15))
            assert cumulative_sector_margin(traj, unit_ball, SipConfig(15)) >= -1e-9

    def test_unbounded_sector_rejection(self):
        """Test rejection sampling when the gain set is unbounded"""
        rng = np.random.default_rng(15)
        M = phi_spec([[0.0, 0.5], [0.5, 0.0]])
        phi = random_sector_nonlinearity(M, 20, 1, rng)
        assert np.all(phi.gains >= 0.0)

    def test_refusals(self):
        """Test unsupported combinations"""
        rng = np.random.default_rng(16)
        with pytest.raises(ParameterError):
            random_sector_nonlinearity(sector_interval_to_M(0.0, 1.0), 5, 1, rng, kind="delay_gain")
        with pytest.raises(KindError):
            random_sector_nonlinearity(sector_interval_to_M(0.0, 1.0), 5, 1, rng, kind="chaos")

    def test_delay_needs_unit_weight(self, unit_ball):
        """Test that delayed gains are refused under a decaying weight"""
        rng = np.random.default_rng(17)
        with pytest.raises(ParameterError, match="rho = 0.9"):
            random_sector_nonlinearity(unit_ball, 5, 1, rng, kind="delay_gain", weight=Weight(0.9))
        phi = random_sector_nonlinearity(unit_ball, 5, 1, rng, kind="delay_gain", weight=Weight(1.0))
        assert phi.kind is NonlinearityKind.DELAY_GAIN
        phi = random_sector_nonlinearity(unit_ball, 5, 1, rng, weight=Weight(0.9))
        assert phi.kind is NonlinearityKind.TIME_VARYING_GAIN


class TestEmpiricalGain:
    """Test ||y|| / ||u|| estimation"""

    def test_open_loop_gain(self):
        """Test that Phi = 0 around a static 2 gives exactly 2"""
        rng = np.random.default_rng(17)
        G = StateSpace.static([[2.0]])
        inputs = [(Signal.from_array(rng.standard_normal(8)), Signal.zeros(7)) for _ in range(3)]
        assert empirical_gain(G, gain(0.0), inputs, 7) == pytest.approx(2.0)

    def test_weighted(self):
        """Test the weighted ratio on an impulse"""
        G = StateSpace.static([[2.0]])
        inputs = [(Signal.from_array([1.0, 0.0, 0.0]), Signal.zeros(2))]
        assert empirical_gain(G, gain(0.0), inputs, 2, weight=Weight(0.5)) == pytest.approx(2.0)

    def test_zero_inputs(self):
        """Test that only zero inputs is an error"""
        G = StateSpace.static([[2.0]])
        with pytest.raises(InputError):
            empirical_gain(G, gain(0.0), [(Signal.zeros(3), Signal.zeros(3))], 3)


class TestDecay:
    """Test exponential decay of autonomous loops"""

    @pytest.mark.parametrize("slope", [10.0, 1.0])
    def test_extreme_quadratics(self, slope):
        """Test c_fit = 1 at rho = 9/11 for both sector edges"""
        G, _ = gradient_method_lure(1.0, 10.0, 2.0 / 11.0)
        res = verify_exponential_decay(G, gain(slope), Weight(9.0 / 11.0), [[1.0], [-3.0]], 60)
        assert res.c_fit == pytest.approx(1.0, rel=1e-9)
        assert res.passed

    def test_sector_saturation(self):
        """Test a nonlinear gradient inside [1, 10] at a slightly slower rate"""
        G, _ = gradient_method_lure(1.0, 10.0, 2.0 / 11.0)
        phi = sector_saturation(1.0, 10.0, level=1.0)
        res = verify_exponential_decay(G, phi, Weight(9.0 / 11.0 * 1.001), [[5.0], [-0.5]], 100)
        assert res.c_fit <= 1.0 + 1e-9
        assert res.passed

    def test_too_fast(self):
        """Test that a rate below the contraction factor fails"""
        G, _ = gradient_method_lure(1.0, 10.0, 2.0 / 11.0)
        res = verify_exponential_decay(G, gain(10.0), Weight(0.95 * 9.0 / 11.0), [[1.0]], 60)
        assert not res.passed
        assert res.c_fit > 1.0
        assert res.slopes[0] == pytest.approx(-np.log(0.95), rel=1e-6)

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "phi", [gain(1.0), gain(10.0), sector_saturation(1.0, 10.0, level=1.0)], ids=["m", "L", "saturation"]
    )
    def test_decay_at_certified_rate(self, gradient_rate, phi):
        """Test decay just above the certified rate and failure well below it"""
        G, _ = gradient_method_lure(1.0, 10.0, 2.0 / 11.0)
        x0 = [[1.0], [-3.0], [50.0]]
        res = verify_exponential_decay(G, phi, Weight(1.001 * gradient_rate), x0, 100)
        assert res.passed
        assert res.c_fit <= 1.1
        res = verify_exponential_decay(G, phi, Weight(0.95 * gradient_rate), x0, 100)
        assert not res.passed

    def test_report(self):
        """Test the decay report"""
        G, _ = gradient_method_lure(1.0, 10.0, 2.0 / 11.0)
        report = verify_exponential_decay(G, gain(1.0), Weight(0.9), [[1.0]], 10).to_report()
        assert set(report) == {"c_fit", "pass", "slopes"}

    def test_arguments(self):
        """Test K and x0 checks"""
        G, _ = gradient_method_lure(1.0, 10.0, 2.0 / 11.0)
        with pytest.raises(ParameterError):
            verify_exponential_decay(G, gain(1.0), Weight(0.9), [[1.0]], 0)
        with pytest.raises(InputError):
            verify_exponential_decay(G, gain(1.0), Weight(0.9), [], 10)
        with pytest.raises(InputError):
            verify_exponential_decay(G, gain(1.0), Weight(0.9), [[0.0]], 10)
