import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from relaychain import ChainParams, QuantLevels, assemble_joint, scenario_params, validate
from relaychain.errors import DegenerateCorrelation, InvalidParameters

from conftest import quant_levels, valid_params


class TestValidate:
    def test_all_zero(self):
        assert validate(ChainParams(3.0, -2.0, 0.5)) is None

    def test_out_of_range(self):
        assert "correlation out of range" in validate(ChainParams(1, 1, 1, rho12=1.2))

    def test_not_psd(self):
        assert "K_Z not PSD" in validate(ChainParams(1, 1, 1, 0.9, 0.9, -0.9))

    def test_nan(self):
        assert validate(ChainParams(1, 1, 1, rho13=float("nan"))) is not None

    def test_boundary_psd(self):
        assert validate(ChainParams(1, 1, 1, rho12=1.0)) is None


class TestScenario:
    def test_uncorrelated(self):
        p = scenario_params(100.0, 0.0)
        assert (p.h2_sq, p.h3_sq) == (pytest.approx(100.0), pytest.approx(100.0))
        assert (p.rho12, p.rho13, p.rho23) == (0.0, 0.0, 0.0)

    def test_fig2_point(self):
        p = scenario_params(100.0, math.sqrt(0.75))
        assert p.h2_sq == pytest.approx(400.0, rel=1e-12)
        assert p.h3_sq == pytest.approx(400.0, rel=1e-12)

    def test_substitution(self):
        p = scenario_params(1.0, 0.6)
        assert p.h2_sq == pytest.approx(1.5625, rel=1e-14)
        assert p.h2 > 0 and p.h3 > 0

    @pytest.mark.parametrize("rho", [1.0, -1.0, 1.5])
    def test_degenerate(self, rho):
        with pytest.raises(DegenerateCorrelation):
            scenario_params(10.0, rho)

    @given(st.floats(1e-3, 1e6), st.floats(-(1 - 1e-9), 1 - 1e-9))
    def test_always_valid(self, h1_sq, rho):
        assert validate(scenario_params(h1_sq, rho)) is None


class TestAssembleJoint:
    def test_entries(self):
        p = ChainParams.from_powers(4.0, 9.0, 16.0, 0.3, -0.2, 0.1)
        j = assemble_joint(p, QuantLevels(0.5, 2.0))
        K = dict(zip(j.labels, range(8)))
        c = j.cov
        assert c[K["Y1"], K["Y1"]] == 5.0
        assert c[K["Y1"], K["Y2"]] == 0.3
        assert c[K["Yh1"], K["Yh1"]] == 5.5
        assert c[K["Yh2"], K["Yh2"]] == 12.0
        assert c[K["Yh1"], K["Y1"]] == 5.0
        assert c[K["X"], K["Yh1"]] == 2.0
        assert c[K["X2"], K["Y3"]] == 4.0

    def test_invalid_params_rejected(self):
        with pytest.raises(InvalidParameters):
            assemble_joint(ChainParams(1, 1, 1, 0.9, 0.9, -0.9), QuantLevels(1, 1))

    def test_noise_block_exact_for_dyadic_gains(self):
        p = ChainParams(0.5, 2.0, 3.0, 0.25, -0.125, 0.5)
        j = assemble_joint(p, QuantLevels(1.0, 1.0))
        T = np.zeros((3, 8))
        for i, (y, x, h) in enumerate([(3, 0, p.h1), (4, 1, p.h2), (5, 2, p.h3)]):
            T[i, y], T[i, x] = 1.0, -h
        np.testing.assert_array_equal(T @ j.cov @ T.T, p.noise_cov())

    @given(valid_params(), quant_levels)
    def test_noise_block_reconstructed(self, p, q):
        j = assemble_joint(p, q)
        T = np.zeros((3, 8))
        for i, (y, x, h) in enumerate([(3, 0, p.h1), (4, 1, p.h2), (5, 2, p.h3)]):
            T[i, y], T[i, x] = 1.0, -h
        scale = 1.0 + max(p.h1_sq, p.h2_sq, p.h3_sq)
        np.testing.assert_allclose(T @ j.cov @ T.T, p.noise_cov(), rtol=0, atol=1e-12 * scale)

    def test_quant_levels_positive(self):
        with pytest.raises(InvalidParameters):
            QuantLevels(0.0, 1.0)
