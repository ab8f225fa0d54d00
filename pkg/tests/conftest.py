import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from relaychain import ChainParams, QuantLevels

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def k_beta_eig_ok(p, q, min_det=1e-6):
    K = np.array([[1 + q.q1, p.rho12, p.rho13], [p.rho12, 1 + q.q2, p.rho23],
                  [p.rho13, p.rho23, 1.0]])
    return np.linalg.det(K) >= min_det


def random_valid_params(rng, n, min_kbeta=1e-6, h_lo=-2.0, h_hi=4.0):
    """Seeded rejection sampler of valid (ChainParams, QuantLevels) pairs."""
    out = []
    while len(out) < n:
        r12, r13, r23 = rng.uniform(-1, 1, 3)
        Kz = np.array([[1, r12, r13], [r12, 1, r23], [r13, r23, 1]])
        if np.linalg.eigvalsh(Kz)[0] < 1e-9:
            continue
        h = 10.0 ** rng.uniform(h_lo, h_hi, 3)
        q = QuantLevels(*(10.0 ** rng.uniform(-2, 2, 2)))
        p = ChainParams.from_powers(*h, r12, r13, r23)
        if not k_beta_eig_ok(p, q, min_kbeta):
            continue
        out.append((p, q))
    return out


@st.composite
def valid_params(draw, min_eig=1e-6):
    r12 = draw(st.floats(-0.999, 0.999))
    r13 = draw(st.floats(-0.999, 0.999))
    r23 = draw(st.floats(-0.999, 0.999))
    Kz = np.array([[1, r12, r13], [r12, 1, r23], [r13, r23, 1]])
    from hypothesis import assume
    assume(np.linalg.eigvalsh(Kz)[0] >= min_eig)
    h = [draw(st.floats(0.0, 1e4)) for _ in range(3)]
    return ChainParams.from_powers(*h, r12, r13, r23)


quant_levels = st.builds(QuantLevels, st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
