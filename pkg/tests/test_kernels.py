import os

import numpy as np
import pytest

from relaychain import _kernels_py, kernels
from relaychain.errors import NotPositiveDefinite

try:
    from relaychain import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

BACKENDS = [pytest.param(_kernels_py, id="python"),
            pytest.param(compiled, id="compiled",
                         marks=pytest.mark.skipif(compiled is None, reason="extension not built"))]


def random_pd(rng, n):
    A = rng.normal(size=(n, n))
    return A @ A.T + 0.1 * np.eye(n)


@pytest.mark.parametrize("impl", BACKENDS)
@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_cholesky_reconstructs(impl, n, rng):
    for _ in range(20):
        M = random_pd(rng, n)
        L = impl.cholesky(M)
        assert np.allclose(np.triu(L, 1), 0.0)
        np.testing.assert_allclose(L @ L.T, M, rtol=1e-12, atol=1e-12)
        assert impl.log_det(M) == pytest.approx(np.linalg.slogdet(M)[1], abs=1e-10)


@pytest.mark.parametrize("impl", BACKENDS)
def test_pivot_tolerance(impl):
    with pytest.raises(NotPositiveDefinite):
        impl.cholesky(np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(NotPositiveDefinite):
        impl.log_det(np.array([[1e-15]]))
    assert impl.log_det(np.array([[2e-14]])) == pytest.approx(np.log(2e-14))


@pytest.mark.parametrize("impl", BACKENDS)
def test_accepts_read_only(impl):
    M = np.eye(3)
    M.setflags(write=False)
    assert impl.log_det(M) == 0.0


@pytest.mark.skipif(compiled is None, reason="extension not built")
def test_min_rate_grid_backends_agree(rng):
    q = 10.0 ** np.linspace(-4, 4, 33)
    for _ in range(50):
        h = 10.0 ** rng.uniform(-2, 4, 3)
        r = rng.uniform(-0.6, 0.6, 3)
        a = _kernels_py.min_rate_grid(*h, *r, q, q[::-1])
        b = compiled.min_rate_grid(*h, *r, q, q[::-1])
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


def test_backend_selected():
    assert kernels.BACKEND in ("compiled", "python")
    forced = os.environ.get("RELAYCHAIN_PURE_PYTHON", "") not in ("", "0")
    if compiled is not None and not forced:
        assert kernels.BACKEND == "compiled"
