import numpy as np
import pytest

from q1dnls import kernels


def cases():
    rng = np.random.default_rng(42)
    for shape in [(64,), (32, 16), (8, 12, 10)]:
        yield (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)).astype(
            np.complex128
        )


def test_rotate_nonlinear_backends_agree():
    for u in cases():
        a = u.copy()
        b = u.copy()
        kernels._rotate_nonlinear_numpy(a.reshape(-1), 1e-3)
        kernels.rotate_nonlinear(b, 1e-3)
        assert np.max(np.abs(a.reshape(b.shape) - b)) < 1e-15


def test_rotate_preserves_modulus():
    for u in cases():
        a = u.copy()
        kernels.rotate_nonlinear(a, 0.37)
        assert np.max(np.abs(np.abs(a) - np.abs(u))) < 1e-14


def test_multiply_backends_agree():
    rng = np.random.default_rng(1)
    for u in cases():
        phase = np.exp(1j * rng.standard_normal(u.shape))
        a, b = u.copy(), u.copy()
        kernels._multiply_inplace_numpy(a, phase)
        kernels.multiply_inplace(b, np.ascontiguousarray(phase))
        assert np.max(np.abs(a - b)) < 1e-15


def test_max_abs2_backends_agree():
    for u in cases():
        assert kernels.max_abs2(u.copy()) == kernels._max_abs2_numpy(u.reshape(-1))


def test_max_abs2_value():
    u = np.zeros(100, dtype=np.complex128)
    u[37] = 3 + 4j
    assert kernels.max_abs2(u) == 25.0


def test_kernels_reject_noncontiguous():
    u = np.zeros((8, 8), dtype=np.complex128)
    with pytest.raises(ValueError):
        kernels.rotate_nonlinear(u.T, 0.1)
    with pytest.raises(ValueError):
        kernels.multiply_inplace(u, np.zeros((4, 4), dtype=complex))


def test_backend_name_reports():
    assert kernels.backend_name() in ("numba", "numpy")
    if kernels.NUMBA_AVAILABLE and not kernels.NUMBA_DISABLED:
        assert kernels.backend_name() == "numba"


def test_numpy_fallback_env_flag():
    """Q1DNLS_NO_NUMBA=1 selects the numpy path in a fresh interpreter."""
    import subprocess
    import sys

    code = (
        "import os; os.environ['Q1DNLS_NO_NUMBA']='1'; "
        "from q1dnls import kernels; "
        "assert kernels.backend_name() == 'numpy'; "
        "import numpy as np; u = np.ones(16, dtype=np.complex128); "
        "kernels.rotate_nonlinear(u, 0.5); "
        "assert abs(u[0] - np.exp(1j)) < 1e-15; print('fallback ok')"
    )
    r = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert "fallback ok" in r.stdout
