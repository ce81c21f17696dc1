import math
import os
import subprocess
import sys

import numpy as np
import pytest

from coupled_entropy import _pykernels, kernels

BACKENDS = kernels.available_backends()
THETA = np.random.default_rng(41).uniform(-1.0, 2 * math.pi + 1.0, 2000)


def test_compiled_backend_built():
    assert "compiled" in BACKENDS, "the Cython extension did not build"
    assert kernels.BACKEND == "compiled"


def test_env_forces_python_fallback():
    code = "from coupled_entropy import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, COUPLED_ENTROPY_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_backend_values(name):
    k = BACKENDS[name]
    assert k.phi0(0.0) == math.pi
    assert k.phi0_deriv(0.0) == -3.0
    assert k.phi0_inverse(math.pi, 1e-16) == 0.0
    assert k.phi0_inverse(math.pi / 3, 1e-16) == pytest.approx(math.pi / 3, abs=1e-15)
    v = k.phi0(0.4)
    assert k.phi0_inverse(v, 4e-16) == pytest.approx(0.4, abs=1e-14)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend unavailable")
def test_parity_scalar_and_array():
    c, p = BACKENDS["compiled"], _pykernels
    for t in THETA[:300]:
        t = float(t)
        assert c.kasner_angle(t) == pytest.approx(p.kasner_angle(t), abs=1e-14)
        assert c.kasner_derivative(t) == pytest.approx(p.kasner_derivative(t), abs=1e-14)
        u = t % (math.pi / 3)
        assert c.phi0_inverse(c.phi0(u), 4e-16) == pytest.approx(p.phi0_inverse(p.phi0(u), 4e-16), abs=1e-14)
    np.testing.assert_allclose(c.kasner_angle_array(THETA), p.kasner_angle_array(THETA), atol=1e-14)
    np.testing.assert_allclose(c.kasner_derivative_array(THETA), p.kasner_derivative_array(THETA), atol=1e-14)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend unavailable")
def test_parity_power_iteration():
    rng = np.random.default_rng(42)
    for _ in range(50):
        p = int(rng.integers(2, 9))
        a = (rng.random((p, p)) < 0.5).astype(float) + np.eye(p, k=1) + np.eye(p, k=1 - p)
        a = (a > 0).astype(float)
        lo_c, hi_c, v_c, it_c = BACKENDS["compiled"].power_iterate(a, 1e-12, 10**6)
        lo_p, hi_p, v_p, it_p = _pykernels.power_iterate(a, 1e-12, 10**6)
        assert it_c == it_p
        assert lo_c == pytest.approx(lo_p, abs=1e-12) and hi_c == pytest.approx(hi_p, abs=1e-12)
        np.testing.assert_allclose(v_c, v_p, atol=1e-10)


def test_pipeline_under_python_fallback():
    code = (
        "import math\n"
        "from coupled_entropy import kernels\n"
        "from coupled_entropy.onedmap import make_builtin\n"
        "from coupled_entropy.semiconj import cylinder_counts\n"
        "from coupled_entropy.trans_matrix import spectral_radius\n"
        "T, P, A = make_builtin('kasner')\n"
        "assert kernels.BACKEND == 'python'\n"
        "assert abs(spectral_radius(A).lam - 2) < 1e-12\n"
        "assert cylinder_counts(T, P, 6)[-1] == (6, 96)\n"
        "print('ok')\n"
    )
    env = dict(os.environ, COUPLED_ENTROPY_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "ok"
