"""Cross-backend agreement for the lattice kernels.

The compiled path accumulates with Kahan compensation and the numpy fallback
sums slab by slab with identical per-element arithmetic, so the two must
agree far below the physics tolerances.
"""

import math
import os
import subprocess
import sys

import pytest

from becimpurity import BoxOracleConfig, ConfigurationError, SystemParams, box_rate
from becimpurity import _kernels

# n_max kept small so the pure-python loop fallback stays fast
_ARGS = (15, 2.0 * math.pi / 30.0, 9.0, 1.0, 1.0, 1.0, 1.0, 2.0)
_SUB_ARGS = (15, 2.0 * math.pi / 30.0, 9.0, 1.0, 1.0, 1.0, 1.0, 0.5)


def test_lorentzian_sums_backends_agree():
    st_a, se_a = _kernels._lorentzian_sums_loop(*_ARGS, 0.05)
    st_b, se_b = _kernels._lorentzian_sums_numpy(*_ARGS, 0.05)
    assert st_a == pytest.approx(st_b, rel=1e-12)
    assert se_a == pytest.approx(se_b, rel=1e-12)


def test_finite_time_sum_backends_agree():
    a = _kernels._finite_time_sum_loop(*_ARGS, 5.0)
    b = _kernels._finite_time_sum_numpy(*_ARGS, 5.0)
    assert a == pytest.approx(b, rel=1e-12)


def test_inverse_square_sum_backends_agree():
    a = _kernels._inverse_square_sum_loop(*_SUB_ARGS)
    b = _kernels._inverse_square_sum_numpy(*_SUB_ARGS)
    assert a == pytest.approx(b, rel=1e-12)


def test_lattice_point_count():
    assert _kernels.lattice_points(2) == 125
    assert _kernels.lattice_points(0) == 1


def test_active_backend_is_valid():
    assert _kernels.ACTIVE_BACKEND in ("numba", "numpy")


def _backend_in_subprocess(extra_env: dict) -> str:
    env = dict(os.environ)
    env.pop("BECIMPURITY_DISABLE_NUMBA", None)
    env.update(extra_env)
    out = subprocess.run(
        [sys.executable, "-c", "from becimpurity import _kernels; print(_kernels.ACTIVE_BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    return out.stdout.strip()


def test_disable_flag_forces_numpy_backend():
    assert _backend_in_subprocess({"BECIMPURITY_DISABLE_NUMBA": "1"}) == "numpy"


def test_default_backend_is_numba_when_available():
    pytest.importorskip("numba")
    assert _backend_in_subprocess({}) == "numba"


def test_box_config_validation():
    with pytest.raises(ConfigurationError):
        BoxOracleConfig(L=0.0)
    with pytest.raises(ConfigurationError):
        BoxOracleConfig(eta=-0.1)
    with pytest.raises(ConfigurationError):
        BoxOracleConfig(p_cut=0.0)


def test_box_rate_requires_cut_beyond_window():
    params = SystemParams(g=1.0)
    with pytest.raises(ConfigurationError, match="p_cut"):
        box_rate(2.0, params, BoxOracleConfig(L=30.0, eta=0.05, p_cut=1.4))


def test_box_rate_point_budget_guard():
    params = SystemParams(g=1.0)
    big = BoxOracleConfig(L=1e4, eta=0.05, p_cut=3.0)
    with pytest.raises(ConfigurationError, match="budget"):
        box_rate(2.0, params, big)
