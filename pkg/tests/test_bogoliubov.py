import math

import numpy as np
import pytest

from becimpurity import (
    DomainError,
    SingularityError,
    SystemParams,
    coupling_weight,
    dispersion,
    transform_coefficients,
)

UNIT = SystemParams(g=1.0)


def test_dispersion_reference_point():
    # eps(2) = sqrt(2^2/4 * (2^2 + 4)) = 2 sqrt(2)
    assert dispersion(2.0, UNIT) == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-15)


def test_dispersion_zero_momentum():
    assert dispersion(0.0, UNIT) == 0.0


def test_dispersion_phonon_limit():
    p = 1e-3
    assert dispersion(p, UNIT) / p == pytest.approx(1.0, abs=1e-6)


def test_dispersion_free_particle_limit():
    p = 1e4
    assert dispersion(p, UNIT) / (p * p / 2.0) == pytest.approx(1.0, abs=1e-7)


def test_dispersion_no_overflow_at_extreme_momentum():
    # naive sqrt(p**2 (p**2 + (2mc)**2)) would overflow here; hypot does not
    p = 1e154
    val = dispersion(p, UNIT)
    assert np.isfinite(val)
    assert val == pytest.approx(p * p / 2.0, rel=1e-12)


def test_transform_reference_point():
    co = transform_coefficients(2.0, UNIT)
    assert co.mu == pytest.approx(-3.0 - 2.0 * math.sqrt(2.0), rel=1e-14)
    assert co.alpha == pytest.approx(-1.0150517651282178, rel=1e-12)
    assert co.beta == pytest.approx(0.17415534987450326, rel=1e-12)


def test_transform_normalization():
    # alpha^2 - beta^2 = 1, the Bogoliubov hyperbolic constraint
    for p in (1e-3, 0.1, 1.0, 2.0, 50.0):
        co = transform_coefficients(p, UNIT)
        assert co.alpha**2 - co.beta**2 == pytest.approx(1.0, abs=1e-12)


def test_transform_signs_and_limits():
    co = transform_coefficients(0.5, UNIT)
    assert co.alpha < -1.0
    assert co.beta > 0.0
    # UV: beta -> 0, alpha -> -1
    hi = transform_coefficients(400.0, UNIT)
    assert abs(hi.beta) < 1e-4
    assert hi.alpha == pytest.approx(-1.0, abs=1e-4)


def test_transform_singular_at_zero():
    with pytest.raises(SingularityError):
        transform_coefficients(0.0, UNIT)


def test_coupling_weight_reference_point():
    # w(2) = p^2/(2 eps) = 4/(4 sqrt 2) = 1/sqrt(2) at unit coupling
    assert coupling_weight(2.0, UNIT) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-14)


def test_coupling_weight_zero_momentum_vanishes():
    assert coupling_weight(0.0, UNIT) == 0.0


def test_coupling_weight_saturates_at_g2n():
    assert coupling_weight(1e5, UNIT) == pytest.approx(1.0, abs=1e-8)


def test_coupling_weight_scales_with_g_squared():
    w1 = coupling_weight(1.3, UNIT)
    w3 = coupling_weight(1.3, SystemParams(g=3.0))
    assert w3 == pytest.approx(9.0 * w1, rel=1e-14)


def test_vectorized_matches_scalar():
    grid = np.array([0.3, 1.0, 2.5])
    eps = dispersion(grid, UNIT)
    co = transform_coefficients(grid, UNIT)
    w = coupling_weight(grid, UNIT)
    for i, p in enumerate(grid):
        assert eps[i] == dispersion(float(p), UNIT)
        assert co.alpha[i] == transform_coefficients(float(p), UNIT).alpha
        assert w[i] == coupling_weight(float(p), UNIT)


def test_vectorized_weight_handles_zero_entry():
    w = coupling_weight(np.array([0.0, 1.0]), UNIT)
    assert w[0] == 0.0
    assert w[1] > 0.0


def test_negative_and_nonfinite_momentum_rejected():
    with pytest.raises(DomainError):
        dispersion(-1.0, UNIT)
    with pytest.raises(DomainError):
        dispersion(math.nan, UNIT)
    with pytest.raises(DomainError):
        coupling_weight(np.array([1.0, -2.0]), UNIT)
