import math

import numpy as np
import pytest

from becimpurity import (
    ConfigurationError,
    DomainError,
    I0,
    I1,
    PerturbativeBreakdownError,
    SystemParams,
    effective_mass_closed,
    effective_mass_finite_difference,
    effective_mass_quadrature,
    energy_shift_closed,
    energy_shift_quadrature,
    energy_spectrum,
    mean_field_shift,
)

WEAK = SystemParams(a=0.01)


def test_branch_integrals_at_equal_masses():
    # the equal-mass point sits inside the series window; coefficients exact
    assert I0(1.0) == 4.0 / 3.0
    assert I1(1.0) == 2.0 / 15.0


def test_branch_integrals_reference_points():
    assert I0(2.0) == pytest.approx(1.2396540036990538, rel=1e-12)
    assert I1(2.0) == pytest.approx(0.046839664817139776, rel=1e-12)


def test_branch_integrals_light_impurity_endpoints():
    # x -> 0: I0 -> pi/2, I1 -> pi/4
    assert abs(I0(1e-10) - math.pi / 2.0) <= 1e-9
    assert abs(I1(1e-10) - math.pi / 4.0) <= 1e-9


def test_branch_integrals_monotone_decreasing():
    xs = np.geomspace(1e-3, 10.0, 51)
    v0 = [I0(x) for x in xs]
    v1 = [I1(x) for x in xs]
    assert all(b < a for a, b in zip(v0, v0[1:]))
    assert all(b < a for a, b in zip(v1, v1[1:]))


def test_branch_integrals_seam_continuity():
    # closed branches meet the series expansion at |x-1| = 5e-4
    for x in (1.0 - 5e-4, 1.0 + 5e-4):
        assert abs(I0(x) - I0(1.0)) < 1e-3
    eps = 1e-12
    for edge in (1.0 - 5e-4, 1.0 + 5e-4):
        jump0 = abs(I0(edge * (1 + eps)) - I0(edge * (1 - eps)))
        jump1 = abs(I1(edge * (1 + eps)) - I1(edge * (1 - eps)))
        assert jump0 < 1e-7
        assert jump1 < 1e-7


def test_branch_integrals_domain_errors():
    for bad in (0.0, -1.0, math.nan, math.inf):
        with pytest.raises(DomainError):
            I0(bad)
        with pytest.raises(DomainError):
            I1(bad)


def test_mean_field_shift_value():
    # 2 pi n a / m_r with m_r = 1/2
    assert mean_field_shift(WEAK) == pytest.approx(0.04 * math.pi, rel=1e-14)


def test_energy_shift_closed_value():
    expected = 0.04 * math.pi + 16.0 / 7500.0
    assert energy_shift_closed(WEAK) == pytest.approx(expected, rel=1e-14)


def test_energy_shift_modes_agree():
    for cutoff in (200.0, 2000.0):
        for q_i in (0.0, 0.5):
            ct = energy_shift_quadrature(q_i, WEAK, cutoff, mode="counterterm")
            sub = energy_shift_quadrature(q_i, WEAK, cutoff, mode="subtracted")
            assert sub == pytest.approx(ct, rel=1e-12)


def test_energy_shift_converges_to_closed():
    val = energy_shift_quadrature(0.0, WEAK, 4000.0)
    assert val == pytest.approx(energy_shift_closed(WEAK), rel=1e-4)


def test_energy_shift_even_in_momentum():
    plus = energy_shift_quadrature(0.3, WEAK, 500.0)
    minus = energy_shift_quadrature(-0.3, WEAK, 500.0)
    assert plus == minus


def test_energy_shift_validation():
    with pytest.raises(DomainError):
        energy_shift_quadrature(1.0, WEAK, 500.0)  # q_c = 1 in these units
    with pytest.raises(DomainError):
        energy_shift_quadrature(1.5, WEAK, 500.0)
    with pytest.raises(DomainError):
        energy_shift_quadrature(0.5, WEAK, 0.0)
    with pytest.raises(DomainError):
        energy_shift_quadrature(0.5, WEAK, -10.0)
    with pytest.raises(ConfigurationError):
        energy_shift_quadrature(0.5, WEAK, 500.0, mode="renormalized")


def test_effective_mass_closed_value():
    r = effective_mass_closed(WEAK)
    assert r.correction == pytest.approx(-(128.0 / 45.0) * 1e-4, rel=1e-14)
    assert r.M_ef == pytest.approx(1.000284525376107, rel=1e-12)
    assert r.M_ef == pytest.approx(1.0 / (1.0 + r.correction), rel=1e-15)
    assert r.method == "closed"


def test_effective_mass_heavy_impurity_scaling():
    # sigma ~ 4 pi n a^2 m^2 / (3 M^2 c m_r^2) -> correction falls off as 1/M
    light = effective_mass_closed(SystemParams(a=0.01, M=50.0))
    heavy = effective_mass_closed(SystemParams(a=0.01, M=100.0))
    assert abs(heavy.correction) < abs(light.correction)
    assert light.correction / heavy.correction == pytest.approx(2.0, rel=0.02)


def test_effective_mass_breakdown_guard():
    with pytest.raises(PerturbativeBreakdownError):
        effective_mass_closed(SystemParams(a=10.0))


def test_effective_mass_quadrature_matches_closed():
    r = effective_mass_quadrature(WEAK)
    assert r.M_ef == pytest.approx(effective_mass_closed(WEAK).M_ef, rel=1e-9)
    assert r.method == "quadrature"


def test_effective_mass_finite_difference_matches_closed():
    r = effective_mass_finite_difference(WEAK)
    closed = effective_mass_closed(WEAK)
    assert r.correction == pytest.approx(closed.correction, rel=1e-3)
    assert r.method == "finite_difference"


def test_effective_mass_step_validation():
    for h in (0.0, -0.1, 0.4, 1.0):  # q_c = 1: steps must sit well inside it
        with pytest.raises(DomainError):
            effective_mass_finite_difference(WEAK, step=h)


def test_mass_result_is_frozen():
    r = effective_mass_closed(WEAK)
    with pytest.raises(AttributeError):
        r.M_ef = 2.0


def test_energy_spectrum_reference_structure():
    pts = energy_spectrum([0.0, 0.3, 0.6], WEAK)
    assert [p.q_i for p in pts] == [0.0, 0.3, 0.6]
    e0 = energy_shift_closed(WEAK)
    m_ef = effective_mass_closed(WEAK).M_ef
    assert pts[0].energy == pytest.approx(e0, rel=1e-14)
    for pt in pts:
        assert pt.energy == pytest.approx(e0 + pt.q_i**2 / (2.0 * m_ef), rel=1e-13)
        assert set(pt.components) == {"mean_field", "fluctuation"}
        total = pt.components["mean_field"] + pt.components["fluctuation"]
        assert total == pytest.approx(e0, rel=1e-13)
    assert pts[0].components["mean_field"] == pytest.approx(
        mean_field_shift(WEAK), rel=1e-14
    )


def test_energy_spectrum_rejects_supercritical_with_offenders():
    with pytest.raises(DomainError) as exc:
        energy_spectrum([0.5, 1.0, 1.5], WEAK)
    msg = str(exc.value)
    assert "1.5" in msg and "0.5" not in msg
