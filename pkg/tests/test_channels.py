import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfacets.channels import (
    ChannelPoint,
    KrausSet,
    NmdParams,
    RegimeTag,
    RtnParams,
    apply_channel,
    classify_regime,
    dephased_state,
    dephasing_generator,
    nmd_critical_points,
    nmd_decoherence_rate,
    nmd_kappa,
    nmd_kraus,
    nmd_omega,
    nmd_omega_derivative,
    rtn_decoherence_rate,
    rtn_kraus,
    rtn_memory_derivative,
    rtn_memory_factor,
    rtn_zero_crossings,
)
from qfacets.errors import CompletenessError, DomainError, SingularityError
from qfacets.qstate import IDENTITY, SIGMA_Z, DensityMatrix, pure_qubit

from conftest import ode_kernel, omega_root

BRANCH_PARAMS = [(0.05, 0.001), (0.05, 1.0), (1.0, 1.0), (0.5, 1.0), (0.25, 0.5)]


# ---------------------------------------------------------------- kernel


def test_kernel_at_zero():
    for a, g in BRANCH_PARAMS:
        assert rtn_memory_factor(RtnParams(a, g), 0.0) == 1.0


def test_kernel_ode_values():
    # frozen from the DOP853 integration in conftest.ode_kernel
    assert rtn_memory_factor(RtnParams(1, 1), 1) == pytest.approx(0.15057436514588432, abs=1e-10)
    assert rtn_memory_factor(RtnParams(0.05, 1), 1) == pytest.approx(0.9971636819388048, abs=1e-10)


@pytest.mark.parametrize("a,g", BRANCH_PARAMS)
def test_kernel_matches_ode(a, g):
    t = np.linspace(0, 60, 301)
    assert np.max(np.abs(rtn_memory_factor(RtnParams(a, g), t) - ode_kernel(a, g, t))) < 1e-8


@pytest.mark.parametrize("a,g", BRANCH_PARAMS)
def test_kernel_ode_residual(a, g):
    p = RtnParams(a, g)
    t = np.linspace(0.01, 50, 1000)
    h = 1e-4
    lam = rtn_memory_factor(p, t)
    d1 = (rtn_memory_factor(p, t + h) - rtn_memory_factor(p, t - h)) / (2 * h)
    d2 = (rtn_memory_factor(p, t + h) - 2 * lam + rtn_memory_factor(p, t - h)) / h**2
    resid = d2 + 2 * g * d1 + 4 * a * a * lam
    assert np.max(np.abs(resid)) <= 1e-6 * max(1, 4 * a * a)


@pytest.mark.parametrize("a,g", BRANCH_PARAMS)
def test_kernel_derivative_matches_finite_difference(a, g):
    p = RtnParams(a, g)
    t = np.linspace(0.01, 50, 200)
    h = 1e-5
    fd = (rtn_memory_factor(p, t + h) - rtn_memory_factor(p, t - h)) / (2 * h)
    assert np.max(np.abs(fd - rtn_memory_derivative(p, t))) < 1e-8


def test_kernel_critical_branch_continuity():
    g = 0.8
    crit = RtnParams(g / 2, g)
    assert crit.branch == "critical"
    t = np.linspace(0, 40, 500)
    ref = np.exp(-g * t) * (1 + g * t)
    assert np.allclose(rtn_memory_factor(crit, t), ref, atol=1e-15)
    for eps in (1e-9, -1e-9):
        near = RtnParams(g * (1 + eps) / 2, g)
        assert near.branch != "critical"
        assert np.max(np.abs(rtn_memory_factor(near, t) - ref)) <= 1e-6


def test_kernel_large_time_overdamped_is_finite():
    lam = rtn_memory_factor(RtnParams(0.05, 1.0), np.array([0.0, 100.0, 2000.0]))
    assert np.all(np.isfinite(lam)) and np.all(lam > 0)


def test_kernel_bounded():
    for a, g in BRANCH_PARAMS:
        lam = rtn_memory_factor(RtnParams(a, g), np.linspace(0, 200, 4001))
        assert np.max(np.abs(lam)) <= 1 + 1e-12


def test_kernel_rejects_negative_time():
    with pytest.raises(DomainError):
        rtn_memory_factor(RtnParams(1, 1), -0.1)


def test_params_validated():
    with pytest.raises(DomainError):
        RtnParams(0, 1)
    with pytest.raises(DomainError):
        NmdParams(1.2)


def test_zero_crossings_match_ode_root():
    p = RtnParams(0.05, 0.001)
    tz = rtn_zero_crossings(p, 100)
    # bisection on the ODE solution gives 15.808755392222324
    assert tz[0] == pytest.approx(15.808755392222324, abs=1e-7)
    assert all(abs(rtn_memory_factor(p, t)) < 1e-12 for t in tz)
    assert rtn_zero_crossings(RtnParams(0.05, 1), 100) == []


# ---------------------------------------------------------------- Kraus


def test_rtn_kraus_examples():
    p = RtnParams(0.3, 0.2)
    k = rtn_kraus(p, 0.0)
    assert np.allclose(k.operators[0], IDENTITY) and np.allclose(k.operators[1], 0)
    t0 = rtn_zero_crossings(p, 100)[0]
    k = rtn_kraus(p, t0)
    assert np.allclose(k.operators[0], IDENTITY / math.sqrt(2), atol=1e-6)
    assert np.allclose(k.operators[1], SIGMA_Z / math.sqrt(2), atol=1e-6)


@given(st.floats(1e-3, 2), st.floats(1e-3, 2), st.floats(0, 100))
def test_rtn_kraus_complete(a, g, t):
    assert rtn_kraus(RtnParams(a, g), t).deviation <= 1e-12


def test_nmd_kappa_examples():
    assert nmd_kappa(NmdParams(0.6), 0.0) == 0.0
    assert nmd_kappa(NmdParams(0.0), 0.31) == pytest.approx(0.31)
    assert nmd_kappa(NmdParams(1.0), 0.5) == pytest.approx(0.75)
    with pytest.raises(DomainError):
        nmd_kappa(NmdParams(0.5), 0.51)


@given(st.floats(0, 1), st.floats(0, 0.5))
def test_nmd_kappa_identity(alpha, p):
    k = nmd_kappa(NmdParams(alpha), p)
    assert 0 <= k <= 0.75 + 1e-15
    assert (1 - alpha * p) * (1 - p) == pytest.approx(1 - k, abs=1e-12)


def test_nmd_kraus_examples():
    k = nmd_kraus(NmdParams(0.4), 0.0)
    assert np.allclose(k.operators[0], IDENTITY) and np.allclose(k.operators[1], 0)
    k = nmd_kraus(NmdParams(1.0), 0.5)
    assert np.allclose(k.operators[0], 0.5 * IDENTITY)
    assert np.allclose(k.operators[1], math.sqrt(3) / 2 * SIGMA_Z)


@given(st.floats(0, 1), st.floats(0, 0.5))
def test_nmd_kraus_complete(alpha, p):
    assert nmd_kraus(NmdParams(alpha), p).deviation <= 1e-12


def test_apply_channel_identity_and_full_dephasing():
    rho = pure_qubit(1.0, 0.4)
    assert apply_channel(KrausSet([IDENTITY]), rho).allclose(rho)
    p = RtnParams(0.3, 0.2)
    t0 = rtn_zero_crossings(p, 100)[0]
    out = apply_channel(rtn_kraus(p, t0), pure_qubit(math.pi / 2, 0))
    assert out.allclose(0.5 * IDENTITY, atol=1e-12)


def test_apply_channel_incomplete():
    with pytest.raises(CompletenessError) as info:
        apply_channel(KrausSet([0.9 * IDENTITY]), pure_qubit(0, 0))
    assert info.value.deviation == pytest.approx(0.19)


def test_channels_equal_dephased_closed_form(rng):
    for _ in range(1000):
        theta, phi = rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)
        if rng.random() < 0.5:
            point = ChannelPoint.rtn(RtnParams(rng.uniform(0.01, 1), rng.uniform(0.001, 1)), rng.uniform(0, 100))
        else:
            point = ChannelPoint.nmd(NmdParams(rng.uniform(0, 1)), rng.uniform(0, 0.5))
        out = apply_channel(point.kraus(), pure_qubit(theta, phi))
        ref = dephased_state(point.factor, theta, phi)
        assert out.allclose(ref, atol=1e-12)
        assert np.trace(np.asarray(out)).real == pytest.approx(1.0, abs=1e-12)


def test_dephased_state_examples():
    assert dephased_state(1.0, 0.8, 0.3).allclose(pure_qubit(0.8, 0.3), atol=1e-15)
    assert dephased_state(0.0, math.pi / 2, 0).allclose(0.5 * IDENTITY, atol=1e-15)
    m = np.asarray(dephased_state(-0.5, math.pi / 2, 0))
    assert m[0, 1] == pytest.approx(-0.25) and m[1, 0] == pytest.approx(-0.25)
    with pytest.raises(DomainError):
        dephased_state(1.1, 0.2, 0)


# ---------------------------------------------------------------- rates


def test_rtn_rate_small_time():
    assert rtn_decoherence_rate(RtnParams(0.05, 0.001), 0.0) == 0.0
    assert abs(rtn_decoherence_rate(RtnParams(0.05, 0.001), 1e-8)) < 1e-10


@pytest.mark.parametrize("a,g", BRANCH_PARAMS + [(0.4, 0.8)])
def test_rtn_rate_matches_quotient(a, g):
    p = RtnParams(a, g)
    zeros = rtn_zero_crossings(p, 50)
    for t in np.linspace(0.05, 50, 97):
        if any(abs(t - z) < 1e-2 for z in zeros):
            continue
        h = 1e-6 * max(1, t)
        lam = rtn_memory_factor(p, t)
        fd = (rtn_memory_factor(p, t + h) - rtn_memory_factor(p, t - h)) / (2 * h)
        expected = -fd / (2 * lam)
        assert rtn_decoherence_rate(p, t) == pytest.approx(expected, rel=1e-6, abs=1e-9)


def test_rtn_rate_sign_regimes():
    mk = RtnParams(0.05, 1.0)
    assert all(rtn_decoherence_rate(mk, t) >= 0 for t in np.linspace(0.01, 50, 500))
    nm = RtnParams(0.05, 0.001)
    rates = []
    for t in np.linspace(0.01, 100, 1000):
        try:
            rates.append(rtn_decoherence_rate(nm, t))
        except SingularityError:
            pass
    assert min(rates) < 0


def test_rtn_rate_sign_law(rng):
    p = RtnParams(0.07, 0.001)
    for t in rng.uniform(0, 100, 500):
        lam, dlam = rtn_memory_factor(p, t), rtn_memory_derivative(p, t)
        if abs(lam) < 1e-6:
            continue
        assert np.sign(rtn_decoherence_rate(p, t)) == -np.sign(lam * dlam)


def test_rtn_rate_singularity():
    p = RtnParams(0.05, 0.001)
    tz = rtn_zero_crossings(p, 100)[1]
    with pytest.raises(SingularityError) as info:
        rtn_decoherence_rate(p, tz)
    assert info.value.location == pytest.approx(tz)


def test_nmd_rate_examples():
    assert nmd_decoherence_rate(NmdParams(0.0), 0.0) == pytest.approx(1.0)
    for p in (0.1, 0.3, 0.45):
        assert nmd_decoherence_rate(NmdParams(0.0), p) == pytest.approx(1 / (1 - 2 * p), rel=1e-12)
    assert nmd_decoherence_rate(NmdParams(0.5), 0.45) < 0
    r = omega_root(0.7)
    with pytest.raises(SingularityError) as info:
        nmd_decoherence_rate(NmdParams(0.7), r)
    assert info.value.location == pytest.approx(0.3423888845900083, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.5, 0.7, 1.0])
def test_nmd_rate_matches_printed_and_quotient(alpha):
    prm = NmdParams(alpha)
    rm, rp = nmd_critical_points(prm)
    for p in np.linspace(0, 0.5, 101):
        if abs(p - rm) < 1e-3:
            continue
        printed = (0.5 * (rp + rm) - p) / ((p - rm) * (p - rp))
        rate = nmd_decoherence_rate(prm, p)
        assert rate == pytest.approx(printed, rel=1e-8)
        if 0 < p < 0.5:
            h = 1e-6
            fd = (nmd_omega(prm, p + h) - nmd_omega(prm, p - h)) / (2 * h)
            assert rate == pytest.approx(-fd / (2 * nmd_omega(prm, p)), rel=1e-6)
        assert (rate > 0) == (p < rm)


def test_critical_points():
    rm, rp = nmd_critical_points(NmdParams(0.5))
    assert rm == pytest.approx(0.38196601125010526, abs=1e-12)
    assert rp == pytest.approx(2.618033988749895, abs=1e-12)
    assert nmd_critical_points(NmdParams(1.0))[0] == pytest.approx((2 - math.sqrt(2)) / 2, abs=1e-12)
    assert nmd_critical_points(NmdParams(0.7))[0] == pytest.approx(0.3423888845900083, abs=1e-12)
    assert nmd_critical_points(NmdParams(0.0)) is None
    for alpha in np.linspace(0.01, 1, 50):
        rm, rp = nmd_critical_points(NmdParams(alpha))
        assert rm < rp and 0 < rm < 1
        assert abs(2 * alpha * rm**2 - 2 * (1 + alpha) * rm + 1) < 1e-10
        assert abs(2 * alpha * rp**2 - 2 * (1 + alpha) * rp + 1) < 1e-10


def test_omega_properties():
    for alpha in np.linspace(0, 1, 11):
        prm = NmdParams(alpha)
        ps = np.linspace(0, 0.5, 201)
        om = np.array([nmd_omega(prm, p) for p in ps])
        assert om[0] == 1.0
        assert np.all(np.abs(om) <= 1 + 1e-12)
        assert np.all(np.diff(om) < 0)
        assert all(nmd_omega_derivative(prm, p) < 0 for p in ps)


def test_canonical_master_equation_residual(rng):
    theta, phi = 1.1, 0.4
    for _ in range(200):
        if rng.random() < 0.5:
            prm = RtnParams(rng.uniform(0.01, 1), rng.uniform(0.001, 1))
            x = rng.uniform(0.1, 50)
            fac = lambda s: rtn_memory_factor(prm, s)
            if abs(fac(x)) < 1e-3:
                continue
            rate = rtn_decoherence_rate(prm, x)
        else:
            prm = NmdParams(rng.uniform(0, 1))
            x = rng.uniform(0.01, 0.49)
            fac = lambda s: nmd_omega(prm, s)
            if abs(fac(x)) < 1e-3:
                continue
            rate = nmd_decoherence_rate(prm, x)
        h = 1e-6
        drho = (np.asarray(dephased_state(fac(x + h), theta, phi)) - np.asarray(dephased_state(fac(x - h), theta, phi))) / (2 * h)
        gen = rate * dephasing_generator(dephased_state(fac(x), theta, phi))
        assert np.max(np.abs(drho - gen)) < 1e-6


def test_classify_regime():
    assert classify_regime(ChannelPoint.rtn(RtnParams(0.05, 0.001), 3.0)) is RegimeTag.NON_MARKOVIAN
    assert classify_regime(ChannelPoint.rtn(RtnParams(0.05, 1.0), 3.0)) is RegimeTag.MARKOVIAN
    assert classify_regime(ChannelPoint.rtn(RtnParams(0.5, 1.0), 3.0)) is RegimeTag.BOUNDARY
    assert classify_regime(ChannelPoint.nmd(NmdParams(0.5), 0.1)) is RegimeTag.MARKOVIAN
    assert classify_regime(ChannelPoint.nmd(NmdParams(0.5), 0.45)) is RegimeTag.NON_MARKOVIAN
    rm = nmd_critical_points(NmdParams(0.5))[0]
    assert classify_regime(ChannelPoint.nmd(NmdParams(0.5), rm)) is RegimeTag.BOUNDARY
    assert classify_regime(ChannelPoint.nmd(NmdParams(0.0), 0.5)) is RegimeTag.MARKOVIAN


def test_channel_point_factor_bound():
    pt = ChannelPoint.nmd(NmdParams(1.0), 0.5)
    assert pt.factor == pytest.approx(-0.5)
    assert isinstance(apply_channel(pt.kraus(), pure_qubit(0.3, 0)), DensityMatrix)
