import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arealaw.bounds import (
    check_bound,
    decay_envelope,
    lower_bound_estimate,
    lower_bound_parts,
    shell_sum_bound,
    upper_bound_en,
    upper_bound_validity_threshold,
    verify_decay,
)
from arealaw.circulant import build_potential, fractional_power
from arealaw.errors import InvalidInputError, ModelInvalidError, NumericalConsistencyError
from arealaw.gaussian import (
    ReducedState,
    SymplecticSpectrum,
    entanglement_entropy,
    ground_covariance,
    log_negativity,
    reduce,
    symplectic_spectrum,
)
from arealaw.lattice import LatticeSpec, Region


def _upper_const(c, d):
    y = 2 * c * d
    return 16 * d / (math.sqrt(1 - y) * (1 - y) ** 2 * abs(math.log(1 - y)) ** 2)


def test_upper_bound_examples():
    value, valid = upper_bound_en(0.2, 1, 5)
    assert value == pytest.approx(219.9, abs=0.05)
    assert valid
    assert upper_bound_validity_threshold(0.2, 1) == pytest.approx(4.3654, abs=1e-4)
    assert not upper_bound_en(0.2, 1, 4)[1]
    value, valid = upper_bound_en(0.1, 2, 9)
    assert value == pytest.approx(3957.9, abs=0.05)
    assert valid
    assert upper_bound_validity_threshold(0.1, 2) == pytest.approx(8.73, abs=0.005)


def test_upper_bound_scales_with_boundary():
    for d in (1, 2, 3):
        c = 0.1 / d
        for m in (10, 20):
            assert upper_bound_en(c, d, m)[0] == pytest.approx(_upper_const(c, d) * m ** (d - 1), rel=1e-14)


def test_upper_bound_rejects_degenerate_coupling():
    with pytest.raises(ModelInvalidError):
        upper_bound_en(0.0, 1, 5)
    with pytest.raises(ModelInvalidError):
        upper_bound_en(0.5, 1, 5)


def test_decay_envelope_examples():
    assert decay_envelope(0.2, 1, 2, "upper") == pytest.approx(0.16 / 0.6, rel=1e-14)
    assert decay_envelope(0.2, 1, 2, "upper") == pytest.approx(0.26667, abs=1e-5)
    assert decay_envelope(0.2, 1, 1, "lower") == pytest.approx(0.05 / 0.96, rel=1e-14)
    assert decay_envelope(0.2, 1, 1, "lower") == pytest.approx(0.0520833, abs=1e-7)
    assert decay_envelope(0.0, 3, 4, "upper") == 0.0
    with pytest.raises(InvalidInputError):
        decay_envelope(0.2, 1, 0)
    with pytest.raises(InvalidInputError):
        decay_envelope(0.2, 1, 1, "sideways")


@pytest.mark.parametrize("d, n, c", [(1, 16, 0.2), (2, 8, 0.1), (1, 32, 0.1), (1, 31, 0.2)])
def test_verify_decay_satisfied(d, n, c):
    V = build_potential(LatticeSpec(d, n, c))
    for p in (-0.5, 0.5):
        rep = verify_decay(fractional_power(V, p))
        assert rep.satisfied, rep.details
        assert rep.margin >= 0
        assert rep.details["lower_ok"]
        assert rep.details["checked"] == n**d - 1


def test_verify_decay_uncoupled():
    V = build_potential(LatticeSpec(2, 6, 0.0))
    for p in (-0.5, 0.5):
        M = fractional_power(V, p)
        off = M.kernel.reshape(-1)[1:]
        assert np.abs(off).max() < 1e-15
        rep = verify_decay(M, precise=False)
        assert rep.satisfied


def test_verify_decay_reports_violations():
    from arealaw.circulant import BlockCirculant

    spec = LatticeSpec(1, 8, 0.2)
    V = build_potential(spec)
    # coupling of the wrong sign flips the off-diagonal signs of the root
    flipped = 1 + 0.4 * np.cos(2 * np.pi * np.arange(8) / 8)
    rep = verify_decay(BlockCirculant(spec, flipped**0.5, power=0.5), precise=False)
    assert not rep.satisfied
    assert rep.details["sign_violations"] > 0
    assert rep.details["first_violation"] == (1,)
    with pytest.raises(InvalidInputError):
        verify_decay(build_potential(LatticeSpec(1, 8, 0.2, "squared")))
    with pytest.raises(InvalidInputError):
        verify_decay(V)


def _shell_series_oracle(d, m, c):
    y = mpmath.mpf(2 * c * d)
    term = lambda s: ((m + 2 * s) ** d - m**d) * y**s / (1 - y)
    inner = sum(y**k for k in range(m // 2 + 1))
    return float(2 / mpmath.sqrt(1 - y) * mpmath.nsum(term, [1, mpmath.inf]) * inner)


@pytest.mark.parametrize("d, m, c", [(1, 6, 0.2), (2, 10, 0.1), (3, 4, 0.05), (1, 5, 0.24), (2, 3, 0.12)])
def test_shell_sum_bound_matches_series(d, m, c):
    spec = LatticeSpec(d, max(m, 2), c)
    assert shell_sum_bound(spec, m) == pytest.approx(_shell_series_oracle(d, m, c), rel=1e-13)


def test_shell_sum_bound_zero_coupling():
    assert shell_sum_bound(LatticeSpec(2, 8, 0.0), 4) == 0.0


def test_shell_sum_bound_dominates_negativity():
    spec = LatticeSpec(1, 20, 0.2)
    V = build_potential(spec)
    en = log_negativity(V, Region(spec, 6))
    assert shell_sum_bound(spec, 6) >= en


def test_shell_sum_below_closed_form():
    spec = LatticeSpec(2, 10, 0.1)
    value, valid = upper_bound_en(0.1, 2, 10)
    assert valid
    assert shell_sum_bound(spec, 10) <= value * (1 + 1e-9)


@settings(max_examples=60, deadline=None)
@given(d=st.integers(1, 3), y=st.floats(0.05, 0.55), m=st.integers(1, 40))
def test_shell_sum_below_closed_form_when_valid(d, y, m):
    c = y / (2 * d)
    value, valid = upper_bound_en(c, d, m)
    if valid:
        assert shell_sum_bound(LatticeSpec(d, m, c) if m >= 2 else LatticeSpec(d, 2, c), m) <= value * (1 + 1e-9)


def test_shell_sum_exceeds_closed_form_at_strong_coupling():
    """For 2cd above about 0.6 the closed form no longer dominates the shell sum,
    although the measured negativity stays below both."""
    c, m = 0.375, 14
    spec = LatticeSpec(1, 4 * m, c)
    value, valid = upper_bound_en(c, 1, m)
    assert valid
    shell = shell_sum_bound(spec, m)
    assert shell > value
    en = log_negativity(build_potential(spec), Region(spec, m))
    assert en < value < shell


def _lower_inputs(d, n, m, c):
    spec = LatticeSpec(d, n, c)
    V = build_potential(spec)
    state = reduce(ground_covariance(V), Region(spec, m))
    spectrum = symplectic_spectrum(state)
    return state, spectrum


def test_lower_bound_zero_coupling():
    state, spectrum = _lower_inputs(1, 8, 3, 0.0)
    assert lower_bound_estimate(state, spectrum) == 0.0
    assert entanglement_entropy(spectrum) == 0.0


@pytest.mark.parametrize("d, n, m, c", [(1, 12, 4, 0.2), (2, 8, 2, 0.1), (1, 16, 7, 0.24), (2, 6, 3, 0.12)])
def test_lower_bound_below_entropy(d, n, m, c):
    state, spectrum = _lower_inputs(d, n, m, c)
    est = lower_bound_estimate(state, spectrum)
    assert 0 < est <= entanglement_entropy(spectrum)
    parts = lower_bound_parts(state, spectrum)
    assert 0 < parts.beta <= 1 and 0 < parts.log_factor <= 1
    assert parts.trace == pytest.approx(float(np.sum(spectrum.mu**2 - 1)), rel=1e-8)
    assert parts.top_eigenvalue == pytest.approx(spectrum.mu[0] ** 2 - 1, rel=1e-6)


def test_lower_bound_limits_and_errors():
    spec = SymplecticSpectrum(np.ones(2))
    state = ReducedState(np.eye(2), np.eye(2), np.zeros((2, 1)), np.zeros((2, 1)), None)
    parts = lower_bound_parts(state, spec)
    assert (parts.beta, parts.log_factor, parts.estimate) == (0.5, 1.0, 0.0)
    bad = ReducedState(np.eye(2), np.eye(2), np.eye(2), np.eye(2), None)
    with pytest.raises(NumericalConsistencyError):
        lower_bound_estimate(bad, spec)


def test_check_bound_tolerance():
    assert check_bound(1.0 + 5e-10, 1.0).satisfied
    assert not check_bound(1.0 + 1e-8, 1.0).satisfied
    assert check_bound(2.0, 1.0, kind="lower").satisfied
    assert check_bound(2.0, 1.0, kind="lower").margin == 1.0
