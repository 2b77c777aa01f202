import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asymphoton.attenuation import (
    AttenuationConfig,
    attenuation_distribution,
    attenuation_feasible,
    attenuation_pair_probabilities,
    interference_bracket,
)
from asymphoton.errors import InvalidConfiguration
from asymphoton.oam import OamSystemConfig, joint_distribution_closed, joint_distribution_oracle

angles = st.floats(0, 2 * math.pi, allow_nan=False)
unit = st.floats(0, 1)


def test_table_examples():
    d = attenuation_distribution(AttenuationConfig.build((1, 0), (0, 1)))
    assert (d.p12, d.p21, d.loss) == (0.25, 0.25, 0.5)
    d = attenuation_distribution(AttenuationConfig.build((1, 0), (0, 1), d_x2=math.sqrt(0.5)))
    assert d.p21 == pytest.approx(0.125, abs=1e-16)
    assert d.ratio == pytest.approx(0.5, abs=1e-15)
    assert attenuation_distribution(AttenuationConfig.build((H := math.sqrt(0.5), H), (H, H), d_x1=0)).p12 == 0


@settings(max_examples=200, deadline=None)
@given(angles, angles, angles, angles, angles, angles)
def test_all_pass_matches_symmetric_oam(u, v, p1, p2, q1, q2):
    a, b = (math.cos(u), math.sin(u)), (math.cos(v), math.sin(v))
    att = attenuation_distribution(AttenuationConfig.build(a, b, (p1, p2), (q1, q2)))
    base = OamSystemConfig.build(1.0, 0.0, a, b, (p1, p2), (q1, q2))
    assert np.max(np.abs(att.p - joint_distribution_closed(base).p)) <= 1e-13
    assert np.max(np.abs(att.p - joint_distribution_oracle(base).p)) <= 1e-13


@settings(max_examples=100, deadline=None)
@given(angles, angles, angles, unit, unit, unit)
def test_monotone_in_attenuators(u, v, phase, d_lo, d_hi, other):
    d_lo, d_hi = sorted((d_lo, d_hi))
    a, b = (math.cos(u), math.sin(u)), (math.cos(v), math.sin(v))
    low = attenuation_distribution(AttenuationConfig.build(a, b, (phase, 0), (0, 0), d_x1=d_lo, d_y2=other))
    high = attenuation_distribution(AttenuationConfig.build(a, b, (phase, 0), (0, 0), d_x1=d_hi, d_y2=other))
    assert high.p12 >= low.p12
    low = attenuation_distribution(AttenuationConfig.build(a, b, (phase, 0), (0, 0), d_x1=other, d_y2=d_lo))
    high = attenuation_distribution(AttenuationConfig.build(a, b, (phase, 0), (0, 0), d_x1=other, d_y2=d_hi))
    assert high.p12 >= low.p12
    assert high.pair(1, 1) == 0.0 and high.pair(2, 2) == 0.0


def test_bracket_range_and_bound(rng):
    n = 200_000
    u, v = rng.uniform(0, 2 * math.pi, (2, n))
    a = np.column_stack([np.cos(u), np.sin(u)])
    b = np.column_stack([np.cos(v), np.sin(v)])
    phi, psi = rng.uniform(0, 2 * math.pi, (2, n, 2))
    bracket = interference_bracket(a, b, phi, psi)
    assert bracket.min() >= -1e-15 and bracket.max() <= 1 + 1e-15
    d = rng.uniform(0, 1, (4, n))
    p = attenuation_pair_probabilities(a, b, phi, psi, *d)
    assert p[:, 0, 1].max() <= 0.25 + 1e-12
    assert p[:, 0, 1].max() > 0.23


def test_validation():
    with pytest.raises(InvalidConfiguration):
        AttenuationConfig.build((1, 0), (0, 1), d_x1=1.2)
    with pytest.raises(InvalidConfiguration):
        AttenuationConfig(OamSystemConfig.build(0.0, 1.0, (1, 0), (0, 1)))
    with pytest.raises(InvalidConfiguration):
        AttenuationConfig(OamSystemConfig.build(1.0, 0.0, (1, 0, 0), (0, 1, 0)))


def test_attenuation_feasible_cases():
    assert attenuation_feasible(0.25, 0.25)
    assert not attenuation_feasible(0.3, 0.1)
    assert attenuation_feasible(0, 0)
