from __future__ import annotations

import math

import numpy as np
import pytest

from data_models import ContactKind, PositionType, Sphere, StdHyperboloid
from errors import InconclusiveNearTangent
from oracle import (
    Agreement,
    OracleVerdict,
    SampleGrid,
    SideVerdict,
    auto_t_max,
    cross_check,
    fibonacci_sphere,
    oracle_contact,
    oracle_side,
    sample_surface,
)
from conftest import at_margin


def _pair(a, c, center, r):
    return StdHyperboloid(a=a, c=c), Sphere(center=center, r=r)


# ========= 采样网格 ========= #

def test_grid_rejects_too_few_nodes():
    with pytest.raises(ValueError):
        SampleGrid(n_theta=4, n_t=16, t_max=1.0, values=np.zeros((4, 16)))


def test_far_sphere_values_are_positive():
    h, s = _pair(1.0, 1.0, (0.0, 0.0, 20.0), 1.0)
    grid = sample_surface(h, s, 64, 64)
    assert grid.values.shape == (64, 64)
    assert np.all(grid.values > 0)


def test_throat_ring_value():
    h, s = _pair(1.0, 1.0, (0.0, 0.0, 0.0), 2.0)
    grid = sample_surface(h, s, 32, 33)
    middle = grid.values[:, 16]
    np.testing.assert_allclose(middle, 1.0 - 4.0, atol=1e-12)


def test_auto_t_max_covers_sphere():
    h, s = _pair(1.5, 1.6, (2.1, 2.2, 0.3), 1.4)
    t_max = auto_t_max(h, s)
    assert h.c * math.sinh(t_max) > abs(s.z_c) + s.r


# ========= 接触判定 ========= #

def test_example_is_outside(example_pair):
    result = oracle_contact(sample_surface(*example_pair, 256, 256))
    assert result.verdict is OracleVerdict.NO_CONTACT_OUTSIDE
    assert result.components == 0
    assert oracle_side(*example_pair) is SideVerdict.EXTERIOR


def test_interior_sphere():
    h, s = _pair(1.5, 1.6, (0.0, 0.0, 0.0), 1.0)
    assert oracle_contact(sample_surface(h, s, 128, 128)).verdict is OracleVerdict.NO_CONTACT_OUTSIDE
    assert oracle_side(h, s) is SideVerdict.INTERIOR


@pytest.mark.parametrize(
    "a, c, center, r, components",
    [
        (1.5, 1.6, (1.5, 0.0, 0.0), 1.0, 1),
        (1.0, 1.0, (0.0, 0.0, 0.0), 2.0, 2),
        (2.0, 1.0, (math.sqrt(14.25), 0.0, 0.0), 1.5, 2),
    ],
)
def test_contact_components(a, c, center, r, components):
    result = oracle_contact(sample_surface(*_pair(a, c, center, r), 256, 256))
    assert result.verdict is OracleVerdict.CONTACT
    assert result.components == components


def test_components_stable_under_refinement():
    h, s = _pair(1.5, 1.6, (1.5, 0.0, 0.0), 1.0)
    counts = {n: oracle_contact(sample_surface(h, s, n, n)).components for n in (128, 256, 512)}
    assert set(counts.values()) == {1}


def test_near_tangent_is_inconclusive():
    h, s = _pair(1.5, 1.6, (2.5, 0.0, 0.0), 1.0)
    with pytest.raises(InconclusiveNearTangent) as info:
        oracle_contact(sample_surface(h, s, 256, 257))
    assert info.value.min_value < info.value.band


def test_side_sampling_mixed_for_crossing_sphere():
    h, s = _pair(1.5, 1.6, (1.5, 0.0, 0.0), 1.0)
    assert oracle_side(h, s, 500) is SideVerdict.MIXED


def test_fibonacci_points_lie_on_sphere():
    s = Sphere(center=(1.0, -2.0, 0.5), r=0.7)
    pts = fibonacci_sphere(s, 300)
    assert pts.shape == (300, 3)
    np.testing.assert_allclose(np.linalg.norm(pts - s.center_array, axis=1), 0.7, rtol=1e-12)


# ========= 交叉校验 ========= #

def test_cross_check_agrees_on_example(example_pair):
    report = cross_check(*example_pair, resolution=256, side_samples=500)
    assert report.agreement is Agreement.AGREE
    assert report.side is SideVerdict.EXTERIOR


def test_cross_check_exempts_pure_tangency():
    report = cross_check(*_pair(1.5, 1.6, (2.5, 0.0, 0.0), 1.0), resolution=256)
    assert report.agreement is Agreement.EXEMPT
    assert report.status.position is PositionType.TE
    assert report.reasons


def test_cross_check_tangent_with_extra_contact():
    report = cross_check(*_pair(1.0, math.sqrt(0.5), (2.0, 0.0, 0.0), 1.0), resolution=256)
    assert report.status.position is PositionType.TEs1
    assert report.agreement is Agreement.AGREE
    assert report.oracle.verdict is OracleVerdict.CONTACT


def test_cross_check_random_instances():
    seen = set()
    for h, s in at_margin(seed=51, count=400, margin=1e-3, center_span=2.5):
        report = cross_check(h, s, resolution=512, side_samples=500)
        assert report.agreement is not Agreement.DISAGREE, report.reasons
        seen.add(report.status.kind)
    assert ContactKind.NO_CONTACT in seen
    assert ContactKind.TRANSVERSAL in seen
