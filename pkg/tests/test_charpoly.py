from __future__ import annotations

import math

import numpy as np
import pytest

from charpoly import (
    cardano,
    characteristic_determinant,
    full_quartic,
    pencil_eigenvalues,
    residual_cubic,
    root_set,
    solve_cubic,
)
from config import DEFAULT_TOLERANCES
from data_models import CubicPoly, RootStructure, Sphere, StdHyperboloid
from conftest import random_instances


def _pair(a, c, center, r):
    return StdHyperboloid(a=a, c=c), Sphere(center=center, r=r)


def _real_roots(rs):
    return [(round(r.value, 9), r.multiplicity) for r in rs.clusters()]


# ========= 多项式构造 ========= #

@pytest.mark.parametrize(
    "a, c, center, r, expected",
    [
        (1.5, 1.6, (2.1, 2.2, 0.3), 1.4, (-7.69, 17.1099, -11.2896)),
        (1.0, 1.0, (0.0, 0.0, 0.0), 1.0, (1.0, -1.0, -1.0)),
        (math.sqrt(2), 2.0, (0.0, 0.0, 3.0), math.sqrt(5), (-6.0, -36.0, -40.0)),
    ],
)
def test_residual_cubic(a, c, center, r, expected):
    g = residual_cubic(*_pair(a, c, center, r))
    assert (g.a2, g.a1, g.a0) == pytest.approx(expected, abs=1e-9)


def test_full_quartic_example(example_pair):
    f = full_quartic(*example_pair)
    assert f.coefficients == pytest.approx(
        (0.0771605, -0.419753, -0.0148611, 2.09936, -1.96), abs=1e-5
    )


def test_full_quartic_unit_case():
    f = full_quartic(*_pair(1.0, 1.0, (0.0, 0.0, 0.0), 1.0))
    assert f.coefficients == pytest.approx((1.0, 2.0, 0.0, -2.0, -1.0), abs=1e-12)


def test_full_quartic_landmark_values():
    for h, s in random_instances(seed=21, count=200):
        f = full_quartic(h, s)
        scale = sum(abs(v) * h.a2 ** k for k, v in enumerate(reversed(f.coefficients)))
        assert abs(f(-h.a2)) <= 1e-10 * scale
        assert f(0.0) == pytest.approx(-s.r2, rel=1e-10)


def test_quartic_matches_determinant():
    rng = np.random.default_rng(8)
    for h, s in random_instances(seed=22, count=50):
        f = full_quartic(h, s)
        for lam in rng.uniform(-5, 5, size=4):
            det = characteristic_determinant(h, s, float(lam))
            assert f(float(lam)) == pytest.approx(det, rel=1e-8, abs=1e-8)


# ========= Cardano ========= #

def test_cardano_example(example_pair):
    disc = cardano(residual_cubic(*example_pair))
    assert disc.delta == pytest.approx(-0.340702, abs=1e-5)
    assert disc.delta == pytest.approx(disc.q ** 3 + disc.r ** 2, rel=1e-15)


def test_cardano_double_root():
    assert cardano(CubicPoly(1.0, -1.0, -1.0)).delta == pytest.approx(0.0, abs=1e-15)


def test_cardano_complex_pair():
    disc = cardano(CubicPoly(0.0, 0.0, 1.0))
    assert (disc.q, disc.r, disc.delta) == pytest.approx((0.0, -0.5, 0.25))
    assert disc.structure(DEFAULT_TOLERANCES.eps_delta) is RootStructure.COMPLEX_PAIR


# ========= 求根 ========= #

def test_solve_cubic_example(example_pair):
    out = solve_cubic(residual_cubic(*example_pair))
    assert [r.value for r in out.roots] == pytest.approx([1.23656, 2.09451, 4.35893], abs=1e-4)
    assert out.complex_root is None


@pytest.mark.parametrize(
    "coeffs, expected",
    [
        ((-6.0, -36.0, -40.0), [(-2.0, 2), (10.0, 1)]),
        ((1.0, -1.0, -1.0), [(-1.0, 2), (1.0, 1)]),
        ((-10.0, 28.0, -24.0), [(2.0, 2), (6.0, 1)]),
        ((-3.0, 3.0, -1.0), [(1.0, 3)]),
    ],
)
def test_solve_cubic_multiple_roots(coeffs, expected):
    out = solve_cubic(CubicPoly(*coeffs))
    assert [(r.value, r.multiplicity) for r in out.roots] == [
        (pytest.approx(v, abs=1e-9), m) for v, m in expected
    ]


def test_solve_cubic_complex_pair():
    out = solve_cubic(CubicPoly(0.0, 0.0, 1.0))
    assert [r.value for r in out.roots] == pytest.approx([-1.0])
    assert out.complex_root.real == pytest.approx(0.5)
    assert out.complex_root.imag == pytest.approx(math.sqrt(3) / 2)


def test_solve_cubic_structure_matches_discriminant():
    for h, s in random_instances(seed=23, count=2000):
        cubic = residual_cubic(h, s)
        structure = cardano(cubic).structure(DEFAULT_TOLERANCES.eps_delta)
        out = solve_cubic(cubic)
        if structure is RootStructure.COMPLEX_PAIR:
            assert out.complex_root is not None
        elif structure is RootStructure.THREE_DISTINCT:
            assert [r.multiplicity for r in out.roots] == [1, 1, 1]
        else:
            assert max(r.multiplicity for r in out.roots) >= 2
        assert out.multiplicity == 3


# ========= 根集 ========= #

def test_root_set_origin_inside_throat():
    rs = root_set(*_pair(1.5, 1.6, (0.0, 0.0, 0.0), 1.0))
    assert _real_roots(rs) == [(-2.25, 2), (-1.0, 1), (2.56, 1)]


def test_root_set_circle_tangent():
    rs = root_set(*_pair(math.sqrt(2), 2.0, (0.0, 0.0, 3.0), math.sqrt(5)))
    clusters = rs.clusters()
    assert [(r.multiplicity) for r in clusters] == [3, 1]
    assert clusters[0].value == pytest.approx(-2.0, abs=1e-9)
    assert clusters[1].value == pytest.approx(10.0, abs=1e-9)


def test_root_set_flat_throat_example():
    rs = root_set(*_pair(2.0, 1.0, (3.0, 3.0, -1.0), math.sqrt(6)))
    assert _real_roots(rs) == [(-4.0, 1), (2.0, 2), (6.0, 1)]


def test_root_set_throat_point_configuration():
    rs = root_set(*_pair(1.0, 1.0, (3.0, 0.0, 0.0), 2.0))
    assert _real_roots(rs) == [(-1.0, 1), (1.0, 1), (2.0, 2)]


def test_root_set_origin_closed_form():
    rng = np.random.default_rng(31)
    for _ in range(100):
        a = float(rng.uniform(0.5, 2.0))
        c = float(rng.uniform(0.5, 2.0))
        r = float(rng.uniform(0.1, 0.9)) * a
        rs = root_set(*_pair(a, c, (0.0, 0.0, 0.0), r))
        clusters = rs.clusters()
        assert [m.multiplicity for m in clusters] == [2, 1, 1]
        assert clusters[0].value == -a * a
        assert clusters[1].value == pytest.approx(-r * r, rel=1e-10)
        assert clusters[2].value == pytest.approx(c * c, rel=1e-10)


def test_root_set_axis_closed_form():
    rng = np.random.default_rng(32)
    checked = 0
    while checked < 100:
        a, c, r = (float(v) for v in rng.uniform(0.5, 2.0, size=3))
        z = float(rng.uniform(-3.0, 3.0))
        b = c * c - r * r + z * z
        sq = math.sqrt(b * b + 4 * c * c * r * r)
        lam_plus, lam_minus = (b + sq) / 2, (b - sq) / 2
        # λ- 贴近 -a² 时会并成重根
        if abs(lam_minus + a * a) < 0.05:
            continue
        rs = root_set(*_pair(a, c, (0.0, 0.0, z), r))
        values = sorted(root.value for root in rs.roots)
        assert values == pytest.approx(sorted([-a * a, lam_minus, lam_plus]), rel=1e-9)
        checked += 1


def test_root_set_complex_pair_closed_form():
    rng = np.random.default_rng(33)
    for _ in range(50):
        a = float(rng.uniform(0.5, 2.0))
        c = float(rng.uniform(0.5, 2.0))
        r = float(rng.uniform(0.2, 1.8)) * a
        rs = root_set(*_pair(a, c, (a, 0.0, 0.0), r))
        assert rs.complex_root is not None
        assert rs.complex_root.real == pytest.approx(-r * r / 2, rel=1e-9, abs=1e-9)
        assert rs.complex_root.imag == pytest.approx(r * math.sqrt(4 * a * a - r * r) / 2, rel=1e-9)


def test_root_set_throat_tangent_family():
    rng = np.random.default_rng(34)
    for _ in range(50):
        a, r = (float(v) for v in rng.uniform(0.5, 2.0, size=2))
        c = math.sqrt(float(rng.uniform(0.2, 0.8)) * a * r)
        rs = root_set(*_pair(a, c, (a + r, 0.0, 0.0), r))
        clusters = rs.clusters()
        assert [m.multiplicity for m in clusters] == [1, 1, 2]
        assert clusters[0].value == pytest.approx(-a * a, rel=1e-8)
        assert clusters[1].value == pytest.approx(c * c, rel=1e-8)
        assert clusters[2].value == pytest.approx(a * r, rel=1e-8)


def test_root_product_identity():
    eps = DEFAULT_TOLERANCES.eps_delta
    for h, s in random_instances(seed=35, count=10_000):
        rs = root_set(h, s)
        expected = -h.a2 * h.a2 * h.c2 * s.r2
        # 判别式近零带内的两根被合并为重根，乘积只在带宽量级上吻合
        in_band = rs.discriminant.structure(eps) is RootStructure.MULTIPLE
        assert rs.product() == pytest.approx(expected, rel=1e-6 if in_band else 1e-8)
        assert sum(r.multiplicity for r in rs.clusters()) + (2 if rs.has_complex else 0) == 4
        assert all(v != 0 for v in rs.values())
        assert any(r.value > 0 for r in rs.roots)


def test_pencil_eigenvalues_match_root_set(example_pair):
    eig = pencil_eigenvalues(*example_pair)
    expected = sorted(v.real for v in root_set(*example_pair).values())
    np.testing.assert_allclose(eig.real, expected, rtol=1e-9)
    np.testing.assert_allclose(eig.imag, 0.0, atol=1e-9)


# ========= 不变量 ========= #

def test_cubic_landmark_values():
    for h, s in random_instances(seed=36, count=1000):
        g = residual_cubic(h, s)
        scale = 1.0 + abs(g.a2) * h.a2 ** 2 + abs(g.a1) * h.a2 + abs(g.a0) + h.a2 ** 3
        assert g(-h.a2) == pytest.approx(-h.a2 * (h.a2 + h.c2) * s.rho2, rel=1e-8, abs=1e-12 * scale)
        scale = 1.0 + abs(g.a2) * h.c2 ** 2 + abs(g.a1) * h.c2 + abs(g.a0) + h.c2 ** 3
        assert g(h.c2) == pytest.approx(-h.c2 * (h.a2 + h.c2) * s.z_c ** 2, rel=1e-8, abs=1e-12 * scale)
        assert g(-h.a2) <= 1e-12 * scale


def test_roots_invariant_under_mirror_and_rotation():
    for h, s in random_instances(seed=37, count=300):
        x, y, z = s.center
        phi = 0.7
        rotated = (x * math.cos(phi) - y * math.sin(phi), x * math.sin(phi) + y * math.cos(phi), -z)
        a = sorted(v.real for v in root_set(h, s).values())
        b = sorted(v.real for v in root_set(h, Sphere(center=rotated, r=s.r)).values())
        assert a == pytest.approx(b, rel=1e-7, abs=1e-7)


def test_ordering_exclusions():
    for h, s in random_instances(seed=38, count=5000):
        rs = root_set(h, s)
        if rs.has_complex:
            continue
        cubic = [r.value for r in rs.roots for _ in range(r.multiplicity)]
        negatives = sorted(v for v in cubic if v < 0)
        positives = sorted(v for v in cubic if v > 0)
        if len(negatives) == 2:
            assert not negatives[0] < -h.a2 < negatives[1] or (
                min(abs(v + h.a2) for v in negatives) <= 1e-7 * rs.scale
            )
        if len(positives) == 3:
            assert not positives[0] < h.c2 < positives[1] or (
                min(abs(v - h.c2) for v in positives) <= 1e-7 * rs.scale
            )
