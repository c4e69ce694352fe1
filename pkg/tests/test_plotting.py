from __future__ import annotations

import math

from data_models import PositionType, Sphere, StdHyperboloid
from plotting import plot_bounds, plot_cross_section


def test_bounds_contain_circle_and_throat(example_pair):
    h, s = example_pair
    bounds = plot_bounds(h, s)
    for rho, z in [
        (s.rho_c - s.r, s.z_c),
        (s.rho_c + s.r, s.z_c),
        (s.rho_c, s.z_c - s.r),
        (s.rho_c, s.z_c + s.r),
        (h.a, 0.0),
        (-h.a, 0.0),
    ]:
        assert bounds.contains(rho, z)


def test_bounds_for_sphere_far_above():
    h = StdHyperboloid(a=1.0, c=0.5)
    s = Sphere(center=(0.0, 0.0, 10.0), r=1.0)
    bounds = plot_bounds(h, s)
    assert bounds.contains(0.0, 11.0)
    assert bounds.contains(1.0, 0.0)
    assert bounds.z_min < -0.5


def test_svg_is_deterministic(tmp_path, example_pair):
    h, s = example_pair
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    plot_cross_section(h, s, first, PositionType.E)
    plot_cross_section(h, s, second, PositionType.E)
    assert first.read_bytes() == second.read_bytes()
    text = first.read_text(encoding="utf-8")
    assert "<svg" in text
    assert "type: E" in text


def test_circle_drawn_at_horizontal_distance(example_pair):
    h, s = example_pair
    assert s.rho_c == math.hypot(2.1, 2.2)
    assert abs(s.rho_c - 3.0414) < 1e-4
    bounds = plot_bounds(h, s)
    assert bounds.rho_max >= s.rho_c + s.r
