"""
Tests for the SVG renderer.
"""

from fractions import Fraction

import pytest

from corals.core.errors import OutputUnwritable, ParseError
from corals.plot.svg import clip_ray, parse_viewport, plot, render_coral, render_tree, write_svg
from corals.tropical.counting import extend_coral

from tests.conftest import P, V

VIEWPORT = parse_viewport("-6,0,6,8")


def test_parse_viewport():
    assert VIEWPORT == (-6, 0, 6, 8)
    assert parse_viewport("-1/2, 0, 1/2, 2")[0] == Fraction(-1, 2)
    with pytest.raises(ParseError):
        parse_viewport("1,0,0,1")
    with pytest.raises(ParseError):
        parse_viewport("0,0,1")


def test_clip_ray():
    assert clip_ray(P(0, 2), V(2, 1), VIEWPORT) == P(6, 5)
    assert clip_ray(P(0, 2), V(0, 1), VIEWPORT) == P(0, 8)
    assert clip_ray(P(0, 2), V(1, 0), (-6, 0, 6, 1)) is None


def test_coral_figure_elements(simple_coral):
    svg = render_coral(simple_coral, VIEWPORT)
    assert svg.startswith("<?xml")
    assert svg.rstrip().endswith("</svg>")
    assert svg.count('class="segment"') == 1
    assert svg.count('class="ray"') == 2
    assert svg.count('class="boundary"') == 1
    assert svg.count('class="extension"') == 1
    assert svg.count('class="weight"') == 3


def test_rendering_is_deterministic(simple_coral):
    assert render_coral(simple_coral, VIEWPORT) == render_coral(simple_coral, VIEWPORT)


def test_tree_figure_labels_regions(simple_tree):
    svg = render_tree(simple_tree)
    assert "p01=2" in svg
    assert "p12=-3" in svg
    assert "p02=0" in svg
    assert svg.count('class="edge"') == 3


def test_plot_writes_curves(simple_coral, tmp_path):
    out = tmp_path / "curve.svg"
    text = plot(extend_coral(simple_coral), str(out))
    assert out.read_text(encoding="utf-8") == text
    assert text.count('class="ray"') == 2


def test_unwritable_output(tmp_path):
    with pytest.raises(OutputUnwritable):
        write_svg("<svg/>", str(tmp_path))
