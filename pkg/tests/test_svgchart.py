"""SVG emitter tests: well-formedness, geometry, determinism."""

import xml.etree.ElementTree as ET

import pytest

from trustconnect.svgchart import grouped_bar_svg

LABELS = ["E0", "E1", "E2"]
SERIES = [
    ("btv", [2.0, 3.0, 1.0]),
    ("trust", [1.5, 3.0, 0.5]),
    ("eatv", [1.9, 3.0, 0.8]),
]


def test_is_well_formed_xml():
    svg = grouped_bar_svg("demo", LABELS, SERIES)
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")


def test_one_bar_per_label_per_series():
    svg = grouped_bar_svg("demo", LABELS, SERIES)
    root = ET.fromstring(svg)
    rects = root.findall("{http://www.w3.org/2000/svg}rect")
    # background + 9 bars + 3 legend swatches
    assert len(rects) == 1 + 9 + 3


def test_title_labels_and_legend_present():
    svg = grouped_bar_svg("k=0.5 alpha=0.1", LABELS, SERIES)
    for needle in ["k=0.5 alpha=0.1", "E0", "E1", "E2", "btv", "trust", "eatv"]:
        assert needle in svg


def test_tallest_bar_fills_plot_height():
    svg = grouped_bar_svg("demo", ["a"], [("s", [4.0])])
    root = ET.fromstring(svg)
    rects = root.findall("{http://www.w3.org/2000/svg}rect")
    bar = rects[1]
    assert float(bar.get("height")) == 360 - 34 - 46


def test_all_zero_values_do_not_crash():
    svg = grouped_bar_svg("demo", ["a", "b"], [("s", [0.0, 0.0])])
    root = ET.fromstring(svg)
    rects = root.findall("{http://www.w3.org/2000/svg}rect")
    assert float(rects[1].get("height")) == 0.0


def test_negative_values_clamp_to_zero_height():
    svg = grouped_bar_svg("demo", ["a", "b"], [("s", [-1.0, 2.0])])
    root = ET.fromstring(svg)
    rects = root.findall("{http://www.w3.org/2000/svg}rect")
    assert float(rects[1].get("height")) == 0.0
    assert float(rects[2].get("height")) > 0.0


def test_label_escaping():
    svg = grouped_bar_svg("a <b> & c", ["x<y"], [("s&t", [1.0])])
    ET.fromstring(svg)
    assert "a &lt;b&gt; &amp; c" in svg


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        grouped_bar_svg("demo", ["a", "b"], [("s", [1.0])])


def test_deterministic():
    a = grouped_bar_svg("demo", LABELS, SERIES)
    b = grouped_bar_svg("demo", LABELS, SERIES)
    assert a == b
