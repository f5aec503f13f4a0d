import xml.etree.ElementTree as ET

import numpy as np
import pytest

from srgrand.curves import curves_to_csv, emit_curves, pq_family
from srgrand.ldp import ExponentCurve, capacity_sr, critical_rate
from srgrand.svg import render_svg, render_svg_text


def test_pq_family():
    fam = pq_family(0.05, [1, 0.5, 0.25, 0.1])
    assert [q * p for q, p in fam] == pytest.approx([0.05] * 4)
    with pytest.raises(ValueError):
        pq_family(0.05, [0.01])


def test_exponent_family_ordering_and_markers():
    curves = emit_curves("error_exponents", pq_family(0.05, [1, 0.5, 0.25, 0.1]))
    ys = np.array([c.ys for c in curves])
    assert np.all(np.diff(ys, axis=0) >= -1e-12)  # exponent grows as q shrinks
    lowest = curves[0]
    for c in curves[1:]:
        below = c.xs < capacity_sr(c.meta["q"], c.meta["p"])
        assert np.all(lowest.ys[below] <= c.ys[below] + 1e-12)
    for c in curves:
        assert c.is_convex(1e-6)
        (x, _), = c.markers
        assert x == pytest.approx(critical_rate(c.meta["q"], c.meta["p"]))


def test_mean_boundary_markers():
    (c,) = emit_curves("error_exponents", [(0.4, 0.05)], boundary="mean")
    assert c.markers[0][0] == pytest.approx(critical_rate(0.4, 0.05, "mean"))


def test_approx_perf_shapes():
    curves = emit_curves("approx_perf", pq_family(0.01, [1.0, 0.5]), n=100)
    kinds = [c.meta["quantity"] for c in curves]
    assert kinds == ["bler", "queries_per_bit", "bler", "queries_per_bit", "brute_force"]
    bler = curves[0].ys
    assert np.all(np.diff(bler) >= -1e-300) and bler[-1] == 1.0


def test_capacity_curves():
    curves = emit_curves("capacity", [0.05, 0.2], np.linspace(0, 1, 11))
    for sr, hard in zip(curves[::2], curves[1::2]):
        assert np.all(sr.ys >= hard.ys - 1e-15)


def test_unknown_kind():
    with pytest.raises(ValueError):
        emit_curves("nonsense", [])


def test_curves_csv():
    text = curves_to_csv(emit_curves("error_exponents", [(0.4, 0.1)], [0.2, 0.5]))
    lines = text.strip().split("\n")
    assert lines[0].startswith("series,")
    assert len(lines) == 1 + 2 + 1


def test_svg_is_well_formed(tmp_path):
    curves = emit_curves("approx_perf", [(0.5, 0.02)], n=50)
    root = ET.fromstring(render_svg_text(curves, log_y=True, title="a & b"))
    assert root.tag.endswith("svg")
    assert len(root.findall("{http://www.w3.org/2000/svg}polyline")) >= len(curves)
    path = tmp_path / "x.svg"
    render_svg(curves, path)
    ET.parse(path)
    with pytest.raises(OSError, match="cannot write"):
        render_svg(curves, tmp_path / "missing" / "x.svg")


def test_svg_handles_empty_and_nonfinite():
    ET.fromstring(render_svg_text([]))
    ET.fromstring(render_svg_text([ExponentCurve([0, 1, 2], [1, np.inf, 0])], log_y=True))
