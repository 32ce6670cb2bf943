import os

import pytest

from ptpartner import models
from ptpartner.errors import TooFewPoints
from ptpartner.report import atomic_write, convergence_csv, convergence_points, emit_svg_convergence
from ptpartner.solver import Contour, convergence_study


@pytest.fixture(scope="module")
def ho_study():
    return convergence_study(models.harmonic(), Contour.real(-10, 10, 250), [250, 500, 1000, 2000], 0)


def test_svg_one_polyline_with_slope(ho_study):
    svg = emit_svg_convergence(convergence_points(ho_study))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 1
    slope = float(svg.split("slope ")[1].split("<")[0])
    assert slope == pytest.approx(2, abs=0.1)


def test_svg_deterministic(ho_study):
    pts = convergence_points(ho_study)
    assert emit_svg_convergence(pts) == emit_svg_convergence(list(pts))


def test_svg_series_mapping():
    svg = emit_svg_convergence({"a": [(0.1, 1e-2), (0.05, 2.5e-3)], "b": [(0.1, 1e-3), (0.05, 2.5e-4)]})
    assert svg.count("<polyline") == 2


@pytest.mark.parametrize("pts", [[], [(0.1, 1e-3)]])
def test_svg_too_few_points(pts):
    with pytest.raises(TooFewPoints):
        emit_svg_convergence(pts)


def test_convergence_csv(ho_study):
    text = convergence_csv([ho_study])
    lines = text.splitlines()
    assert lines[0] == "level,n_points,h,re,im,diff,order"
    assert len(lines) == 5
    assert lines[-1].split(",")[5] == ""


def test_atomic_write_replaces(tmp_path):
    target = tmp_path / "out.txt"
    target.write_text("old")
    atomic_write(target, "new\n")
    assert target.read_text() == "new\n"
    assert os.listdir(tmp_path) == ["out.txt"]


def test_atomic_write_failure_keeps_target(tmp_path, monkeypatch):
    target = tmp_path / "out.txt"
    target.write_text("old")

    def boom(*args):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(OSError):
        atomic_write(target, "new")
    assert target.read_text() == "old"
    assert os.listdir(tmp_path) == ["out.txt"]
