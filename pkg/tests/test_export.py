import math

import numpy as np
import pytest

from maxface.bjorling import solve
from maxface.export import (
    sample_surface,
    singular_image_curve,
    write_obj,
    write_polyline_csv,
)
from maxface.fixtures import catenoid_data, shrinking_segment_data, swallowtail_ring_data
from maxface.laurent import Annulus, Rectangle

ANN = Annulus(0.5, 2.0)


@pytest.fixture
def catenoid_sol():
    return solve(catenoid_data(), ANN)


def test_annulus_mesh_shape(catenoid_sol):
    mesh = sample_surface(catenoid_sol, 16, 16)
    assert mesh.n_vertices == 256
    assert mesh.n_faces == 240  # (16-1) * 16, angularly closed
    assert mesh.faces.shape == (240, 4)
    assert mesh.vertices.shape == (256, 3)


def test_rectangle_mesh_shape():
    sol = solve(shrinking_segment_data(), Rectangle(-1.2, 1.2, -0.6, 0.6))
    mesh = sample_surface(sol, 8, 8)
    assert mesh.n_vertices == 64
    assert mesh.n_faces == 49  # (8-1) * (8-1), open in both directions


def test_mesh_minimum_resolution(catenoid_sol):
    with pytest.raises(ValueError):
        sample_surface(catenoid_sol, 4, 16)


def test_singular_flags_on_unit_radius(catenoid_sol):
    # 16 radii over [1/2, 2] include r = 1 exactly; that ring is singular
    mesh = sample_surface(catenoid_sol, 16, 16)
    assert int(np.sum(mesh.vertex_flags)) == 16
    flagged = mesh.vertices[mesh.vertex_flags]
    # for the catenoid the singular ring collapses to the cone point
    assert np.max(np.abs(flagged)) < 1e-12


def test_face_indices_valid(catenoid_sol):
    mesh = sample_surface(catenoid_sol, 9, 12)
    assert mesh.faces.min() >= 0
    assert mesh.faces.max() < mesh.n_vertices
    # each quad references four distinct vertices
    for f in mesh.faces:
        assert len(set(int(i) for i in f)) == 4


def test_singular_image_collapses(catenoid_sol):
    img = singular_image_curve(catenoid_sol)
    assert img.collapsed
    assert np.max(np.abs(img.points)) < 1e-12


def test_singular_image_ring_marked():
    sol = solve(swallowtail_ring_data(4), ANN)
    marks = (math.pi / 8, math.pi / 2)
    img = singular_image_curve(sol, samples=128, marked=marks)
    assert not img.collapsed
    assert img.marked_points.shape == (2, 3)
    with pytest.raises(ValueError):
        singular_image_curve(sol, samples=16)


def test_write_obj_roundtrip(tmp_path, catenoid_sol):
    mesh = sample_surface(catenoid_sol, 16, 16)
    out = write_obj(mesh, tmp_path / "catenoid.obj")
    text = out.read_text().splitlines()
    vs = [l for l in text if l.startswith("v ")]
    fs = [l for l in text if l.startswith("f ")]
    assert len(vs) == 256 and len(fs) == 240
    # vertex coordinates survive a parse round trip exactly
    first = np.array([float(c) for c in vs[0].split()[1:]])
    assert first == pytest.approx(mesh.vertices[0], abs=0.0)
    # all face indices are 1-based and in range
    idx = [int(i) for l in fs for i in l.split()[1:]]
    assert min(idx) == 1 and max(idx) <= 256
    sing = (tmp_path / "catenoid.obj.sing").read_text().split()
    assert len(sing) == 16
    assert all(1 <= int(i) <= 256 for i in sing)


def test_write_polyline_csv(tmp_path):
    sol = solve(swallowtail_ring_data(4), ANN)
    img = singular_image_curve(sol, samples=64)
    out = write_polyline_csv(img.ts, img.points, tmp_path / "curve.csv")
    lines = out.read_text().splitlines()
    assert lines[0] == "t,x,y,z"
    assert len(lines) == 65
    row = [float(c) for c in lines[1].split(",")]
    assert row[0] == pytest.approx(img.ts[0])
    assert row[1:] == pytest.approx(img.points[0], abs=0.0)


def test_write_polyline_collapsed(tmp_path, catenoid_sol):
    img = singular_image_curve(catenoid_sol)
    out = write_polyline_csv(img.ts, img.points, tmp_path / "cone.csv",
                             collapse=img.collapsed)
    lines = out.read_text().splitlines()
    assert len(lines) == 2  # header plus the cone point


def test_empty_exports_rejected(tmp_path, catenoid_sol):
    mesh = sample_surface(catenoid_sol, 8, 8)
    empty = mesh.__class__(vertices=mesh.vertices[:0], faces=mesh.faces[:0],
                           vertex_flags=mesh.vertex_flags[:0], n_u=0, n_v=0)
    with pytest.raises(ValueError):
        write_obj(empty, tmp_path / "empty.obj")
    with pytest.raises(ValueError):
        write_polyline_csv(np.zeros(0), np.zeros((0, 3)), tmp_path / "empty.csv")
