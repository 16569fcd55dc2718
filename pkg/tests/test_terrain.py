import math

import numpy as np
import pytest

from glideplan import (AircraftBelowTerrainError, DtmFormatError, DtmGrid,
                       Wind, build_local_obstacle_map, build_manifold,
                       load_bundled_aircraft, load_dtm, load_esri_ascii,
                       load_srtm_hgt, synthetic_grid)

_MODEL = load_bundled_aircraft("cessna172")
_MANIFOLD = build_manifold(_MODEL, Wind(0.0, 0.0))


def test_synthetic_flat_and_ramp():
    g = synthetic_grid({"nx": 5, "ny": 4, "dx": 10.0, "dy": 20.0,
                        "base": 100.0, "clearance_m": 0.0})
    assert g.shape == (5, 4)
    assert g.dtm_at(0.0, 0.0) == pytest.approx(100.0)
    assert g.dtm_at(37.5, 42.0) == pytest.approx(100.0)

    r = synthetic_grid({"nx": 5, "ny": 5, "dx": 10.0, "dy": 10.0,
                        "x0": 50.0, "y0": -20.0, "base": 10.0,
                        "ramp": {"gx": 0.1, "gy": -0.05},
                        "clearance_m": 0.0})
    assert r.dtm_at(50.0, -20.0) == pytest.approx(10.0)
    assert r.dtm_at(80.0, -20.0) == pytest.approx(13.0)
    assert r.dtm_at(50.0, 20.0) == pytest.approx(8.0)


def test_synthetic_hill_peak_and_decay():
    g = synthetic_grid({"nx": 21, "ny": 21, "dx": 100.0, "dy": 100.0,
                        "base": 0.0,
                        "hills": [{"cx": 1000.0, "cy": 1000.0,
                                   "height": 200.0, "sigma": 300.0}],
                        "clearance_m": 0.0})
    assert g.dtm_at(1000.0, 1000.0) == pytest.approx(200.0)
    assert g.dtm_at(1000.0, 1300.0) == pytest.approx(200.0 * math.exp(-0.5))


def test_clearance_is_added_on_query():
    g = synthetic_grid({"nx": 3, "ny": 3, "dx": 10.0, "dy": 10.0,
                        "base": 40.0, "clearance_m": 50.0})
    assert g.dtm_at(5.0, 5.0) == pytest.approx(90.0)
    assert g.elevations[0, 0] == pytest.approx(40.0)   # raw stays raw


def test_dtm_at_rejects_outside_hull(flat_grid):
    with pytest.raises(ValueError):
        flat_grid.dtm_at(-1.0, 0.0)
    assert flat_grid.contains(0.0, 0.0)
    assert not flat_grid.contains(1e9, 0.0)


def test_grid_validation():
    with pytest.raises(ValueError):
        DtmGrid(0, 0, 10.0, 10.0, np.zeros((1, 5)))
    with pytest.raises(ValueError):
        DtmGrid(0, 0, -1.0, 10.0, np.zeros((5, 5)))
    bad = np.zeros((5, 5))
    bad[2, 2] = np.nan
    with pytest.raises(ValueError):
        DtmGrid(0, 0, 10.0, 10.0, bad)


def test_esri_ascii_orientation(tmp_path):
    # 2 rows x 3 cols; the FIRST data row is the NORTH edge
    p = tmp_path / "t.asc"
    p.write_text("ncols 3\nnrows 2\nxllcorner 100.0\nyllcorner 200.0\n"
                 "cellsize 30.0\nNODATA_value -9999\n"
                 "1 2 3\n4 5 6\n")
    g = load_esri_ascii(p, clearance=0.0)
    assert g.shape == (2, 3)           # (north count, east count)
    assert g.x0 == 200.0 and g.y0 == 100.0
    assert g.elevations[0, 0] == 4.0   # south-west sample
    assert g.elevations[1, 0] == 1.0   # north-west sample
    assert g.elevations[0, 2] == 6.0   # south-east sample


def test_esri_ascii_nodata_filled(tmp_path):
    p = tmp_path / "v.asc"
    p.write_text("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 10\n"
                 "NODATA_value -9999\n7 -9999\n7 7\n")
    g = load_esri_ascii(p, clearance=0.0)
    assert np.all(g.elevations == 7.0)


def test_esri_ascii_rejects_bad_files(tmp_path):
    p = tmp_path / "short.asc"
    p.write_text("ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 30\n"
                 "1 2 3\n")
    with pytest.raises(DtmFormatError):
        load_esri_ascii(p)
    q = tmp_path / "nohdr.asc"
    q.write_text("1 2\n3 4\n")
    with pytest.raises(DtmFormatError):
        load_esri_ascii(q)


def test_srtm_hgt_roundtrip(tmp_path):
    side = 1201
    e = np.zeros((side, side), dtype=">i2")
    e[0, 0] = 500          # NW corner in file order
    e[side - 1, 0] = 300   # SW corner
    e[5, 7] = -32768       # a void, expect nearest-neighbor fill
    p = tmp_path / "N00E000.hgt"
    p.write_bytes(e.tobytes())
    g = load_srtm_hgt(p, clearance=0.0)
    assert g.shape == (side, side)
    assert g.dx == pytest.approx(111320.0 / (side - 1))
    assert g.elevations[0, 0] == 300.0          # south-west
    assert g.elevations[side - 1, 0] == 500.0   # north-west
    assert np.isfinite(g.elevations).all()
    assert not np.any(g.elevations == -32768)


def test_srtm_hgt_rejects_odd_sizes(tmp_path):
    p = tmp_path / "bad.hgt"
    p.write_bytes(b"\x00" * 1000)
    with pytest.raises(DtmFormatError):
        load_srtm_hgt(p)


def test_load_dtm_dispatch(tmp_path):
    g = load_dtm({"nx": 4, "ny": 4, "dx": 10.0, "dy": 10.0},
                 "synthetic-spec", clearance=0.0)
    assert g.shape == (4, 4)
    with pytest.raises(DtmFormatError):
        load_dtm(tmp_path / "x", "geotiff")


def test_obstacle_map_flat_terrain_all_safe(flat_grid):
    lomap = build_local_obstacle_map(flat_grid, _MANIFOLD, (2000.0, 2000.0),
                                     2000.0)
    assert not lomap.unsafe.any()
    # margin at the anchor node itself is altitude minus dtm there
    i = int(round((2000.0 - flat_grid.x0) / flat_grid.dx))
    j = int(round((2000.0 - flat_grid.y0) / flat_grid.dy))
    assert lomap.lo_values[i, j] == pytest.approx(
        2000.0 - flat_grid.dtm_at(2000.0, 2000.0))


def test_obstacle_map_low_altitude_far_cells_unsafe(flat_grid):
    lomap = build_local_obstacle_map(flat_grid, _MANIFOLD, (2000.0, 2000.0),
                                     flat_grid.clearance + 60.0)
    # 60 m of headroom reaches ~675 m of range; map corners are ~2.8 km away
    assert lomap.unsafe.any()
    assert not lomap.unsafe[lomap.cell_of(2000.0, 2000.0)]
    assert lomap.unsafe[0, 0]


def test_obstacle_map_hill_blocks():
    from conftest import hill_grid
    g = hill_grid(height=300.0)
    lomap = build_local_obstacle_map(g, _MANIFOLD, (200.0, 200.0), 500.0)
    assert lomap.unsafe[lomap.cell_of(1600.0, 1600.0)]
    assert not lomap.unsafe[lomap.cell_of(300.0, 300.0)]


def test_obstacle_map_rejects_buried_anchor(flat_grid):
    with pytest.raises(AircraftBelowTerrainError):
        build_local_obstacle_map(flat_grid, _MANIFOLD, (2000.0, 2000.0), 10.0)


def test_point_in_obstacle_interior_on_grid_lines():
    from conftest import hill_grid
    g = hill_grid(height=300.0)
    lomap = build_local_obstacle_map(g, _MANIFOLD, (200.0, 200.0), 500.0)
    # the hill summit node sits on the shared corner of four unsafe squares
    assert lomap.point_in_obstacle_interior(1600.0, 1600.0)
    assert not lomap.point_in_obstacle_interior(200.0, 200.0)
