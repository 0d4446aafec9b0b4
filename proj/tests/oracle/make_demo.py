#!/usr/bin/env python3
"""Generates the bundled demo fixtures in data/demo/.

The synthetic coast is two wobbly mainland blobs either side of a sea
channel, one surviving island and one small islet (dropped by island
filtering at partition size 100). The raster is a smooth seabed with a
ridge. Run from the repo root:

    python3 tests/oracle/make_demo.py
"""
import json
import math
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent.parent / "data" / "demo"


def blob(clon, clat, rlon, rlat, n):
    pts = []
    for i in range(n):
        th = 2 * math.pi * i / n
        wob = 1.0 + 0.05 * math.sin(5 * th) + 0.03 * math.cos(3 * th)
        pts.append([clon + rlon * math.cos(th) * wob,
                    clat + rlat * math.sin(th) * wob])
    return pts


def ring_feature(fid, cls, pts):
    return {
        "type": "Feature",
        "properties": {"id": fid, "class": cls},
        "geometry": {"type": "Polygon", "coordinates": [pts + [pts[0]]]},
    }


def coast():
    features = [
        ring_feature("west-mainland", "coarse", blob(-6.0, 56.0, 2.0, 5.5, 400)),
        ring_feature("east-mainland", "fine", blob(6.0, 56.0, 2.0, 5.5, 300)),
        ring_feature("mid-island", "fine", blob(-1.0, 57.5, 0.12, 0.1, 150)),
        ring_feature("tiny-islet", "fine", blob(1.0, 54.5, 0.05, 0.04, 40)),
    ]
    doc = {"type": "FeatureCollection", "features": features}
    (OUT / "coast.geojson").write_text(json.dumps(doc) + "\n")


def bathy():
    nrows = ncols = 40
    xll, yll, cell = -2.0, 54.0, 0.1
    rows = []
    for r in range(nrows):
        row = []
        for c in range(ncols):
            x = xll + (c + 0.5) * cell
            y = yll + (nrows - r - 0.5) * cell
            depth = -60.0 + 35.0 * math.exp(-((x + 0.5) ** 2 + (y - 56.0) ** 2) / 1.5)
            depth += 8.0 * math.sin(4.0 * x) * math.cos(3.0 * y)
            row.append(f"{depth:.17g}")
        rows.append(" ".join(row))
    header = (f"ncols {ncols}\nnrows {nrows}\nxllcorner {xll}\nyllcorner {yll}\n"
              f"cellsize {cell}\nNODATA_value -9999\n")
    (OUT / "bathy.asc").write_text(header + "\n".join(rows) + "\n")


def config():
    doc = {
        "threads": 1,
        "shorelines": {"in": "coast.geojson", "out": "demo_out/coast_simplified.geojson"},
        "classes": {
            "coarse": {"partition": 100, "modes": 1},
            "fine": {"partition": 100, "modes": 5},
        },
        "raster": {
            "in": "bathy.asc",
            "out": "demo_out/bathy_simplified.asc",
            "block": [4, 4],
            "modes": 6,
        },
        "open_boundaries": [
            {"id": "north", "samples": 200, "loxodromes": [
                {"start": [-6.0, 60.0], "bearing": 90.0, "stop_lon": 6.0},
            ]},
            {"id": "mid", "samples": 200, "loxodromes": [
                {"start": [-6.0, 56.0], "bearing": 90.0, "stop_lon": 6.0},
            ]},
            {"id": "south", "samples": 200, "loxodromes": [
                {"start": [-6.0, 52.0], "bearing": 135.0, "stop_lat": 50.2},
                {"start": [6.0, 52.0], "bearing": -135.0, "stop_lat": 50.2},
            ]},
        ],
        "gradation": [
            {"class": "coarse", "h_min": 0.01, "plateau": 0.02, "ramp": 1.0, "h_max": 1.5},
            {"class": "fine", "h_min": 0.005, "plateau": 0.02, "ramp": 1.0, "h_max": 1.5},
        ],
        "h_max": 1.5,
        "outputs": {
            "loops": "demo_out/loops.geojson",
            "geo": "demo_out/domain.geo",
        },
    }
    (OUT / "demo.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    coast()
    bathy()
    config()
    print(f"wrote demo fixtures to {OUT}")
