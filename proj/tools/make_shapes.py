#!/usr/bin/env python3
"""Writes the bundled dense point clouds (data/pointclouds/*.off).

Simple CAD-like surfaces sampled uniformly, about 200 units across, so the
noise levels 10..30 of the point-cloud protocol are a visible fraction of the
object size. Deterministic:
rerunning reproduces the files byte for byte.
"""

import argparse
import pathlib

import numpy as np

N = 1500
SCALE = 1.0


def sphere(rng, n):
    v = rng.normal(size=(n, 3))
    return 90.0 * v / np.linalg.norm(v, axis=1, keepdims=True)


def torus(rng, n, big=70.0, small=30.0):
    out = []
    while len(out) < n:
        u, v, w = rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi), rng.uniform()
        # rejection sampling for uniform area density
        if w <= (big + small * np.cos(v)) / (big + small):
            out.append(((big + small * np.cos(v)) * np.cos(u),
                        (big + small * np.cos(v)) * np.sin(u),
                        small * np.sin(v)))
    return np.array(out)


def box(rng, n, half=(90.0, 60.0, 40.0)):
    hx, hy, hz = half
    areas = np.array([hy * hz, hy * hz, hx * hz, hx * hz, hx * hy, hx * hy])
    faces = rng.choice(6, size=n, p=areas / areas.sum())
    p = rng.uniform(-1, 1, size=(n, 3)) * half
    axis = faces // 2
    sign = np.where(faces % 2 == 0, -1.0, 1.0)
    p[np.arange(n), axis] = sign * np.array(half)[axis]
    return p


def cylinder(rng, n, r=60.0, h=180.0):
    side, cap = 2 * np.pi * r * h, np.pi * r * r
    kind = rng.choice(3, size=n, p=np.array([side, cap, cap]) / (side + 2 * cap))
    t = rng.uniform(0, 2 * np.pi, size=n)
    rad = np.where(kind == 0, r, r * np.sqrt(rng.uniform(size=n)))
    z = np.where(kind == 0, rng.uniform(-h / 2, h / 2, size=n), np.where(kind == 1, -h / 2, h / 2))
    return np.column_stack([rad * np.cos(t), rad * np.sin(t), z])


def cone(rng, n, r=80.0, h=160.0):
    slant = np.hypot(r, h)
    side, base = np.pi * r * slant, np.pi * r * r
    on_side = rng.uniform(size=n) < side / (side + base)
    t = rng.uniform(0, 2 * np.pi, size=n)
    s = np.sqrt(rng.uniform(size=n))
    z = np.where(on_side, h / 2 - s * h, -h / 2)
    return np.column_stack([s * r * np.cos(t), s * r * np.sin(t), z])


def chair(rng, n):
    parts = [  # (center, half extents)
        ((0, 0, 0), (50, 50, 6)),          # seat
        ((0, 44, 55), (50, 6, 50)),        # back
        ((-42, -42, -50), (6, 6, 44)),     # legs
        ((42, -42, -50), (6, 6, 44)),
        ((-42, 42, -50), (6, 6, 44)),
        ((42, 42, -50), (6, 6, 44)),
    ]
    area = np.array([2 * (a * b + b * c + a * c) for _, (a, b, c) in parts])
    counts = rng.multinomial(n, area / area.sum())
    pts = [box(rng, k, half) + np.array(c) for (c, half), k in zip(parts, counts)]
    return np.vstack(pts)


SHAPES = {
    "sphere": sphere,
    "torus": torus,
    "box": box,
    "cylinder": cylinder,
    "cone": cone,
    "chair": chair,
}


def write_off(path, pts):
    with open(path, "w") as f:
        f.write("OFF\n%d 0 0\n" % len(pts))
        for p in pts:
            f.write("%.6f %.6f %.6f\n" % tuple(p))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "pointclouds"))
    ap.add_argument("--points", type=int, default=N)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, (name, fn) in enumerate(SHAPES.items()):
        rng = np.random.default_rng(1000 + i)
        write_off(out / f"{name}.off", SCALE * fn(rng, args.points))
        print(out / f"{name}.off")


if __name__ == "__main__":
    main()
