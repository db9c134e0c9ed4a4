"""Stable text formats for point sets and clustering results.

Points file: an optional header line ``# dim=<d> colored=<0|1>`` followed by
one point per line, whitespace separated, 17 significant digits (doubles
round-trip bit-exactly). Colored files carry the integer color as the first
field; colors must form the contiguous range 0..k-1. Files without a header
are read as uncolored with the dimension inferred from the field count.

Clustering file: a JSON document with sorted keys holding the declared kind
and sigma, zero-based cluster index arrays, extraction balls when available,
quality, the verification verdict, algorithm name, alpha, seed, and tool
version. Serialization is deterministic byte for byte.
"""

from __future__ import annotations

import json

import numpy as np

from ._version import __version__
from .algorithms import ColoredInstance
from .geometry import Ball, PointSet
from .separation import Clustering, SeparationKind, check_separation, quality


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def points_text(obj) -> str:
    colored = isinstance(obj, ColoredInstance)
    ps = obj.points if colored else obj
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    lines = [f"# dim={ps.dim} colored={int(colored)}"]
    for i in range(ps.n):
        fields = [format_float(v) for v in ps.coords[i]]
        if colored:
            fields.insert(0, str(int(obj.colors[i])))
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def parse_points(text: str):
    dim = None
    colored = False
    rows = []
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if not saw_header and not rows:
                saw_header = True
                for token in line.lstrip("#").split():
                    key, _, value = token.partition("=")
                    if key == "dim":
                        dim = int(value)
                    elif key == "colored":
                        colored = bool(int(value))
            continue
        fields = line.split()
        try:
            if colored:
                color = int(fields[0])
                coords = [float(v) for v in fields[1:]]
            else:
                color = None
                coords = [float(v) for v in fields]
        except (ValueError, IndexError):
            raise ValueError(f"line {lineno}: cannot parse point {line!r}") from None
        rows.append((color, coords))
    if not rows:
        raise ValueError("points file holds no points")
    widths = {len(c) for _, c in rows}
    if len(widths) != 1:
        raise ValueError("inconsistent coordinate count across lines")
    width = widths.pop()
    if dim is not None and width != dim:
        raise ValueError(f"header says dim={dim} but lines have {width} fields")
    coords = np.array([c for _, c in rows])
    if not colored:
        return PointSet(coords)
    colors = np.array([c for c, _ in rows], dtype=int)
    return ColoredInstance(PointSet(coords), colors)


def write_points(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(points_text(obj))


def read_points(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_points(fh.read())


def clustering_payload(
    clustering: Clustering, algorithm: str, seed=None
) -> dict:
    balls = None
    if clustering.balls is not None:
        balls = [
            {"center": [float(v) for v in b.center], "radius": float(b.radius)}
            for b in clustering.balls
        ]
    return {
        "algorithm": str(algorithm),
        "alpha": None if clustering.alpha is None else int(clustering.alpha),
        "balls": balls,
        "clusters": [[int(i) for i in c] for c in clustering.clusters],
        "k": clustering.k,
        "kind": clustering.kind.value,
        "quality": quality(clustering),
        "seed": seed,
        "sigma": float(clustering.sigma),
        "verified": bool(check_separation(clustering)),
        "version": __version__,
    }


def clustering_text(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def parse_clustering(text: str) -> dict:
    data = json.loads(text)
    for key in ("kind", "sigma", "clusters"):
        if key not in data:
            raise ValueError(f"clustering file missing key {key!r}")
    if not isinstance(data["clusters"], list) or not data["clusters"]:
        raise ValueError("clustering file holds no clusters")
    return data


def write_clustering(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(clustering_text(payload))


def read_clustering(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_clustering(fh.read())


def clustering_from_payload(points_obj, data: dict, kind=None, sigma=None) -> Clustering:
    """Rebuild a Clustering for verification, with optional kind/sigma overrides."""
    colored = isinstance(points_obj, ColoredInstance)
    points = points_obj.points if colored else points_obj
    balls = None
    if data.get("balls"):
        balls = tuple(Ball(np.array(b["center"]), b["radius"]) for b in data["balls"])
    return Clustering(
        points=points,
        clusters=tuple(np.array(c, dtype=int) for c in data["clusters"]),
        sigma=float(sigma if sigma is not None else data["sigma"]),
        kind=SeparationKind.parse(kind if kind is not None else data["kind"]),
        colors=points_obj.colors if colored else None,
        balls=balls,
        alpha=data.get("alpha"),
    )
