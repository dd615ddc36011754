# -*- coding: utf-8 -*-

# Copyright 2026 The wafflecert developers

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

"""
SVG figures: the pattern in the disc, the chamber complex and a projection
of the 2-skeleton of a cube complex.
"""

import logging
import math
import os
import warnings
import xml.dom.minidom as minidom
import xml.etree.ElementTree as ET

import numpy as np

from .cubulation import to_bits

logger = logging.getLogger(__name__)

SIZE = 400
SCALE = 180.0


def _canvas(title):
    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(SIZE),
        height=str(SIZE),
        viewBox="%d %d %d %d" % (-SIZE // 2, -SIZE // 2, SIZE, SIZE),
    )
    ET.SubElement(svg, "title").text = title
    return svg


def _xy(point, radius=1.0):
    # svg y axis points down
    return "%.4f" % (SCALE * point[0] / radius), "%.4f" % (-SCALE * point[1] / radius)


def _circle(svg, radius=SCALE, **attributes):
    ET.SubElement(svg, "circle", cx="0", cy="0", r="%.4f" % radius, fill="none", **attributes)


def _segment(svg, start, end, radius=1.0, **attributes):
    x1, y1 = _xy(start, radius)
    x2, y2 = _xy(end, radius)
    ET.SubElement(svg, "line", x1=x1, y1=y1, x2=x2, y2=y2, **attributes)


def _geodesic_path(first, second):
    """the Poincare disc arc between two boundary angles, as svg path data"""
    start = (SCALE * math.cos(first), -SCALE * math.sin(first))
    end = (SCALE * math.cos(second), -SCALE * math.sin(second))
    gap = (second - first) % (2.0 * math.pi)
    if abs(gap - math.pi) < 1e-9:
        return "M %.4f %.4f L %.4f %.4f" % (start + end)
    radius = SCALE * abs(math.tan(gap / 2.0))
    sweep = 0 if gap < math.pi else 1
    return "M %.4f %.4f A %.4f %.4f 0 0 %d %.4f %.4f" % (start + (radius, radius, sweep) + end)


def pattern_figure(complex_):
    """the lines of a hyperbolic window in the Poincare disc, window circle dashed"""
    svg = _canvas("line pattern")
    _circle(svg, stroke="black")
    # the window radius is a Klein one
    klein = complex_.radius
    poincare = klein / (1.0 + math.sqrt(1.0 - klein**2))
    _circle(svg, radius=SCALE * poincare, stroke="grey", **{"stroke-dasharray": "4 4"})
    for (first, second), label in zip(complex_.ends, complex_.labels):
        path = ET.SubElement(svg, "path", d=_geodesic_path(first, second), fill="none")
        path.set("stroke", "steelblue")
        path.set("data-label", label)
    return svg


def chamber_figure(complex_):
    """the chamber complex in Klein coordinates, chambers reaching the boundary shaded"""
    svg = _canvas("chamber complex")
    radius = complex_.radius
    _circle(svg, stroke="black")
    for chamber in complex_.chambers:
        if not chamber.vertices:
            continue
        points = " ".join(",".join(_xy(complex_.points[v], radius)) for v in chamber.vertices)
        ET.SubElement(
            svg,
            "polygon",
            points=points,
            fill="lightgrey" if chamber.touchesBoundary else "white",
            stroke="black",
            **{"data-chamber": str(chamber.id)},
        )
    for segment in complex_.segments:
        _segment(
            svg,
            complex_.points[segment.start],
            complex_.points[segment.end],
            radius,
            stroke="steelblue",
        )
    return svg


def skeleton_figure(model, complex_=None):
    """
    the 2-skeleton of a cube complex projected to the plane

    Every wall contributes a unit vector; a vertex sits at the sum of the
    vectors of its positive walls. With a complex the wall vectors are the
    line normals, otherwise they are spread evenly.
    """
    count = len(model.walls)
    if complex_ is not None:
        directions = np.array([line.normal for line in complex_.lines], dtype=float)
    else:
        angles = np.pi * np.arange(count) / max(count, 1)
        directions = np.column_stack([np.cos(angles), np.sin(angles)])
    positions = np.array(
        [np.array(to_bits(mask, count), dtype=float) @ directions for mask in model.vertices]
    ).reshape(len(model.vertices), 2)
    positions = positions - positions.mean(axis=0)
    extent = max(float(np.max(np.abs(positions))), 1.0)

    svg = _canvas("2-skeleton")
    realized = set(model.realized)
    for base, walls in model.cubes:
        if len(walls) != 2:
            continue
        mask = model.vertices[base]
        first, second = (1 << walls[0]), (1 << walls[1])
        corners = [mask, mask ^ first, mask ^ first ^ second, mask ^ second]
        points = " ".join(
            ",".join(_xy(positions[model.index[m]], extent)) for m in corners
        )
        ET.SubElement(svg, "polygon", points=points, fill="lavender", stroke="none")
    for u, v, wall in model.edges:
        _segment(svg, positions[u], positions[v], extent, stroke="black")
    for vid, position in enumerate(positions):
        x, y = _xy(position, extent)
        ET.SubElement(
            svg,
            "circle",
            cx=x,
            cy=y,
            r="3",
            fill="black" if vid in realized else "white",
            stroke="black",
        )
    return svg


def svg_string(svg, encoding="UTF-8"):
    """pretty printed svg document"""
    reparsed = minidom.parseString(ET.tostring(svg))
    return reparsed.toprettyxml(indent="  ", encoding=encoding).decode(encoding)


def write_figures(directory, name, complex_=None, model=None):
    """
    write the figures available for a surface

    Returns
    -------
    list of str
        paths written.
    """
    os.makedirs(directory, exist_ok=True)
    figures = []
    if complex_ is not None and complex_.geodesics is not None:
        figures.append(("pattern", pattern_figure(complex_)))
    if complex_ is not None:
        figures.append(("chambers", chamber_figure(complex_)))
    if model is not None:
        if len(model.vertices) > 2000:
            warnings.warn(
                "skeleton of %s has %d vertices, figure skipped" % (name, len(model.vertices))
            )
        else:
            figures.append(("skeleton", skeleton_figure(model, complex_)))
    written = []
    for kind, svg in figures:
        path = os.path.join(directory, "%s-%s.svg" % (name, kind))
        with open(path, "w", encoding="UTF-8") as svgFile:
            svgFile.write(svg_string(svg))
        logger.info("wrote %s", path)
        written.append(path)
    return written
