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
Chamber decomposition of a window of lines.

Hyperbolic windows are handled in the Klein model, where geodesics are
straight chords and the hyperbolic ball of radius R about the center is the
Euclidean disc of radius tanh R. The same planar core therefore serves
hyperbolic patterns and Euclidean line families.

The arrangement is stored as a half-edge structure: every chord segment and
every boundary arc yields two half-edges, faces are traced with the face on
the left, and the face bounded by clockwise arcs only (the outside of the
disc) is dropped.
"""

from collections import namedtuple
import logging
import math

import networkx as nx
import numpy as np

from .config import DEFAULTS
from .errors import PreconditionError
from .hyperbolic import TWO_PI, crossing
from .patterns import PlanarLine

logger = logging.getLogger(__name__)


class NearTangency(PreconditionError):
    """raised if two lines cross at an angle below the tangency tolerance"""

    def __init__(self, first, second, angle):
        super().__init__("lines %s and %s cross at angle %.3g" % (first, second, angle))
        self.lines = (first, second)
        self.angle = angle


class DuplicateLine(PreconditionError):
    """raised if two lines of an arrangement coincide"""


class WindowTooSmall(PreconditionError):
    """raised if the margin leaves no interior region"""


class EulerMismatch(PreconditionError):
    """raised if V - E + F differs from 1, a sign of unresolved degeneracy"""


Segment = namedtuple("Segment", ["line", "start", "end"])
Arc = namedtuple("Arc", ["start", "end"])
Arc.__doc__ = "boundary arc, counterclockwise from start to end"

Chamber = namedtuple(
    "Chamber",
    [
        "id",
        "vertices",
        "sides",
        "touchesBoundary",
        "interiorPoint",
        "sideVector",
        "arcs",
        "boundary",
    ],
)
Chamber.__doc__ = """
A face of the arrangement.

vertices are indices into ChamberComplex.points in counterclockwise order,
sides are (line index, neighbouring chamber id) pairs, sideVector holds one
bit per line, 1 on the side where normal . x > offset. boundary lists the
edges as (start, end, line) with line None on arcs.
"""

ChamberComplex = namedtuple(
    "ChamberComplex",
    [
        "lines",
        "labels",
        "radius",
        "points",
        "onBoundary",
        "segments",
        "arcs",
        "chambers",
        "crossingPairs",
        "crossingAngles",
        "crossesAnywhere",
        "ends",
        "geodesics",
    ],
)


def _merge_points(points, tol):
    """cluster nearby points, returning representatives and a label per point"""
    cells = {}
    representatives = []
    labels = []
    for point in points:
        key = (int(math.floor(point[0] / tol)), int(math.floor(point[1] / tol)))
        found = None
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for index in cells.get((key[0] + dx, key[1] + dy), ()):
                    if math.hypot(*(representatives[index] - point)) <= tol:
                        found = index
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            found = len(representatives)
            representatives.append(np.asarray(point, dtype=float))
            cells.setdefault(key, []).append(found)
        labels.append(found)
    return representatives, labels


def _intersections(lines, radius, config):
    """crossing points strictly inside the disc, as {(i, j): point}"""
    normals = np.array([line.normal for line in lines], dtype=float)
    offsets = np.array([line.offset for line in lines], dtype=float)
    cross = normals[:, 0][:, None] * normals[:, 1][None, :] - (
        normals[:, 1][:, None] * normals[:, 0][None, :]
    )
    result = {}
    angles = {}
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            det = cross[i, j]
            if abs(det) <= 1e-14:
                aligned = offsets[j] * np.dot(normals[i], normals[j])
                if abs(offsets[i] - aligned) <= config.mergeTol:
                    raise DuplicateLine(
                        "lines %s and %s coincide" % (lines[i].label, lines[j].label)
                    )
                continue
            x = (offsets[i] * normals[j, 1] - offsets[j] * normals[i, 1]) / det
            y = (normals[i, 0] * offsets[j] - normals[j, 0] * offsets[i]) / det
            point = np.array([x, y])
            if math.hypot(x, y) >= radius - config.mergeTol:
                continue
            angle = math.asin(min(1.0, abs(det)))
            if angle < config.tangencyAngle:
                raise NearTangency(lines[i].label, lines[j].label, angle)
            result[(i, j)] = point
            angles[(i, j)] = angle
    return result, angles


def _chord(line, radius):
    """the two points where a line meets the circle, in the order of its direction"""
    normal = np.asarray(line.normal, dtype=float)
    direction = np.array([-normal[1], normal[0]])
    foot = line.offset * normal
    half = math.sqrt(radius**2 - line.offset**2)
    return foot - half * direction, foot + half * direction


def _polar(vector):
    return math.atan2(vector[1], vector[0]) % TWO_PI


def planar_arrangement(lines, radius, config=DEFAULTS, labels=None):
    """
    chamber complex of straight lines clipped to a disc about the origin

    Parameters
    ----------
    lines : list of PlanarLine
        lines with |offset| >= radius don't meet the disc and only enter the
        side vectors.
    radius : float
    config : Tolerances, optional
    labels : list of str, optional
        line labels. The default are the labels of the lines.

    Returns
    -------
    ChamberComplex
        without the hyperbolic fields (crossesAnywhere, ends and geodesics
        are filled in by arrangement).

    Raises
    ------
    NearTangency
    DuplicateLine
    EulerMismatch
    """
    if labels is None:
        labels = [line.label for line in lines]
    meeting = [i for i, line in enumerate(lines) if abs(line.offset) < radius - config.mergeTol]
    crossings, angles = _intersections([lines[i] for i in meeting], radius, config)
    crossings = {(meeting[i], meeting[j]): point for (i, j), point in crossings.items()}
    angles = {(meeting[i], meeting[j]): angle for (i, j), angle in angles.items()}

    if not meeting:
        return _single_chamber(lines, labels, radius)

    # interior vertices
    pairs = sorted(crossings)
    interior, owner = _merge_points([crossings[pair] for pair in pairs], config.mergeTol)
    linesAt = [set() for _ in interior]
    for pair, index in zip(pairs, owner):
        linesAt[index].update(pair)

    # boundary vertices
    chordEnds = {}
    boundaryRaw = []
    for i in meeting:
        start, end = _chord(lines[i], radius)
        chordEnds[i] = (len(boundaryRaw), len(boundaryRaw) + 1)
        boundaryRaw.extend([start, end])
    boundary, boundaryOwner = _merge_points(boundaryRaw, config.mergeTol)

    points = [point for point in interior] + [point for point in boundary]
    onBoundary = [False] * len(interior) + [True] * len(boundary)
    offset = len(interior)

    # segments along each line
    segments = []
    for i in meeting:
        normal = np.asarray(lines[i].normal, dtype=float)
        direction = np.array([-normal[1], normal[0]])
        stops = [offset + boundaryOwner[k] for k in chordEnds[i]]
        stops += [v for v, through in enumerate(linesAt) if i in through]
        stops = sorted(set(stops), key=lambda v: float(np.dot(points[v], direction)))
        for start, end in zip(stops, stops[1:]):
            segments.append(Segment(i, start, end))

    # arcs between consecutive boundary vertices
    circle = sorted(range(offset, len(points)), key=lambda v: _polar(points[v]))
    arcs = [Arc(circle[k], circle[(k + 1) % len(circle)]) for k in range(len(circle))]

    faces, halfEdges = _trace_faces(points, segments, arcs)
    chambers = _build_chambers(lines, points, onBoundary, radius, faces, halfEdges)

    vertexCount = len(points)
    edgeCount = len(segments) + len(arcs)
    if vertexCount - edgeCount + len(chambers) != 1:
        raise EulerMismatch(
            "V - E + F = %d - %d + %d" % (vertexCount, edgeCount, len(chambers))
        )
    logger.debug(
        "arrangement: %d vertices, %d edges, %d chambers", vertexCount, edgeCount, len(chambers)
    )
    return ChamberComplex(
        lines=tuple(lines),
        labels=tuple(labels),
        radius=radius,
        points=np.array(points),
        onBoundary=tuple(onBoundary),
        segments=tuple(segments),
        arcs=tuple(arcs),
        chambers=tuple(chambers),
        crossingPairs=frozenset(crossings),
        crossingAngles=angles,
        crossesAnywhere=None,
        ends=None,
        geodesics=None,
    )


def _single_chamber(lines, labels, radius):
    sideVector = tuple(int(-line.offset > 0) for line in lines)
    chamber = Chamber(0, (), (), True, np.zeros(2), sideVector, (), ())
    return ChamberComplex(
        lines=tuple(lines),
        labels=tuple(labels),
        radius=radius,
        points=np.zeros((0, 2)),
        onBoundary=(),
        segments=(),
        arcs=(),
        chambers=(chamber,),
        crossingPairs=frozenset(),
        crossingAngles={},
        crossesAnywhere=None,
        ends=None,
        geodesics=None,
    )


HalfEdge = namedtuple("HalfEdge", ["origin", "target", "line", "arc", "clockwise", "angle"])


def _trace_faces(points, segments, arcs):
    """faces as lists of half-edge indices, each face on the left of its half-edges"""
    halfEdges = []
    twin = []
    for segment in segments:
        forward = points[segment.end] - points[segment.start]
        halfEdges.append(HalfEdge(segment.start, segment.end, segment.line, None, False,
                                  _polar(forward)))
        halfEdges.append(HalfEdge(segment.end, segment.start, segment.line, None, False,
                                  _polar(-forward)))
    for index, arc in enumerate(arcs):
        startAngle = _polar(points[arc.start])
        endAngle = _polar(points[arc.end])
        halfEdges.append(HalfEdge(arc.start, arc.end, None, index, False,
                                  (startAngle + math.pi / 2.0) % TWO_PI))
        halfEdges.append(HalfEdge(arc.end, arc.start, None, index, True,
                                  (endAngle - math.pi / 2.0) % TWO_PI))
    for index in range(0, len(halfEdges), 2):
        twin.extend([index + 1, index])

    outgoing = {}
    for index, edge in enumerate(halfEdges):
        outgoing.setdefault(edge.origin, []).append(index)
    position = {}
    for vertex, edges in outgoing.items():
        edges.sort(key=lambda k: halfEdges[k].angle)
        for rank, k in enumerate(edges):
            position[k] = (vertex, rank)

    def following(index):
        # outgoing half-edge immediately clockwise from the twin
        vertex, rank = position[twin[index]]
        around = outgoing[vertex]
        return around[(rank - 1) % len(around)]

    faces = []
    seen = set()
    for start in range(len(halfEdges)):
        if start in seen:
            continue
        face = []
        current = start
        while current not in seen:
            seen.add(current)
            face.append(current)
            current = following(current)
        if current != start:
            raise EulerMismatch("half-edge cycle does not close")
        if all(halfEdges[k].arc is not None and halfEdges[k].clockwise for k in face):
            continue
        faces.append(face)
    return faces, (halfEdges, twin)


def _arc_midpoint(points, arc, radius):
    startAngle = _polar(points[arc.start])
    sweep = (_polar(points[arc.end]) - startAngle) % TWO_PI
    if sweep == 0.0:
        sweep = TWO_PI
    middle = startAngle + sweep / 2.0
    return radius * np.array([math.cos(middle), math.sin(middle)])


def side_bits(lines, point):
    return tuple(
        int(float(np.dot(line.normal, point)) > line.offset) for line in lines
    )


def _build_chambers(lines, points, onBoundary, radius, faces, structure):
    halfEdges, twin = structure
    faceOf = {}
    for number, face in enumerate(faces):
        for k in face:
            faceOf[k] = number

    drafts = []
    for number, face in enumerate(faces):
        vertices = [halfEdges[k].origin for k in face]
        samples = [points[v] for v in vertices]
        arcs = []
        for k in face:
            edge = halfEdges[k]
            if edge.arc is not None:
                arcs.append(edge.arc)
                samples.append(_arc_midpoint(points, Arc(edge.origin, edge.target), radius))
        inside = np.mean(samples, axis=0)
        key = (
            tuple(
                sorted(
                    (round(float(points[v][0]), 9), round(float(points[v][1]), 9))
                    for v in vertices
                )
            ),
            (round(float(inside[0]), 9), round(float(inside[1]), 9)),
        )
        drafts.append((key, number, vertices, arcs, inside))

    drafts.sort(key=lambda draft: draft[0])
    idOf = {number: rank for rank, (_, number, _, _, _) in enumerate(drafts)}

    chambers = []
    for rank, (_, number, vertices, arcs, inside) in enumerate(drafts):
        sides = []
        boundary = []
        for k in faces[number]:
            edge = halfEdges[k]
            boundary.append((edge.origin, edge.target, edge.line))
            if edge.line is not None:
                sides.append((edge.line, idOf[faceOf[twin[k]]]))
        chambers.append(
            Chamber(
                id=rank,
                vertices=tuple(vertices),
                sides=tuple(sorted(sides)),
                touchesBoundary=bool(arcs) or any(onBoundary[v] for v in vertices),
                interiorPoint=inside,
                sideVector=side_bits(lines, inside),
                arcs=tuple(sorted(arcs)),
                boundary=tuple(boundary),
            )
        )
    return chambers


def klein_line(geodesic, label=None):
    """the chord of the Klein model carrying a geodesic"""
    first, second = geodesic.disc_angles()
    u = np.array([math.cos(first), math.sin(first)])
    v = np.array([math.cos(second), math.sin(second)])
    along = (v - u) / np.linalg.norm(v - u)
    normal = np.array([along[1], -along[0]])
    return PlanarLine((float(normal[0]), float(normal[1])), float(np.dot(normal, u)), label)


def minkowski_normal(line):
    """unit spacelike normal (offset, nx, ny) of the plane over a Klein chord"""
    vector = np.array([line.offset, line.normal[0], line.normal[1]])
    return vector / math.sqrt(1.0 - line.offset**2)


def crossing_angle(first, second):
    """angle between two crossing geodesics given as Klein chords"""
    a, b = minkowski_normal(first), minkowski_normal(second)
    inner = -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    return math.acos(min(1.0, abs(inner)))


def arrangement(pattern, window, config=DEFAULTS):
    """
    chamber complex of a line pattern inside the window ball

    Parameters
    ----------
    pattern : LinePattern
    window : Window
    config : Tolerances, optional

    Returns
    -------
    ChamberComplex
        chamber ids are sorted lexicographically by vertex coordinates, so the
        same input yields the same ids.

    Raises
    ------
    NearTangency
        if two lines cross (anywhere) at an angle below config.tangencyAngle.
    """
    geodesics = pattern.geodesics()
    labels = pattern.labels()
    lines = [klein_line(g, label) for g, label in zip(geodesics, labels)]

    count = len(lines)
    crossesAnywhere = np.zeros((count, count), dtype=bool)
    hitAngles = {}
    for i in range(count):
        for j in range(i + 1, count):
            if crossing(geodesics[i], geodesics[j], config.endpointTol):
                angle = crossing_angle(lines[i], lines[j])
                if angle < config.tangencyAngle:
                    raise NearTangency(labels[i], labels[j], angle)
                crossesAnywhere[i, j] = crossesAnywhere[j, i] = True
                hitAngles[(i, j)] = angle

    complex_ = planar_arrangement(lines, math.tanh(window.radius), config, labels)
    # crossing angles are hyperbolic angles, not Klein ones
    angles = {pair: hitAngles[pair] for pair in complex_.crossingPairs if pair in hitAngles}
    logger.info(
        "window of %d lines: %d chambers, %d crossings",
        count,
        len(complex_.chambers),
        len(complex_.crossingPairs),
    )
    return complex_._replace(
        crossingAngles=angles,
        crossesAnywhere=crossesAnywhere,
        ends=tuple(g.disc_angles() for g in geodesics),
        geodesics=tuple(geodesics),
    )


def euclidean_arrangement(lines, radius, config=DEFAULTS):
    """
    chamber complex of Euclidean lines

    A line's ends are taken on the window circle, ordered so that the
    positive side runs counterclockwise from the first to the second.
    """
    complex_ = planar_arrangement(lines, radius, config)
    count = len(lines)
    crossesAnywhere = np.zeros((count, count), dtype=bool)
    for i, j in complex_.crossingPairs:
        crossesAnywhere[i, j] = crossesAnywhere[j, i] = True
    ends = []
    for line in lines:
        if abs(line.offset) < radius:
            start, end = _chord(line, radius)
            ends.append((_polar(start), _polar(end)))
        else:
            ends.append(None)
    return complex_._replace(crossesAnywhere=crossesAnywhere, ends=tuple(ends))


def _point_segment_distance(a, b):
    """distance from the origin to the segment [a, b]"""
    along = b - a
    span = float(np.dot(along, along))
    t = 0.0 if span == 0 else min(1.0, max(0.0, -float(np.dot(a, along)) / span))
    return float(np.linalg.norm(a + t * along))


def distance_from_center(complex_, chamber):
    """Euclidean distance from the origin to a (convex) chamber"""
    sideLines = {lineIndex for lineIndex, _ in chamber.sides}
    originBits = side_bits(complex_.lines, np.zeros(2))
    if all(
        originBits[i] == chamber.sideVector[i] or complex_.lines[i].offset == 0
        for i in sideLines
    ):
        return 0.0
    best = complex_.radius
    for start, end, line in chamber.boundary:
        if line is not None:
            best = min(
                best, _point_segment_distance(complex_.points[start], complex_.points[end])
            )
    return best


def chamber_extent(complex_, chamber):
    """largest Euclidean distance from the origin to a vertex of a chamber"""
    return max(float(np.hypot(*complex_.points[v])) for v in chamber.vertices)


FillingResult = namedtuple("FillingResult", ["filling", "witness", "innerRadius"])


def filling_check(complex_, window, margin=None, config=DEFAULTS):
    """
    are all chambers near the center bounded

    A chamber counts as near when it meets the ball of radius
    window.radius - margin; the pattern fills the window if none of these
    reaches the window boundary.

    Parameters
    ----------
    complex_ : ChamberComplex
        a Klein model window.
    window : Window
    margin : float, optional
        The default is config.fillingMargin.
    config : Tolerances, optional

    Returns
    -------
    FillingResult
        witness is the first offending chamber (least id) or None.

    Raises
    ------
    WindowTooSmall
        if window.radius - margin <= 0, or if no chamber reaching the
        boundary meets the ball of that radius while no chamber lies wholly
        inside it either.
    """
    if margin is None:
        margin = config.fillingMargin
    innerRadius = window.radius - margin
    if innerRadius <= 0:
        raise WindowTooSmall(
            "margin %g leaves nothing of a window of radius %g" % (margin, window.radius)
        )
    # Klein model radius of the inner ball
    inner = math.tanh(innerRadius)
    for chamber in complex_.chambers:
        if chamber.touchesBoundary and distance_from_center(complex_, chamber) < inner:
            logger.info("chamber %d reaches the window boundary", chamber.id)
            return FillingResult(False, chamber, innerRadius)
    if not any(
        not chamber.touchesBoundary and chamber_extent(complex_, chamber) <= inner
        for chamber in complex_.chambers
    ):
        raise WindowTooSmall(
            "no chamber lies inside radius %g of a window of radius %g"
            % (innerRadius, window.radius)
        )
    return FillingResult(True, None, innerRadius)


def shadow_graph(complex_):
    """
    dual graph of the chambers

    Nodes are chamber ids (attribute bounded), edges join chambers sharing a
    side and carry the separating line's index and label. The largest degree
    is stored as graph attribute maxDegree.
    """
    graph = nx.Graph()
    for chamber in complex_.chambers:
        graph.add_node(chamber.id, bounded=not chamber.touchesBoundary)
    for chamber in complex_.chambers:
        for lineIndex, neighbour in chamber.sides:
            graph.add_edge(
                chamber.id, neighbour, line=lineIndex, label=complex_.labels[lineIndex]
            )
    graph.graph["maxDegree"] = max((degree for _, degree in graph.degree), default=0)
    if graph.number_of_nodes() and not nx.is_connected(graph):
        logger.warning("shadow graph has %d components", nx.number_connected_components(graph))
    return graph
