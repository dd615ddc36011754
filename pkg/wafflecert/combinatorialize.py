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
Cube complex isomorphisms from boundary matchings.

A matching pairs the walls of two windows and tells for each wall which of the
image wall's half-arcs receives its positive half-arc. Transporting every
orientation along it gives a vertex map; when the matching respects the cyclic
order of the wall ends the map is an isomorphism of cube complexes.
"""

from collections import namedtuple
import json
import logging

import networkx as nx

from .config import DEFAULTS
from .errors import PreconditionError
from .hyperbolic import BoundaryPoint, angle_gap, apply
from .cubulation import dihedral_boundary_map, dimension, skeleton

logger = logging.getLogger(__name__)


class InvalidMatching(PreconditionError):
    """raised for a matching that is not a bijection of the walls"""

    def __init__(self, problems):
        super().__init__("invalid matching: " + "; ".join(problems))
        self.problems = problems


class OrderViolation(PreconditionError):
    """raised if a matching breaks the cyclic order of the wall ends"""


class NotConsistent(PreconditionError):
    """raised if a transported orientation is no vertex of the target"""

    def __init__(self, witness):
        super().__init__("transport fails at %r" % (witness,))
        self.witness = witness


QuasiMatching = namedtuple("QuasiMatching", ["wallBijection", "arcTransport"])
QuasiMatching.__doc__ = """
wallBijection maps walls of the first system to walls of the second,
arcTransport maps a wall to 0 when its positive half-arc goes to the positive
half-arc of the image wall and to 1 when it goes to the negative one.
"""

CubeIsomorphism = namedtuple("CubeIsomorphism", ["vertexMap", "wallMap"])


def identity_matching(count):
    return QuasiMatching({k: k for k in range(count)}, {k: 0 for k in range(count)})


def compose_matchings(first, second):
    """the matching doing first, then second"""
    bijection = {}
    transport = {}
    for wall, image in first.wallBijection.items():
        bijection[wall] = second.wallBijection[image]
        transport[wall] = first.arcTransport[wall] ^ second.arcTransport[image]
    return QuasiMatching(bijection, transport)


def compose_isomorphisms(first, second):
    """the isomorphism doing first, then second"""
    return CubeIsomorphism(
        {v: second.vertexMap[image] for v, image in first.vertexMap.items()},
        {w: second.wallMap[image] for w, image in first.wallMap.items()},
    )


def _check_bijection(matching, count1, count2):
    problems = []
    bijection = matching.wallBijection
    if count1 != count2:
        problems.append("%d walls cannot match %d walls" % (count1, count2))
    missing = sorted(set(range(count1)) - set(bijection))
    if missing:
        problems.append("walls without image: %s" % missing)
    images = list(bijection.values())
    if len(set(images)) != len(images):
        problems.append("walls share an image")
    if any(not 0 <= image < count2 for image in images):
        problems.append("image outside the target walls")
    if set(matching.arcTransport) != set(bijection):
        problems.append("arc bits do not cover the matched walls")
    if any(bit not in (0, 1) for bit in matching.arcTransport.values()):
        problems.append("arc bits must be 0 or 1")
    if problems:
        raise InvalidMatching(problems)


def transport_orientation(matching, mask):
    """the orientation choosing the transported half-arc of every image wall"""
    image = 0
    for wall, target in matching.wallBijection.items():
        if ((mask >> wall) & 1) ^ matching.arcTransport[wall]:
            image |= 1 << target
    return image


def combinatorialize(matching, model1, model2, checkOrder=True):
    """
    cube complex isomorphism induced by a matching

    Parameters
    ----------
    matching : QuasiMatching
    model1, model2 : CubeComplexModel
    checkOrder : bool, optional
        test the cyclic order of the wall ends first. Needs the ends of both
        models; walls missing the window are skipped.

    Returns
    -------
    CubeIsomorphism

    Raises
    ------
    InvalidMatching
    OrderViolation
    NotConsistent
        if some transported orientation is not a vertex of model2, or the
        vertex map fails to be an isomorphism.
    """
    _check_bijection(matching, len(model1.walls), len(model2.walls))
    if checkOrder:
        if model1.ends is None or model2.ends is None:
            raise PreconditionError("the order check needs the wall ends of both models")
        kind = dihedral_boundary_map(
            model1.ends, model2.ends, matching.wallBijection, matching.arcTransport
        )
        if kind is None:
            raise OrderViolation("the matching breaks the cyclic order of the wall ends")
        logger.debug("boundary map is orientation %s", kind)

    vertexMap = {}
    for vid, mask in enumerate(model1.vertices):
        image = model2.index.get(transport_orientation(matching, mask))
        if image is None:
            raise NotConsistent(("vertex", vid))
        vertexMap[vid] = image
    iso = CubeIsomorphism(vertexMap, dict(matching.wallBijection))
    ok, witness = verify_isomorphism(iso, model1, model2, closeness=False)
    if not ok:
        logger.error("transport is not an isomorphism: %r", witness)
        raise NotConsistent(witness)
    return iso


def _cube_vertices(model, base, walls):
    mask = model.vertices[base]
    images = [mask]
    for wall in walls:
        images = images + [m ^ (1 << wall) for m in images]
    return [model.index[m] for m in images]


def _image_cube(iso, model1, model2, cube):
    base, walls = cube
    images = [iso.vertexMap[v] for v in _cube_vertices(model1, base, walls)]
    imageWalls = tuple(sorted(iso.wallMap[w] for w in walls))
    for vid in images:
        if all(not (model2.vertices[vid] >> w) & 1 for w in imageWalls):
            return (vid, imageWalls)
    return None


def verify_isomorphism(iso, model1, model2, closeness=True):
    """
    check that a vertex map is an isomorphism of cube complexes

    Checks bijectivity, edges with their wall labels and cubes. With
    closeness, every vertex of an interior square must land within the
    largest cube diameter of the carriers of both image walls; squares
    using a margin wall are skipped.

    Returns
    -------
    (bool, witness)
        witness is None on success, otherwise (check, offending item).
    """
    vertexMap = iso.vertexMap
    if len(vertexMap) != len(model1.vertices) or set(vertexMap) != set(
        range(len(model1.vertices))
    ):
        return False, ("total", len(vertexMap))
    if len(set(vertexMap.values())) != len(vertexMap) or len(model2.vertices) != len(
        vertexMap
    ):
        return False, ("bijective", len(set(vertexMap.values())))

    edges2 = set(model2.edges)
    for u, v, wall in model1.edges:
        a, b = sorted((vertexMap[u], vertexMap[v]))
        if (a, b, iso.wallMap.get(wall)) not in edges2:
            return False, ("edge", (u, v, wall))
    if len(model1.edges) != len(model2.edges):
        return False, ("edge count", len(model2.edges))

    cubes2 = set(model2.cubes)
    for cube in model1.cubes:
        image = _image_cube(iso, model1, model2, cube)
        if image is None or image not in cubes2:
            return False, ("cube", cube)

    if closeness:
        witness = _closeness_witness(iso, model1, model2)
        if witness is not None:
            return False, ("closeness", witness)
    return True, None


def _closeness_witness(iso, model1, model2):
    graph = skeleton(model2)
    diameter = dimension(model2)
    reach = {}

    def near(wall):
        if wall not in reach:
            carrier = {v for u, w, k in model2.edges if k == wall for v in (u, w)}
            reach[wall] = nx.multi_source_dijkstra_path_length(
                graph, carrier, cutoff=diameter
            )
        return reach[wall]

    for base, walls in model1.cubes:
        if len(walls) != 2 or model1.marginWalls.intersection(walls):
            continue
        for vid in _cube_vertices(model1, base, walls):
            image = iso.vertexMap[vid]
            for wall in walls:
                if image not in near(iso.wallMap[wall]):
                    return (vid, walls)
    return None


def matching_from_mobius(complex1, complex2, mobius, tol=DEFAULTS.endpointTol):
    """
    the matching a Möbius map induces between two hyperbolic windows

    Every wall geodesic of complex1 must be carried onto a wall geodesic of
    complex2. Möbius maps preserve orientation, so the positive half-arc goes
    to the positive half-arc exactly when the first end goes to the first end.

    Raises
    ------
    InvalidMatching
        if some image geodesic is not a wall of complex2.
    """
    bijection = {}
    transport = {}
    problems = []
    for wall, geodesic in enumerate(complex1.geodesics):
        start, end = (
            apply(mobius, BoundaryPoint.from_disc_angle(angle)).disc_angle()
            for angle in complex1.ends[wall]
        )
        for target, (first, second) in enumerate(complex2.ends):
            if angle_gap(start, first) <= tol and angle_gap(end, second) <= tol:
                bijection[wall], transport[wall] = target, 0
                break
            if angle_gap(start, second) <= tol and angle_gap(end, first) <= tol:
                bijection[wall], transport[wall] = target, 1
                break
        else:
            problems.append("wall %s has no image" % complex1.labels[wall])
    if problems:
        raise InvalidMatching(problems)
    return QuasiMatching(bijection, transport)


def read_matching(path):
    """
    read a matching file

    The file holds a JSON list of [wall, image wall, arc bit] triples.
    """
    with open(path, "r", encoding="utf-8") as matchingFile:
        entries = json.load(matchingFile)
    return matching_from_json(entries)


def matching_from_json(entries):
    problems = []
    bijection = {}
    transport = {}
    if not isinstance(entries, list):
        raise InvalidMatching(["a matching is a list of [wall, image, bit] triples"])
    for position, entry in enumerate(entries):
        if (
            not isinstance(entry, list)
            or len(entry) != 3
            or not all(isinstance(item, int) and not isinstance(item, bool) for item in entry)
        ):
            problems.append("entry %d is not a triple of integers" % position)
            continue
        wall, image, bit = entry
        if wall in bijection:
            problems.append("wall %d matched twice" % wall)
        bijection[wall] = image
        transport[wall] = bit
    if problems:
        raise InvalidMatching(problems)
    return QuasiMatching(bijection, transport)


def matching_to_json(matching):
    return [
        [wall, matching.wallBijection[wall], matching.arcTransport[wall]]
        for wall in sorted(matching.wallBijection)
    ]


def isomorphism_to_json(iso):
    return {
        "vertex_map": [[v, iso.vertexMap[v]] for v in sorted(iso.vertexMap)],
        "wall_map": [[w, iso.wallMap[w]] for w in sorted(iso.wallMap)],
    }
