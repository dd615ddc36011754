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
Cubulation of the wall system of a window.

Every line of a window is a wall; its two sides split the chambers into two
half-spaces. A vertex of the cube complex is a consistent orientation, one
side per wall, stored as an int with bit k set when the positive side of wall
k is chosen. Vertices are found by flipping single walls, starting from the
orientations of the chambers, and cubes are spanned at a vertex by sets of
pairwise crossing walls that may all be flipped there.

Two walls crossing inside the window may be oriented in all four ways; any
other pair allows only the side combinations some chamber realizes. Pairs that
cross outside the window are treated like non-crossing ones and reported as
margin pairs.
"""

from collections import namedtuple, deque
import logging

import networkx as nx
import numpy as np

from .config import DEFAULTS
from .errors import PreconditionError, ComputationError
from .hyperbolic import TWO_PI

logger = logging.getLogger(__name__)


class ConsistencyOverflow(ComputationError):
    """raised if the flip closure grows beyond the orientation cap"""

    def __init__(self, cap):
        super().__init__("more than %d consistent orientations" % cap)
        self.cap = cap


class ModelCheckFailed(ComputationError):
    """raised if a freshly built model violates a structural check"""

    def __init__(self, check, witness):
        super().__init__("model check '%s' failed at %r" % (check, witness))
        self.check = check
        self.witness = witness


class UnknownWall(PreconditionError):
    """raised for a wall index outside the wall system"""


class CapExceeded(ComputationError):
    """raised if a brute-force search exceeds its cap"""


WallSystem = namedtuple(
    "WallSystem",
    [
        "walls",
        "crossing",
        "chamberSides",
        "marginPairs",
        "hitAngles",
        "ends",
        "adjacency",
    ],
)
WallSystem.__doc__ = """
walls are the line labels, crossing a symmetric bool matrix of crossings
inside the window, chamberSides one side vector per chamber id, adjacency the
shadow graph edges as (chamber, chamber, wall).
"""


def wall_system(complex_):
    """
    wall system of a chamber complex

    Raises
    ------
    PreconditionError
        for a complex without chambers.
    """
    if not complex_.chambers:
        raise PreconditionError("no chambers")
    count = len(complex_.lines)
    crossing = np.zeros((count, count), dtype=bool)
    for i, j in complex_.crossingPairs:
        crossing[i, j] = crossing[j, i] = True

    marginPairs = []
    if complex_.crossesAnywhere is not None:
        outside = np.logical_and(complex_.crossesAnywhere, np.logical_not(crossing))
        marginPairs = [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(outside)))]
    if marginPairs:
        logger.warning("%d wall pairs cross outside the window", len(marginPairs))

    adjacency = sorted(
        {
            (min(chamber.id, neighbour), max(chamber.id, neighbour), lineIndex)
            for chamber in complex_.chambers
            for lineIndex, neighbour in chamber.sides
        }
    )
    return WallSystem(
        walls=tuple(complex_.labels),
        crossing=crossing,
        chamberSides=tuple(chamber.sideVector for chamber in complex_.chambers),
        marginPairs=tuple(marginPairs),
        hitAngles=dict(complex_.crossingAngles),
        ends=complex_.ends,
        adjacency=tuple(adjacency),
    )


def to_mask(bits):
    return sum(1 << k for k, bit in enumerate(bits) if bit)


def to_bits(mask, count):
    return tuple((mask >> k) & 1 for k in range(count))


def _flip_rules(ws):
    """
    per wall and new side: walls forced to 1, walls forced to 0, impossible flag

    A flip of wall k to side s keeps the orientation consistent iff every other
    wall j shows a side allowed together with (k, s).
    """
    count = len(ws.walls)
    sides = np.array(ws.chamberSides, dtype=bool).reshape(len(ws.chamberSides), count)
    realized = {}
    for a in (0, 1):
        for b in (0, 1):
            left = sides if a else ~sides
            right = sides if b else ~sides
            realized[a, b] = (left.T.astype(int) @ right.astype(int)) > 0

    rules = {}
    for k in range(count):
        for s in (0, 1):
            mustSet = 0
            mustClear = 0
            impossible = False
            for j in range(count):
                if j == k or ws.crossing[k, j]:
                    continue
                allowedZero = realized[s, 0][k, j]
                allowedOne = realized[s, 1][k, j]
                if allowedZero and allowedOne:
                    continue
                if allowedOne:
                    mustSet |= 1 << j
                elif allowedZero:
                    mustClear |= 1 << j
                else:
                    impossible = True
            rules[k, s] = (mustSet, mustClear, impossible)
    return rules


def _can_flip(rules, mask, k):
    newSide = 1 - ((mask >> k) & 1)
    mustSet, mustClear, impossible = rules[k, newSide]
    return not impossible and mask & mustSet == mustSet and mask & mustClear == 0


HyperplaneRecord = namedtuple("HyperplaneRecord", ["wall", "dualEdges", "carrier", "ends"])

CubeComplexModel = namedtuple(
    "CubeComplexModel",
    [
        "walls",
        "vertices",
        "index",
        "edges",
        "cubes",
        "realized",
        "marginCubes",
        "marginWalls",
        "flippable",
        "ends",
    ],
)
CubeComplexModel.__doc__ = """
A finite cube complex.

vertices are orientation masks sorted by their side vectors, index maps a
mask to its vertex id, edges are (u, v, wall) with u < v, cubes are
(base vertex id, sorted wall tuple) with every wall at side 0 on the base,
realized maps chamber ids to vertex ids, marginWalls are the walls of margin
pairs and marginCubes counts the cubes using one. ends are the wall ends of
the wall system (None for walls missing the window).
"""


def cubulate(ws, config=DEFAULTS):
    """
    cube complex of a wall system

    Parameters
    ----------
    ws : WallSystem
    config : Tolerances, optional
        orientationCap bounds the number of vertices.

    Returns
    -------
    CubeComplexModel

    Raises
    ------
    ConsistencyOverflow
    ModelCheckFailed
        if one of the structural checks fails.
    """
    count = len(ws.walls)
    rules = _flip_rules(ws)
    realizedMasks = [to_mask(bits) for bits in ws.chamberSides]

    seen = set(realizedMasks)
    queue = deque(sorted(seen))
    while queue:
        mask = queue.popleft()
        for k in range(count):
            if _can_flip(rules, mask, k):
                neighbour = mask ^ (1 << k)
                if neighbour not in seen:
                    seen.add(neighbour)
                    if len(seen) > config.orientationCap:
                        raise ConsistencyOverflow(config.orientationCap)
                    queue.append(neighbour)

    vertices = tuple(sorted(seen, key=lambda mask: to_bits(mask, count)))
    index = {mask: vid for vid, mask in enumerate(vertices)}

    edges = []
    flippable = []
    for vid, mask in enumerate(vertices):
        here = tuple(k for k in range(count) if _can_flip(rules, mask, k))
        flippable.append(here)
        for k in here:
            other = index[mask ^ (1 << k)]
            if vid < other:
                edges.append((vid, other, k))
    edges.sort()

    crossingGraph = nx.Graph()
    crossingGraph.add_nodes_from(range(count))
    crossingGraph.add_edges_from(zip(*np.nonzero(np.triu(ws.crossing))))
    marginWalls = {wall for pair in ws.marginPairs for wall in pair}
    cubes = []
    for vid, mask in enumerate(vertices):
        upward = [k for k in flippable[vid] if not (mask >> k) & 1]
        for clique in nx.enumerate_all_cliques(crossingGraph.subgraph(upward)):
            cubes.append((vid, tuple(sorted(int(k) for k in clique))))
    cubes.sort()

    model = CubeComplexModel(
        walls=ws.walls,
        vertices=vertices,
        index=index,
        edges=tuple(edges),
        cubes=tuple(cubes),
        realized=tuple(index[mask] for mask in realizedMasks),
        marginCubes=sum(1 for _, walls in cubes if marginWalls.intersection(walls)),
        marginWalls=frozenset(marginWalls),
        flippable=tuple(flippable),
        ends=ws.ends,
    )
    check_model(model, ws)
    logger.info(
        "cubulated %d walls: %d vertices, %d edges, %d cubes, dimension %d",
        count,
        len(vertices),
        len(edges),
        len(cubes),
        dimension(model),
    )
    return model


def check_model(model, ws):
    """
    structural checks of a built model

    The chamber map must embed the shadow graph, edges must change exactly
    their wall, cubes must be closed under faces and every vertex must be
    reachable from a chamber.

    Raises
    ------
    ModelCheckFailed
    """
    if len(set(model.realized)) != len(model.realized):
        raise ModelCheckFailed("shadow embedding injective", model.realized)
    edgeSet = set(model.edges)
    for a, b, wall in ws.adjacency:
        u, v = sorted((model.realized[a], model.realized[b]))
        if (u, v, wall) not in edgeSet:
            raise ModelCheckFailed("shadow embedding", (a, b, wall))

    for u, v, wall in model.edges:
        if model.vertices[u] ^ model.vertices[v] != 1 << wall:
            raise ModelCheckFailed("edge label", (u, v, wall))

    cubeSet = set(model.cubes)
    for base, walls in model.cubes:
        if len(walls) < 2:
            continue
        for wall in walls:
            rest = tuple(w for w in walls if w != wall)
            top = model.index[model.vertices[base] ^ (1 << wall)]
            if (base, rest) not in cubeSet or (top, rest) not in cubeSet:
                raise ModelCheckFailed("face closure", (base, walls))

    graph = skeleton(model)
    reached = set()
    for vid in set(model.realized):
        if vid not in reached:
            reached |= nx.node_connected_component(graph, vid)
    if len(reached) != len(model.vertices):
        raise ModelCheckFailed("reachability", len(model.vertices) - len(reached))


def skeleton(model, realizedFlags=False):
    """the 1-skeleton as a networkx Graph, edge attribute wall"""
    graph = nx.Graph()
    realized = set(model.realized)
    for vid in range(len(model.vertices)):
        if realizedFlags:
            graph.add_node(vid, realized=vid in realized)
        else:
            graph.add_node(vid)
    for u, v, wall in model.edges:
        graph.add_edge(u, v, wall=wall)
    return graph


def dimension(model):
    """size of the largest cube"""
    return max((len(walls) for _, walls in model.cubes), default=0)


def max_crossing_clique(ws):
    """largest set of pairwise crossing walls, by brute-force clique search"""
    if not ws.walls:
        return 0
    graph = nx.Graph()
    graph.add_nodes_from(range(len(ws.walls)))
    graph.add_edges_from(zip(*np.nonzero(np.triu(ws.crossing))))
    return max(len(clique) for clique in nx.find_cliques(graph))


def hyperplane(model, wall):
    """
    the hyperplane dual to a wall

    Raises
    ------
    UnknownWall
    """
    if not 0 <= wall < len(model.walls):
        raise UnknownWall("no wall %r among %d walls" % (wall, len(model.walls)))
    dual = tuple(i for i, edge in enumerate(model.edges) if edge[2] == wall)
    carrier = tuple(sorted({vid for i in dual for vid in model.edges[i][:2]}))
    ends = None if model.ends is None else model.ends[wall]
    return HyperplaneRecord(wall, dual, carrier, ends)


def model_to_json(model):
    """vertices as side vectors, cubes as base index and wall list"""
    count = len(model.walls)
    return {
        "walls": list(model.walls),
        "vertices": [list(to_bits(mask, count)) for mask in model.vertices],
        "edges": [list(edge) for edge in model.edges],
        "cubes": [[base, list(walls)] for base, walls in model.cubes if walls],
        "realized": list(model.realized),
        "dimension": dimension(model),
        "margin_cubes": model.marginCubes,
    }


def induced_transport(model1, model2, vertexMap):
    """
    wall map and half-space flips induced by a vertex map

    Returns
    -------
    wallMap : dict
        wall of model1 -> wall of model2.
    flips : dict
        wall -> 0 if side 0 goes to side 0, 1 if the sides are exchanged.
    None if the map does not send edges to edges consistently.
    """
    edgeWall = {(u, v): wall for u, v, wall in model2.edges}
    edgeWall.update({(v, u): wall for (u, v), wall in list(edgeWall.items())})
    wallMap = {}
    flips = {}
    for u, v, wall in model1.edges:
        image = edgeWall.get((vertexMap[u], vertexMap[v]))
        if image is None:
            return None
        flip = ((model1.vertices[u] >> wall) & 1) ^ ((model2.vertices[vertexMap[u]] >> image) & 1)
        if wallMap.setdefault(wall, image) != image or flips.setdefault(wall, flip) != flip:
            return None
    return wallMap, flips


def _cyclically_increasing(values):
    if len(values) < 3:
        return True
    start = int(np.argmin(values))
    rotated = values[start:] + values[:start]
    return all(a < b for a, b in zip(rotated, rotated[1:]))


def dihedral_boundary_map(ends1, ends2, wallMap, flips):
    """
    does the endpoint map of a wall transport respect the cyclic order

    Each wall's positive half-arc runs counterclockwise from its first to its
    second end. A transport sends it to the image wall's positive (flip 0) or
    negative (flip 1) half-arc; an orientation preserving boundary map keeps
    the arc direction and a reversing one turns it around.

    Returns
    -------
    str or None
        "preserving", "reversing" or None if neither is possible.
    """
    domain = []
    preserving = []
    reversing = []
    for wall, image in sorted(wallMap.items()):
        if ends1[wall] is None or ends2[image] is None:
            continue
        start, end = ends1[wall]
        imageStart, imageEnd = ends2[image]
        if flips[wall]:
            imageStart, imageEnd = imageEnd, imageStart
        domain.extend([start, end])
        preserving.extend([imageStart, imageEnd])
        reversing.extend([imageEnd, imageStart])
    order = sorted(range(len(domain)), key=lambda i: domain[i])
    if _cyclically_increasing([preserving[i] for i in order]):
        return "preserving"
    if _cyclically_increasing([TWO_PI - reversing[i] for i in order]):
        return "reversing"
    return None


def square_vertices(model, square):
    """the four vertex ids of a square given as (base, (wall, wall))"""
    base, walls = square
    mask = model.vertices[base]
    first, second = (1 << walls[0]), (1 << walls[1])
    return tuple(model.index[m] for m in (mask, mask ^ first, mask ^ second, mask ^ first ^ second))


def squares(model):
    return [cube for cube in model.cubes if len(cube[1]) == 2]


def _isomorphism_search(model1, model2, respectRealized, config):
    if max(len(model1.vertices), len(model2.vertices)) > config.automorphismCap:
        raise CapExceeded(
            "models with %d and %d vertices exceed the cap of %d"
            % (len(model1.vertices), len(model2.vertices), config.automorphismCap)
        )
    if len(model1.vertices) != len(model2.vertices):
        return
    label = "realized" if respectRealized else None
    first = skeleton(model1, realizedFlags=respectRealized)
    second = skeleton(model2, realizedFlags=respectRealized)
    for count, mapping in enumerate(
        nx.vf2pp_all_isomorphisms(first, second, node_label=label), start=1
    ):
        if count > config.isomorphismLimit:
            raise CapExceeded("more than %d isomorphisms" % config.isomorphismLimit)
        yield mapping


def automorphisms(
    model,
    fixSquare=None,
    cyclicOrder=False,
    respectRealized=False,
    config=DEFAULTS,
):
    """
    brute-force automorphisms of a model

    Parameters
    ----------
    model : CubeComplexModel
    fixSquare : (int, (int, int)), optional
        a square (base vertex, walls) that must be fixed pointwise.
    cyclicOrder : bool, optional
        keep only automorphisms whose boundary map preserves or reverses the
        cyclic order of the wall ends.
    respectRealized : bool, optional
        realized vertices must go to realized vertices.
    config : Tolerances, optional

    Returns
    -------
    list of dict
        vertex maps, sorted.

    Raises
    ------
    CapExceeded
    """
    if cyclicOrder and model.ends is None:
        raise PreconditionError("the cyclic order constraint needs wall ends")
    fixed = square_vertices(model, fixSquare) if fixSquare is not None else ()
    result = []
    for mapping in _isomorphism_search(model, model, respectRealized, config):
        if any(mapping[v] != v for v in fixed):
            continue
        if cyclicOrder:
            transport = induced_transport(model, model, mapping)
            if transport is None:
                continue
            if dihedral_boundary_map(model.ends, model.ends, *transport) is None:
                continue
        result.append(dict(sorted(mapping.items())))
    result.sort(key=lambda mapping: tuple(mapping.values()))
    return result


def _agrees(induced, wanted):
    # walls without dual edges induce nothing
    return all(wanted.get(wall) == value for wall, value in induced.items())


def find_isomorphisms(
    model1, model2, wallMap=None, flips=None, respectRealized=False, config=DEFAULTS
):
    """all skeleton isomorphisms model1 -> model2, optionally inducing wallMap and flips"""
    result = []
    for mapping in _isomorphism_search(model1, model2, respectRealized, config):
        if wallMap is not None or flips is not None:
            transport = induced_transport(model1, model2, mapping)
            if transport is None:
                continue
            if wallMap is not None and not _agrees(transport[0], wallMap):
                continue
            if flips is not None and not _agrees(transport[1], flips):
                continue
        result.append(dict(sorted(mapping.items())))
    result.sort(key=lambda mapping: tuple(mapping.values()))
    return result
