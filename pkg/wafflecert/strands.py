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
Strands of periodic hyperplanes.

The part of a hyperplane a periodic curve runs through is developed in the
plane as a staircase of unit squares: every wall the curve crosses is a gate,
a unit edge shared by two consecutive squares, and consecutive gates turn the
staircase exactly when their walls cross each other. The strand is the
shortest periodic path through the gates; its length over one period is the
translation length tau in the piecewise Euclidean metric of unit cubes.

Example Usage:
>>> strand(strip_carrier(3)).tau
3.0
"""

from collections import namedtuple
from fractions import Fraction
import itertools
import logging
import math

import networkx as nx
import numpy as np

from .config import DEFAULTS
from .cubulation import hyperplane, induced_transport, square_vertices, squares
from .errors import PreconditionError, ComputationError

logger = logging.getLogger(__name__)

RIGHT = "R"
UP = "U"
STEPS = {RIGHT: np.array([1, 0]), UP: np.array([0, 1])}

STRAND_TAGS = ("Z", "dihedral", "reflective-Z", "reflective-dihedral")


class NotTranslating(PreconditionError):
    """raised if a period map fixes a point of the carrier"""


class UnsupportedPeriod(PreconditionError):
    """raised for a period the staircase development cannot represent"""


class NoConvergence(ComputationError):
    """raised if shortening does not settle within the iteration cap"""

    def __init__(self, iterations, change):
        super().__init__(
            "strand shortening still moved by %g after %d sweeps" % (change, iterations)
        )
        self.iterations = iterations
        self.change = change


class NotStabilizing(PreconditionError):
    """raised if a generator does not preserve the strand"""

    def __init__(self, generator):
        super().__init__("generator %r moves the strand" % (generator,))
        self.generator = generator


class PeriodMap(namedtuple("PeriodMap", ["linear", "shift"])):
    """the lattice isometry x -> linear x + shift of the development"""

    __slots__ = ()

    def __new__(cls, linear, shift):
        linear = tuple(tuple(int(v) for v in row) for row in linear)
        return super().__new__(cls, linear, tuple(int(v) for v in shift))

    @classmethod
    def translation(cls, shift):
        return cls(((1, 0), (0, 1)), shift)

    def __call__(self, point):
        return np.asarray(self.linear) @ np.asarray(point, dtype=float) + np.asarray(self.shift)


IDENTITY = PeriodMap.translation((0, 0))


class StrandCarrier(namedtuple("StrandCarrier", ["moves", "label"])):
    """
    One period of a developed carrier.

    moves[m] is the step from square m to square m + 1 (RIGHT or UP); the
    gate it crosses is the edge the two squares share. Square 0 is the unit
    square at the origin, and square n (n = len(moves)) is square 0 moved by
    the period vector.
    """

    __slots__ = ()

    def __new__(cls, moves, label=None):
        moves = tuple(moves)
        if any(move not in STEPS for move in moves):
            raise UnsupportedPeriod("moves must be %s or %s" % (RIGHT, UP))
        return super().__new__(cls, moves, label)

    @property
    def period(self):
        return sum((STEPS[move] for move in self.moves), np.zeros(2, dtype=int))

    def squares(self, periods=range(1)):
        """lower left corners of the squares over the given periods"""
        corners = [np.zeros(2, dtype=int)]
        for move in self.moves[:-1]:
            corners.append(corners[-1] + STEPS[move])
        return [
            tuple(int(v) for v in corner + q * self.period)
            for q in periods
            for corner in corners
        ]

    def gates(self):
        """gate m as (origin, direction) of the unit edge after square m"""
        gates = []
        corner = np.zeros(2, dtype=float)
        for move in self.moves:
            if move == RIGHT:
                gates.append((corner + np.array([1.0, 0.0]), np.array([0.0, 1.0])))
            else:
                gates.append((corner + np.array([0.0, 1.0]), np.array([1.0, 0.0])))
            corner = corner + STEPS[move]
        return gates


def strip_carrier(squaresPerPeriod, label=None):
    """a straight strip of unit squares"""
    if squaresPerPeriod < 1:
        raise NotTranslating("a strip needs at least one square per period")
    return StrandCarrier((RIGHT,) * squaresPerPeriod, label)


def carrier_from_crossings(walls, crosses, label=None):
    """
    develop the gates of a periodic sequence of crossing walls

    Parameters
    ----------
    walls : sequence of int
        the walls met over one period, in order.
    crosses : callable
        crosses(i, j) tells whether walls i and j cross.
    label : str, optional

    Raises
    ------
    UnsupportedPeriod
        if three consecutive walls cross pairwise (the hyperplane is more
        than two-dimensional there) or the turns do not close up over a
        period.
    """
    count = len(walls)
    if count == 0:
        raise UnsupportedPeriod("no wall crosses the hyperplane over a period")
    moves = [RIGHT]
    for m in range(1, count + 1):
        previous, current = walls[m - 1], walls[m % count]
        if count > 1 and crosses(previous, current):
            if crosses(walls[m - 2], current) and crosses(walls[m - 2], previous):
                raise UnsupportedPeriod("three consecutive walls cross pairwise")
            moves.append(UP if moves[-1] == RIGHT else RIGHT)
        else:
            moves.append(moves[-1])
    if moves[count] != moves[0]:
        raise UnsupportedPeriod("an odd number of turns per period")
    return StrandCarrier(moves[:count], label)


def _chord_frame(line):
    normal = np.asarray(line.normal, dtype=float)
    return normal * line.offset, np.array([-normal[1], normal[0]])


def _meet(first, second):
    matrix = np.array([first.normal, second.normal], dtype=float)
    return np.linalg.solve(matrix, np.array([first.offset, second.offset]))


def crossing_sequence(complex_, wall):
    """
    walls crossing a wall inside the window, ordered along it

    Positions are hyperbolic distances from the chord midpoint for a
    hyperbolic complex (the chord of a Klein line is isometric to a
    diameter) and Euclidean ones otherwise.

    Returns
    -------
    list of (position, wall)
    """
    line = complex_.lines[wall]
    middle, along = _chord_frame(line)
    halfChord = math.sqrt(max(0.0, 1.0 - line.offset**2))
    sequence = []
    for pair in complex_.crossingPairs:
        if wall not in pair:
            continue
        other = pair[0] if pair[1] == wall else pair[1]
        t = float(np.dot(_meet(line, complex_.lines[other]) - middle, along))
        if complex_.geodesics is not None:
            t = math.atanh(t / halfChord)
        sequence.append((t, other))
    sequence.sort()
    return sequence


def _orbit(label):
    return label.rsplit(":", 1)[0]


def pattern_carrier(complex_, wall, translationLength, positionTol=1e-6, margin=2):
    """
    carrier of the hyperplane of a wall whose stabilizer translates by translationLength

    One period starts at the crossing with `margin` crossings before it. The
    next period must be visible in the window, at least `margin` crossings of
    it, and repeat the first: same orbits at positions moved by one period.

    Raises
    ------
    UnsupportedPeriod
        if the period does not fit the window with that margin or does not
        repeat.
    """
    if not translationLength > 0:
        raise NotTranslating("translation length %r" % translationLength)
    sequence = crossing_sequence(complex_, wall)
    if len(sequence) <= margin:
        raise UnsupportedPeriod("wall %d meets only %d walls" % (wall, len(sequence)))
    start = sequence[margin][0]
    end = start + translationLength - positionTol
    period = [(t, other) for t, other in sequence if start - positionTol <= t < end]
    following = [(t, other) for t, other in sequence if t >= end]
    if len(following) < margin:
        raise UnsupportedPeriod(
            "the period of wall %d does not fit the window with margin %d" % (wall, margin)
        )
    for t, other in following:
        if t > end + translationLength:
            break
        shifted = [
            candidate
            for s, candidate in period
            if abs(s + translationLength - t) <= positionTol
            and _orbit(complex_.labels[candidate]) == _orbit(complex_.labels[other])
        ]
        if not shifted:
            raise UnsupportedPeriod("crossing with %s does not repeat" % complex_.labels[other])
    crossingPairs = complex_.crossingPairs
    return carrier_from_crossings(
        [other for _, other in period],
        lambda i, j: (min(i, j), max(i, j)) in crossingPairs,
        complex_.labels[wall],
    )


StrandModel = namedtuple(
    "StrandModel",
    ["carrier", "period", "parameters", "polyline", "tau", "l1Length", "iterations", "lengths"],
)
StrandModel.__doc__ = """
A shortened strand.

parameters holds the position of the strand on every gate of one period,
polyline the gate points followed by the first one moved by the period,
lengths the length after each sweep.
"""


def _resolve_period(carrier, periodMap):
    """number of carrier periods in the period map"""
    vector = carrier.period
    if periodMap is None:
        return 1
    linear = np.asarray(periodMap.linear)
    shift = np.asarray(periodMap.shift)
    if not np.array_equal(linear, np.eye(2, dtype=int)):
        if abs(np.linalg.det(np.eye(2) - linear)) > 0.5:
            raise NotTranslating("period map %r has a fixed point" % (periodMap,))
        raise UnsupportedPeriod("glide reflections are not supported")
    if not shift.any():
        raise NotTranslating("the period map is the identity")
    multiple = int(round(np.dot(shift, vector) / np.dot(vector, vector)))
    if multiple < 1 or not np.array_equal(multiple * vector, shift):
        raise UnsupportedPeriod("shift %s is no positive multiple of %s" % (shift, vector))
    return multiple


def _polyline(gates, params, vector):
    points = [origin + s * direction for (origin, direction), s in zip(gates, params)]
    points.append(points[0] + vector)
    return np.array(points)


def _length(points):
    return float(np.sum(np.linalg.norm(np.diff(points, axis=0), axis=1)))


def _best_on_gate(origin, direction, before, after):
    """position on a unit gate minimising the distance from before through it to after"""
    normal = np.array([-direction[1], direction[0]])
    a = float(np.dot(before - origin, normal))
    b = float(np.dot(after - origin, normal))
    pa = float(np.dot(before - origin, direction))
    pb = float(np.dot(after - origin, direction))
    if a * b > 0:
        b = -b
    if abs(a) + abs(b) == 0:
        s = 0.5 * (pa + pb)
    else:
        s = pa + (pb - pa) * abs(a) / (abs(a) + abs(b))
    return min(1.0, max(0.0, s))


def strand(carrier, periodMap=None, config=DEFAULTS):
    """
    shorten the strand through a carrier

    Starts on the gate midpoints, the path through the square centres, and
    moves one gate point at a time to its best position given its
    neighbours, a sweep over all gates per iteration, until neither the
    length nor any gate position changes by config.strandTol.

    Parameters
    ----------
    carrier : StrandCarrier
    periodMap : PeriodMap, optional
        defaults to the carrier's own period; a multiple of it unrolls
        several periods.
    config : Tolerances, optional

    Returns
    -------
    StrandModel

    Raises
    ------
    NotTranslating
    UnsupportedPeriod
    NoConvergence
    """
    multiple = _resolve_period(carrier, periodMap)
    if multiple > 1:
        carrier = StrandCarrier(carrier.moves * multiple, carrier.label)
    vector = carrier.period.astype(float)
    gates = carrier.gates()
    count = len(gates)
    params = np.full(count, 0.5)
    lengths = [_length(_polyline(gates, params, vector))]

    for sweep in range(1, config.strandIterations + 1):
        largest = 0.0
        for m, (origin, direction) in enumerate(gates):
            previous = gates[m - 1][0] + params[m - 1] * gates[m - 1][1]
            if m == 0:
                previous = previous - vector
            nextOrigin, nextDirection = gates[(m + 1) % count]
            following = nextOrigin + params[(m + 1) % count] * nextDirection
            if m == count - 1:
                following = following + vector
            s = _best_on_gate(origin, direction, previous, following)
            largest = max(largest, abs(s - params[m]))
            params[m] = s
        lengths.append(_length(_polyline(gates, params, vector)))
        if largest < config.strandTol and abs(lengths[-2] - lengths[-1]) < config.strandTol:
            break
    else:
        raise NoConvergence(config.strandIterations, largest)

    polyline = _polyline(gates, params, vector)
    tau = _length(polyline)
    logger.debug("strand %s: tau %.12g after %d sweeps", carrier.label, tau, sweep)
    return StrandModel(
        carrier=carrier,
        period=PeriodMap.translation(tuple(int(v) for v in vector)),
        parameters=tuple(float(s) for s in params),
        polyline=polyline,
        tau=tau,
        l1Length=float(np.sum(np.abs(np.diff(polyline, axis=0)))),
        iterations=sweep,
        lengths=tuple(lengths),
    )


HyperplanePath = namedtuple("HyperplanePath", ["wall", "rungs", "walls"])
HyperplanePath.__doc__ = """
The hyperplane of a wall traced through a model.

rungs are the dual edges (indices into model.edges) in order along the
hyperplane; walls[i] is the wall crossed between rungs i and i + 1.
"""


def hyperplane_path(model, wall):
    """
    order the dual edges of a wall along its hyperplane

    Two dual edges are neighbours if they are opposite sides of a square. The
    path starts at the end with the smaller edge index.

    Raises
    ------
    UnknownWall
    UnsupportedPeriod
        if the hyperplane is not a path, i.e. it is more than one-dimensional
        somewhere.
    """
    record = hyperplane(model, wall)
    rungIndex = {}
    for i in record.dualEdges:
        u, v, _ = model.edges[i]
        rungIndex[u, v] = rungIndex[v, u] = i

    graph = nx.Graph()
    graph.add_nodes_from(record.dualEdges)
    for base, walls in squares(model):
        if wall not in walls:
            continue
        other = walls[1] if walls[0] == wall else walls[0]
        corner, alongFirst, alongSecond, opposite = square_vertices(model, (base, walls))
        if walls[0] == wall:
            first, second = (corner, alongFirst), (alongSecond, opposite)
        else:
            first, second = (corner, alongSecond), (alongFirst, opposite)
        graph.add_edge(rungIndex[first], rungIndex[second], wall=other)

    if not record.dualEdges:
        raise UnsupportedPeriod("wall %d has no dual edges" % wall)
    if not nx.is_connected(graph) or graph.number_of_edges() != len(record.dualEdges) - 1:
        raise UnsupportedPeriod("the hyperplane of wall %d is not a path" % wall)
    if max(degree for _, degree in graph.degree) > 2:
        raise UnsupportedPeriod("the hyperplane of wall %d branches" % wall)

    ends = sorted(node for node, degree in graph.degree if degree <= 1)
    rungs = [ends[0]]
    walls = []
    while len(rungs) < len(record.dualEdges):
        current = rungs[-1]
        step = next(n for n in sorted(graph[current]) if n not in rungs[-2:-1])
        walls.append(graph.edges[current, step]["wall"])
        rungs.append(step)
    return HyperplanePath(wall, tuple(rungs), tuple(walls))


def _rung_images(model, path, vertexMap):
    """rung position -> image rung position, for rungs with both ends mapped"""
    position = {}
    for k, i in enumerate(path.rungs):
        u, v, _ = model.edges[i]
        position[u, v] = position[v, u] = k
    images = {}
    for k, i in enumerate(path.rungs):
        u, v, _ = model.edges[i]
        if u in vertexMap and v in vertexMap:
            image = position.get((vertexMap[u], vertexMap[v]))
            if image is None:
                return None
            images[k] = image
    return images


def _model_crossings(model):
    return {walls for _, walls in squares(model)}


def hyperplane_strand(model, wall, periodMap, config=DEFAULTS):
    """
    the strand of the hyperplane of a wall under a period map of the model

    Parameters
    ----------
    model : CubeComplexModel
    wall : int
    periodMap : dict
        vertex id -> vertex id, an automorphism of the part of the model where
        it is defined; it must move the hyperplane along itself.
    config : Tolerances, optional

    Returns
    -------
    StrandModel
        shortened through one period of the developed carrier.

    Raises
    ------
    NotTranslating
        if the map fixes a carrier vertex or does not move the rungs by a
        constant shift.
    UnsupportedPeriod
        if the map does not preserve edges or the hyperplane.
    NoConvergence
    """
    path = hyperplane_path(model, wall)
    carrier = hyperplane(model, wall).carrier
    fixed = [vid for vid in carrier if periodMap.get(vid) == vid]
    if fixed:
        raise NotTranslating("the period map fixes carrier vertex %d" % fixed[0])

    edgeSet = {(u, v) for u, v, _ in model.edges}
    for u, v, _ in model.edges:
        if u in periodMap and v in periodMap:
            image = (min(periodMap[u], periodMap[v]), max(periodMap[u], periodMap[v]))
            if image not in edgeSet:
                raise UnsupportedPeriod("the period map breaks edge (%d, %d)" % (u, v))

    images = _rung_images(model, path, periodMap)
    if images is None:
        raise UnsupportedPeriod("the period map moves wall %d off its hyperplane" % wall)
    shifts = {image - k for k, image in images.items()}
    if len(shifts) != 1 or 0 in shifts:
        raise NotTranslating("the period map does not translate along wall %d" % wall)
    shift = shifts.pop()
    walls = path.walls if shift > 0 else path.walls[::-1]

    crossings = _model_crossings(model)
    periodCarrier = carrier_from_crossings(
        walls[: abs(shift)],
        lambda i, j: (min(i, j), max(i, j)) in crossings,
        model.walls[wall],
    )
    logger.debug("wall %d: %d rungs, period %d", wall, len(path.rungs), abs(shift))
    return strand(periodCarrier, config=config)


def _square_centre(carrier, index):
    periods, m = divmod(index, len(carrier.moves))
    return np.array(carrier.squares(range(periods, periods + 1))[m], dtype=float) + 0.5


def development_symmetry(model, wall, automorphism, carrier):
    """
    the lattice isometry of a development induced by a model automorphism

    Rung i of the hyperplane path sits in square i of the development. The
    automorphism must move the rungs by i -> c + i or i -> c - i; it swaps
    the sides of the hyperplane iff the isometry's determinant times that
    direction is -1.

    Returns
    -------
    PeriodMap

    Raises
    ------
    NotStabilizing
        if the automorphism does not preserve the hyperplane.
    UnsupportedPeriod
        if no lattice isometry of the development matches it.
    """
    path = hyperplane_path(model, wall)
    transport = induced_transport(model, model, automorphism)
    if transport is None or transport[0].get(wall) != wall:
        raise NotStabilizing(automorphism)
    images = _rung_images(model, path, automorphism)
    if images is None or len(images) != len(path.rungs):
        raise NotStabilizing(automorphism)

    count = len(path.rungs)
    if all(images[k] - k == images[0] for k in range(count)):
        direction = 1
    elif all(images[k] + k == images[0] for k in range(count)):
        direction = -1
    else:
        raise UnsupportedPeriod("rungs are not moved rigidly")
    # a single rung leaves the direction open, take it from the flip
    sideSign = -1 if transport[1][wall] else 1

    start = _square_centre(carrier, 0)
    for linear in _LATTICE_LINEAR:
        if count > 1 and round(np.linalg.det(linear)) * direction != sideSign:
            continue
        shift = _square_centre(carrier, images[0]) - linear @ start
        if all(
            np.allclose(linear @ _square_centre(carrier, k) + shift,
                        _square_centre(carrier, images[k]))
            for k in range(count)
        ):
            return PeriodMap(linear, np.rint(shift).astype(int))
    raise UnsupportedPeriod("no isometry of the development matches the automorphism")


def unfolded_length(carrier):
    """
    length of the straight periodic path, if one passes all gates

    The development is already planar, so a straight segment of direction
    the period vector is a candidate; it is taut if some offset lets it
    cross every gate. Returns None otherwise.
    """
    vector = carrier.period.astype(float)
    normal = np.array([-vector[1], vector[0]]) / np.linalg.norm(vector)
    low, high = -math.inf, math.inf
    for origin, direction in carrier.gates():
        ends = sorted((float(np.dot(origin, normal)), float(np.dot(origin + direction, normal))))
        low, high = max(low, ends[0]), min(high, ends[1])
    return float(np.linalg.norm(vector)) if low <= high else None


_LATTICE_LINEAR = tuple(
    np.array(signs)[:, None] * np.eye(2, dtype=int)[list(order)]
    for order in itertools.permutations(range(2))
    for signs in itertools.product((1, -1), repeat=2)
)


def carrier_symmetries(carrier, commuting=True):
    """
    lattice isometries preserving the periodic carrier

    Parameters
    ----------
    carrier : StrandCarrier
    commuting : bool, optional
        keep only those commuting with the period; otherwise also those
        reversing it.

    Returns
    -------
    list of PeriodMap
        one per class modulo the period, square 0 going into period 0.
    """
    vector = carrier.period
    occupied = set(carrier.squares(range(-3, 4)))
    periodZero = carrier.squares()
    centres = [np.array(corner) + 0.5 for corner in periodZero]
    found = []
    for linear in _LATTICE_LINEAR:
        image = linear @ vector
        if np.array_equal(image, vector):
            pass
        elif commuting or not np.array_equal(image, -vector):
            continue
        for target in centres:
            shift = np.rint(target - linear @ centres[0]).astype(int)
            images = [linear @ centre + shift - 0.5 for centre in centres]
            if all(tuple(int(round(v)) for v in corner) in occupied for corner in images):
                found.append(PeriodMap(linear, shift))
    return found


def _distance_to_polyline(point, points):
    best = math.inf
    for a, b in zip(points, points[1:]):
        along = b - a
        span = float(np.dot(along, along))
        t = 0.0 if span == 0 else min(1.0, max(0.0, float(np.dot(point - a, along)) / span))
        best = min(best, float(np.linalg.norm(point - (a + t * along))))
    return best


def _extended(model, periods=2):
    vector = model.carrier.period
    base = model.polyline[:-1]
    return np.concatenate([base + q * vector for q in range(-periods, periods + 1)])


def strand_invariant(model, symmetry, tol=DEFAULTS.strandTol):
    """does a lattice isometry map the strand onto itself"""
    points = _extended(model)
    return all(
        _distance_to_polyline(symmetry(point), points) <= tol for point in model.polyline[:-1]
    )


def fixes_pointwise(model, symmetry, tol=DEFAULTS.strandTol):
    return all(
        np.linalg.norm(symmetry(point) - point) <= tol for point in model.polyline[:-1]
    )


def classify_strand(generators, model, tol=DEFAULTS.strandTol):
    """
    type of a strand from generators of its stabilizer

    Raises
    ------
    NotStabilizing
        if a generator does not map the strand to itself.
    """
    vector = model.carrier.period
    reflective = False
    dihedral = False
    for generator in generators:
        if not strand_invariant(model, generator, tol):
            raise NotStabilizing(generator)
        image = np.asarray(generator.linear) @ vector
        if np.array_equal(image, -vector):
            dihedral = True
        elif generator != IDENTITY and fixes_pointwise(model, generator, tol):
            reflective = True
    tag = "dihedral" if dihedral else "Z"
    return "reflective-" + tag if reflective else tag


def strand_density(tag):
    """1/2 for reflective strands, 1 otherwise"""
    if tag not in STRAND_TAGS:
        raise PreconditionError("unknown strand type %r" % tag)
    return Fraction(1, 2) if tag.startswith("reflective") else Fraction(1)


def strand_to_json(model):
    return {
        "label": model.carrier.label,
        "moves": "".join(model.carrier.moves),
        "tau": model.tau,
        "l1_length": model.l1Length,
        "iterations": model.iterations,
        "polyline": [[float(x), float(y)] for x, y in model.polyline],
    }
