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
Primitives of the hyperbolic plane.

Computations run in the upper half-plane; the Poincaré disc (centered at the
point i through the Cayley map z -> (z - i) / (z + i)) is used for boundary
angles and rendering. Every type is an immutable value and every function is
pure.

Example Usage:
>>> m = MobiusMap(2, 0, 0, 0.5)
>>> axis, length = axis_and_translation_length(m)
>>> axis.a, axis.b.isInfinite
(BoundaryPoint(value=0.0, isInfinite=False), True)
>>> round(length, 12) == round(2 * math.log(2), 12)
True
"""

from collections import namedtuple
import cmath
import math

import numpy as np
from scipy import integrate, optimize
from scipy.sparse import csgraph

from .config import DEFAULTS
from .errors import PreconditionError, ComputationError

TWO_PI = 2.0 * math.pi


class NotInUpperHalfPlane(PreconditionError):
    """raised for points with non-positive imaginary part"""


class NotHyperbolic(PreconditionError):
    """raised if a Möbius map is elliptic, parabolic or the identity"""


class SharedEndpoint(PreconditionError):
    """raised if two geodesics share an ideal endpoint"""


class DegeneratePair(PreconditionError):
    """raised for a pair of equal boundary points"""


class PointOnGeodesic(PreconditionError):
    """raised if the observation point lies on the geodesic"""


class NonPositiveLength(PreconditionError):
    """raised for lengths that are zero or negative"""


class InadmissibleParameters(PreconditionError):
    """raised for visual metric parameters violating exp(eps*delta)-1 < sqrt(2)-1"""


class HPoint(namedtuple("HPoint", ["x", "y"])):
    """A point of the upper half-plane."""

    __slots__ = ()

    def __new__(cls, x, y):
        x, y = float(x), float(y)
        if not y > 0 or not math.isfinite(x) or not math.isfinite(y):
            raise NotInUpperHalfPlane("(%r, %r) is not in the upper half-plane" % (x, y))
        return super().__new__(cls, x, y)

    @classmethod
    def from_complex(cls, z):
        return cls(z.real, z.imag)

    @classmethod
    def from_disc(cls, w):
        """inverse Cayley map of a point of the open unit disc"""
        return cls.from_complex(1j * (1 + w) / (1 - w))

    @property
    def z(self):
        return complex(self.x, self.y)

    def to_disc(self):
        return (self.z - 1j) / (self.z + 1j)


class BoundaryPoint(namedtuple("BoundaryPoint", ["value", "isInfinite"])):
    """
    A point of the real line or the point at infinity.

    Infinity carries its own tag and a value of 0.0; it is never stored as a
    large float.
    """

    __slots__ = ()

    def __new__(cls, value, isInfinite=False):
        if isInfinite:
            return super().__new__(cls, 0.0, True)
        value = float(value) + 0.0
        if not math.isfinite(value):
            raise ValueError("use INFINITY for the point at infinity")
        return super().__new__(cls, value, False)

    @classmethod
    def from_projective(cls, p, q):
        """the boundary point with homogeneous coordinates (p : q)"""
        if abs(q) <= 1e-15 * abs(p):
            return INFINITY
        return cls(p / q)

    @classmethod
    def from_disc_angle(cls, theta):
        """the boundary point at the given angle of the disc model"""
        theta = math.fmod(theta, TWO_PI)
        if theta < 0:
            theta += TWO_PI
        # (p : q) with -2*atan2(q, p) = theta
        half = -theta / 2.0
        return cls.from_projective(math.cos(half), math.sin(half))

    def projective(self):
        """homogeneous coordinates (p, q)"""
        if self.isInfinite:
            return (1.0, 0.0)
        return (self.value, 1.0)

    def sort_key(self):
        """order on the extended real line, infinity last"""
        return math.inf if self.isInfinite else self.value

    def disc_angle(self):
        """angle in [0, 2 pi) of the disc model; increases with the value"""
        p, q = self.projective()
        theta = -2.0 * math.atan2(q, p)
        if theta < 0:
            theta += TWO_PI
        return 0.0 if theta >= TWO_PI else theta

    def isclose(self, other, tol=DEFAULTS.endpointTol):
        return angle_gap(self.disc_angle(), other.disc_angle()) <= tol


INFINITY = BoundaryPoint(0.0, True)


def angle_gap(alpha, beta):
    """distance of two angles on the circle"""
    gap = abs(alpha - beta) % TWO_PI
    return min(gap, TWO_PI - gap)


class Geodesic(namedtuple("Geodesic", ["a", "b"])):
    """
    A geodesic given by its unordered pair of ideal endpoints.

    The endpoints are stored sorted on the extended real line, so a vertical
    geodesic always has b == INFINITY.
    """

    __slots__ = ()

    def __new__(cls, a, b):
        if not isinstance(a, BoundaryPoint):
            a = BoundaryPoint(a)
        if not isinstance(b, BoundaryPoint):
            b = BoundaryPoint(b)
        if a == b:
            raise DegeneratePair("geodesic endpoints must be distinct")
        if a.sort_key() > b.sort_key():
            a, b = b, a
        return super().__new__(cls, a, b)

    @property
    def isVertical(self):
        return self.b.isInfinite

    def center_radius(self):
        """center and radius of the half-circle (not for vertical geodesics)"""
        return (self.a.value + self.b.value) / 2.0, (self.b.value - self.a.value) / 2.0

    def disc_angles(self):
        return tuple(sorted((self.a.disc_angle(), self.b.disc_angle())))

    def isclose(self, other, tol=DEFAULTS.endpointTol):
        return self.a.isclose(other.a, tol) and self.b.isclose(other.b, tol)


class MobiusMap:
    """
    An orientation preserving isometry z -> (az + b) / (cz + d).

    Entries are rescaled to determinant one on construction; a map and its
    negation describe the same isometry.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        det = a * d - b * c
        if not det > 0:
            raise PreconditionError("Möbius map needs a positive determinant, got %r" % det)
        scale = math.sqrt(det)
        object.__setattr__(self, "a", a / scale)
        object.__setattr__(self, "b", b / scale)
        object.__setattr__(self, "c", c / scale)
        object.__setattr__(self, "d", d / scale)

    def __setattr__(self, name, value):
        raise AttributeError("MobiusMap is immutable")

    def __repr__(self):
        return "MobiusMap(%r, %r, %r, %r)" % (self.a, self.b, self.c, self.d)

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_matrix(cls, matrix):
        matrix = np.asarray(matrix, dtype=float)
        return cls(matrix[0, 0], matrix[0, 1], matrix[1, 0], matrix[1, 1])

    @classmethod
    def rotation(cls, theta):
        """rotation about i, turning disc angles by theta counterclockwise"""
        cos, sin = math.cos(theta / 2.0), math.sin(theta / 2.0)
        return cls(cos, sin, -sin, cos)

    @classmethod
    def moving_to_i(cls, point):
        """the map z -> (z - x) / y, sending point to i"""
        return cls(1.0, -point.x, 0.0, point.y)

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self):
        return self.a + self.d

    @property
    def determinant(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def isclose(self, other, tol=DEFAULTS.detTol):
        """equality up to sign, entry-wise within tol"""
        mine, theirs = self.matrix, other.matrix
        return bool(
            np.max(np.abs(mine - theirs)) <= tol or np.max(np.abs(mine + theirs)) <= tol
        )


def _apply_point(m, p):
    return HPoint.from_complex((m.a * p.z + m.b) / (m.c * p.z + m.d))


def _apply_boundary(m, t):
    p, q = t.projective()
    return BoundaryPoint.from_projective(m.a * p + m.b * q, m.c * p + m.d * q)


def _apply_geodesic(m, g):
    return Geodesic(_apply_boundary(m, g.a), _apply_boundary(m, g.b))


_APPLY_DISPATCH = {
    HPoint: _apply_point,
    BoundaryPoint: _apply_boundary,
    Geodesic: _apply_geodesic,
}


def apply(m, p):
    """
    apply the Möbius map m to a point, boundary point or geodesic

    Parameters
    ----------
    m : MobiusMap
    p : HPoint, BoundaryPoint or Geodesic

    Returns
    -------
    the image, of the same kind as p
    """
    try:
        action = _APPLY_DISPATCH[type(p)]
    except KeyError:
        raise TypeError("can't apply a Möbius map to %s" % type(p).__name__) from None
    return action(m, p)


def distance(a, b):
    """hyperbolic distance of two points of the upper half-plane"""
    # same value as arcosh(1 + |a - b|^2 / (2 a.y b.y)), better conditioned
    return 2.0 * math.asinh(abs(a.z - b.z) / (2.0 * math.sqrt(a.y * b.y)))


def fixed_points(m, traceMargin=DEFAULTS.traceMargin):
    """
    the repelling and attracting fixed points of a hyperbolic map

    Raises
    ------
    NotHyperbolic
        if |trace| <= 2 + traceMargin.
    """
    trace = m.trace
    if abs(trace) <= 2.0 + traceMargin:
        raise NotHyperbolic("|trace| = %.12g is not above 2" % abs(trace))

    if abs(m.c) <= 1e-15 * (abs(m.a) + abs(m.d)):
        finite = BoundaryPoint(m.b / (m.d - m.a))
        # infinity attracts iff |a| > |d|
        if abs(m.a) > abs(m.d):
            return finite, INFINITY
        return INFINITY, finite

    root = math.sqrt(trace * trace - 4.0)
    points = [
        ((m.a - m.d) + root) / (2.0 * m.c),
        ((m.a - m.d) - root) / (2.0 * m.c),
    ]
    # derivative at a fixed point z is 1 / (cz + d)^2
    points.sort(key=lambda z: abs(m.c * z + m.d))
    return BoundaryPoint(points[0]), BoundaryPoint(points[1])


def axis_and_translation_length(m, traceMargin=DEFAULTS.traceMargin):
    """
    axis and translation length of a hyperbolic Möbius map

    Returns
    -------
    axis : Geodesic
        the geodesic joining the two fixed points.
    length : float
        2 arcosh(|trace| / 2).

    Raises
    ------
    NotHyperbolic
    """
    repelling, attracting = fixed_points(m, traceMargin)
    return Geodesic(repelling, attracting), 2.0 * math.acosh(abs(m.trace) / 2.0)


def distance_to_geodesic(p, g):
    """distance from a point to a geodesic"""
    if g.isVertical:
        return math.asinh(abs(p.x - g.a.value) / p.y)
    center, radius = g.center_radius()
    power = (p.x - center) ** 2 + p.y**2 - radius**2
    return math.asinh(abs(power) / (2.0 * radius * p.y))


def crossing(g1, g2, tol=DEFAULTS.endpointTol):
    """
    true iff the endpoints of g1 separate those of g2 on the boundary circle

    Raises
    ------
    SharedEndpoint
        if the two geodesics have an endpoint in common (within tol).
    """
    for end1 in g1:
        for end2 in g2:
            if end1.isclose(end2, tol):
                raise SharedEndpoint("%s and %s share an endpoint" % (g1, g2))
    low, high = g1.disc_angles()
    inside = [low < end.disc_angle() < high for end in g2]
    return inside[0] != inside[1]


def gromov_product(o, a, b):
    """
    the Gromov product (a|b)_o, realized as the distance from o to [a, b]

    Raises
    ------
    DegeneratePair
        for a == b.
    """
    return distance_to_geodesic(o, Geodesic(a, b))


VisualMetricParams = namedtuple(
    "VisualMetricParams", ["epsilon", "delta", "observationPoint"]
)


def visual_params(epsilon=None, delta=None, o=None, config=DEFAULTS):
    """
    checked visual metric parameters, observation point defaults to i

    epsilon and delta default to config.visualEpsilon and config.visualDelta.

    Raises
    ------
    InadmissibleParameters
        unless epsilon > 0 and exp(epsilon * delta) - 1 < sqrt(2) - 1.
    """
    epsilon = config.visualEpsilon if epsilon is None else epsilon
    delta = config.visualDelta if delta is None else delta
    if o is None:
        o = HPoint(0.0, 1.0)
    if not epsilon > 0 or not delta > 0:
        raise InadmissibleParameters("epsilon and delta must be positive")
    if math.expm1(epsilon * delta) >= math.sqrt(2.0) - 1.0:
        raise InadmissibleParameters(
            "exp(%g * %g) - 1 is not below sqrt(2) - 1" % (epsilon, delta)
        )
    return VisualMetricParams(epsilon, delta, o)


def epsilon_prime(params):
    return math.expm1(params.epsilon * params.delta)


def visual_q(params, a, b):
    """q_eps(a, b) = exp(-eps (a|b)_o)"""
    return math.exp(-params.epsilon * gromov_product(params.observationPoint, a, b))


def visual_boundary_sample(params, size):
    """size boundary points, equally spaced in angle as seen from o"""
    back = MobiusMap.moving_to_i(params.observationPoint).inverse()
    return [
        apply(back, BoundaryPoint.from_disc_angle(TWO_PI * k / size)) for k in range(size)
    ]


def visual_chain_metric(params, points, sources=None):
    """
    q_eps matrix of a boundary sample and its chain infimum

    The chain infimum over chains through the sample points bounds the true
    visual metric d_eps from above; both come back as dense arrays.

    Parameters
    ----------
    params : VisualMetricParams
    points : list of BoundaryPoint
        pairwise distinct.
    sources : list of int, optional
        rows of the chain matrix to compute. The default is all rows.

    Returns
    -------
    q : ndarray (n, n)
    chain : ndarray (len(sources), n)
    """
    # ends theta apart as seen from o span a geodesic arccosh(1 / sin(theta / 2)) from o
    frame = MobiusMap.moving_to_i(params.observationPoint)
    angles = np.array([apply(frame, point).disc_angle() for point in points])
    half = np.abs(np.sin(0.5 * (angles[:, None] - angles[None, :])))
    with np.errstate(divide="ignore"):
        reach = np.arccosh(np.maximum(1.0 / half, 1.0))
    q = np.exp(-params.epsilon * reach)
    chain = csgraph.shortest_path(q, method="D", directed=False, indices=sources)
    return q, np.atleast_2d(chain)


BoundaryArc = namedtuple("BoundaryArc", ["start", "end"])
BoundaryArc.__doc__ = "open arc of the boundary, counterclockwise in the disc from start to end"


def arc_contains(arc, point):
    """true if the boundary point lies strictly inside the arc"""
    start, end = arc.start.disc_angle(), arc.end.disc_angle()
    angle = point.disc_angle()
    if start < end:
        return start < angle < end
    return angle > start or angle < end


def arcs_intersect(arc1, arc2):
    return (
        arc_contains(arc1, arc2.start)
        or arc_contains(arc2, arc1.start)
        or arc1.start == arc2.start
    )


def o_shadow(g, o, config=DEFAULTS):
    """
    the component of the boundary minus the ends of g on the far side from o

    Raises
    ------
    PointOnGeodesic
        if o is within config.geodesicTol of g.
    """
    if distance_to_geodesic(o, g) <= config.geodesicTol:
        raise PointOnGeodesic("%s lies on %s" % (o, g))
    if g.isVertical:
        if o.x < g.a.value:
            return BoundaryArc(g.a, INFINITY)
        return BoundaryArc(INFINITY, g.a)
    center, radius = g.center_radius()
    if (o.x - center) ** 2 + o.y**2 < radius**2:
        return BoundaryArc(g.b, g.a)
    return BoundaryArc(g.a, g.b)


Horostrip = namedtuple("Horostrip", ["yLow", "yHigh"])
Horostrip.__doc__ = "region between the horizontal horocycles at heights yLow < yHigh"


def horostrip(yLow, yHigh):
    """checked Horostrip constructor"""
    if not 0 < yLow < yHigh:
        raise NonPositiveLength("horostrip needs 0 < yLow < yHigh, got %r, %r" % (yLow, yHigh))
    return Horostrip(float(yLow), float(yHigh))


def horostrip_width(strip):
    return math.log(strip.yHigh / strip.yLow)


def horostrip_leaf_length(strip):
    """length of a vertical leaf, which equals the width of the strip"""
    if not 0 < strip.yLow < strip.yHigh:
        raise NonPositiveLength("degenerate horostrip %s" % (strip,))
    return math.log(strip.yHigh) - math.log(strip.yLow)


def horocyclic_length(euclideanLength, height):
    """hyperbolic length of a horizontal segment at the given height"""
    return euclideanLength / height


def quadrilateral_relation(lenAlpha, lenBeta):
    """|ln(lenAlpha / lenBeta)|, the width of the strip the two arcs bound"""
    if not lenAlpha > 0 or not lenBeta > 0:
        raise NonPositiveLength("lengths must be positive: %r, %r" % (lenAlpha, lenBeta))
    return abs(math.log(lenAlpha) - math.log(lenBeta))


def path_length(curve, t0=0.0, t1=1.0, derivative=None, tol=DEFAULTS.quadratureTol):
    """
    hyperbolic length of a path, the integral of sqrt(x'^2 + y'^2) / y

    Parameters
    ----------
    curve : callable or array_like
        either a function t -> (x, y) integrated over [t0, t1] by adaptive
        quadrature, or an (n, 2) array of samples measured with the midpoint
        rule.
    t0, t1 : float, optional
        parameter interval for callables.
    derivative : callable, optional
        t -> (x', y'); central differences are used when omitted.
    tol : float, optional
        absolute and relative quadrature tolerance.
    """
    if callable(curve):
        if derivative is None:
            step = 1e-6 * max(1.0, abs(t1 - t0))

            def derivative(t):
                ahead, behind = np.asarray(curve(t + step)), np.asarray(curve(t - step))
                return (ahead - behind) / (2.0 * step)

        def integrand(t):
            y = curve(t)[1]
            if not y > 0:
                raise NotInUpperHalfPlane("path leaves the upper half-plane at t=%g" % t)
            return math.hypot(*derivative(t)) / y

        value, _ = integrate.quad(integrand, t0, t1, epsabs=tol, epsrel=tol, limit=500)
        return value

    samples = np.asarray(curve, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2:
        raise ValueError("samples must have shape (n, 2)")
    if np.any(samples[:, 1] <= 0):
        raise NotInUpperHalfPlane("path leaves the upper half-plane")
    if len(samples) < 2:
        return 0.0
    steps = np.hypot(*np.diff(samples, axis=0).T)
    heights = (samples[1:, 1] + samples[:-1, 1]) / 2.0
    return float(np.sum(steps / heights))


def geodesic_arc(p, q, count):
    """count points along the geodesic segment from p to q, for sampling"""
    toI = MobiusMap.moving_to_i(p)
    image = apply(toI, q).z
    # points iy with y > 1 sit on the positive real axis of the disc
    w = (image - 1j) / (image + 1j)
    theta = -cmath.phase(w)
    spin = MobiusMap.rotation(theta)
    back = (spin @ toI).inverse()
    top = distance(p, q)
    points = []
    for s in np.linspace(0.0, top, count):
        point = apply(back, HPoint(0.0, math.exp(s)))
        points.append((point.x, point.y))
    return np.array(points)


def _hyperboloid(points):
    """upper half-plane points (n, 2) as hyperboloid model vectors (n, 3)"""
    x, y = points[:, 0], points[:, 1]
    square = x * x + y * y
    return np.stack([(1.0 + square) / (2.0 * y), x / y, (square - 1.0) / (2.0 * y)], axis=1)


def _pairwise_max_distance(points):
    vectors = _hyperboloid(points)
    signature = np.array([1.0, -1.0, -1.0])
    gram = (vectors * signature) @ vectors.T
    return float(np.arccosh(np.clip(np.max(gram), 1.0, None)))


def coarse_intersection_diameter(g1, g2, D, window, config=DEFAULTS):
    """
    diameter of the D-coarse intersection of two geodesics

    The set {x : d(x, g1) <= D and d(x, g2) <= D} is sampled on a grid of
    Fermi coordinates (s along g1, u across it) with spacing
    config.coarseGridStep, s ranging over [-window, window] around the foot
    of i on g1. The grid is anchored at zero, so results are monotone in D
    and in window. The set is convex, so each grid row contributes only its
    two extreme points.

    Returns
    -------
    diameter : float
        0.0 for an empty intersection.
    """
    if not D > 0:
        raise PreconditionError("D must be positive")
    if g1.isclose(g2):
        raise DegeneratePair("coarse intersection of a geodesic with itself")
    step = config.coarseGridStep

    # normalize g1 to the imaginary axis
    if g1.isVertical:
        frame = MobiusMap(1.0, -g1.a.value, 0.0, 1.0)
    else:
        frame = MobiusMap(1.0, -g1.a.value, -1.0, g1.b.value)
    image = apply(frame, g2)
    foot = math.log(abs(apply(frame, HPoint(0.0, 1.0)).z))

    count = int(math.floor(window / step))
    sValues = foot + step * np.arange(-count, count + 1)
    uCount = int(math.floor(D / step))
    uValues = step * np.arange(-uCount, uCount + 1)
    s, u = np.meshgrid(sValues, uValues, indexing="ij")
    x = np.exp(s) * np.tanh(u)
    y = np.exp(s) / np.cosh(u)

    if image.isVertical:
        reach = np.arcsinh(np.abs(x - image.a.value) / y)
    else:
        center, radius = image.center_radius()
        reach = np.arcsinh(np.abs((x - center) ** 2 + y**2 - radius**2) / (2 * radius * y))
    kept = reach <= D

    extremes = []
    for row in range(kept.shape[0]):
        columns = np.flatnonzero(kept[row])
        if len(columns):
            for col in (columns[0], columns[-1]):
                extremes.append((x[row, col], y[row, col]))
    if len(extremes) < 2:
        return 0.0
    return _pairwise_max_distance(np.array(extremes))


def touching_radius(geodesics, start=None):
    """
    center and radius of a small ball meeting every geodesic

    Minimizes max_i d(x, g_i) with Nelder-Mead, started from i and from
    the crossing points of the given geodesics.

    Returns
    -------
    center : HPoint
    radius : float
    """
    if not geodesics:
        raise PreconditionError("need at least one geodesic")

    def objective(params):
        point = HPoint(params[0], math.exp(params[1]))
        return max(distance_to_geodesic(point, g) for g in geodesics)

    starts = [HPoint(0.0, 1.0) if start is None else start]
    for i, first in enumerate(geodesics):
        for second in geodesics[i + 1 :]:
            meet = crossing_point(first, second)
            if meet is not None:
                starts.append(meet)

    best = None
    for point in starts:
        result = optimize.minimize(
            objective,
            [point.x, math.log(point.y)],
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000},
        )
        if best is None or result.fun < best.fun:
            best = result
    if best is None:
        raise ComputationError("minimax search failed")
    return HPoint(best.x[0], math.exp(best.x[1])), float(best.fun)


def crossing_point(g1, g2):
    """the intersection point of two crossing geodesics, None otherwise"""
    if not crossing(g1, g2):
        return None
    if g1.isVertical and g2.isVertical:
        return None
    if g1.isVertical or g2.isVertical:
        vertical, other = (g1, g2) if g1.isVertical else (g2, g1)
        center, radius = other.center_radius()
        x = vertical.a.value
        return HPoint(x, math.sqrt(radius**2 - (x - center) ** 2))
    c1, r1 = g1.center_radius()
    c2, r2 = g2.center_radius()
    x = (r1**2 - r2**2 + c2**2 - c1**2) / (2.0 * (c2 - c1))
    return HPoint(x, math.sqrt(r1**2 - (x - c1) ** 2))
