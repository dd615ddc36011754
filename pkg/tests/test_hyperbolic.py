# -*- coding: utf-8 -*-
"""
Test the hyperbolic plane kernel
"""

import math
import unittest

import numpy as np

from wafflecert.config import DEFAULTS
from wafflecert.errors import PreconditionError
from wafflecert.hyperbolic import (
    INFINITY,
    BoundaryPoint,
    DegeneratePair,
    Geodesic,
    HPoint,
    InadmissibleParameters,
    MobiusMap,
    NonPositiveLength,
    NotHyperbolic,
    NotInUpperHalfPlane,
    PointOnGeodesic,
    SharedEndpoint,
    apply,
    arc_contains,
    arcs_intersect,
    axis_and_translation_length,
    coarse_intersection_diameter,
    crossing,
    crossing_point,
    distance,
    distance_to_geodesic,
    epsilon_prime,
    fixed_points,
    geodesic_arc,
    gromov_product,
    horostrip,
    horostrip_leaf_length,
    horostrip_width,
    o_shadow,
    path_length,
    quadrilateral_relation,
    touching_radius,
    visual_boundary_sample,
    visual_chain_metric,
    visual_params,
    visual_q,
)

I = HPoint(0.0, 1.0)


class TestPoints(unittest.TestCase):
    def test_upper_half_plane(self):
        with self.assertRaises(NotInUpperHalfPlane):
            HPoint(0.0, 0.0)
        with self.assertRaises(NotInUpperHalfPlane):
            HPoint(math.inf, 1.0)

    def test_disc_angles_follow_the_line(self):
        points = [BoundaryPoint(-1.0), BoundaryPoint(0.0), BoundaryPoint(1.0)]
        angles = [point.disc_angle() for point in points]
        self.assertEqual(angles, sorted(angles))
        self.assertAlmostEqual(angles[1], math.pi)
        self.assertEqual(INFINITY.disc_angle(), 0.0)

    def test_from_disc_angle(self):
        self.assertEqual(BoundaryPoint.from_disc_angle(0.0), INFINITY)
        point = BoundaryPoint.from_disc_angle(math.pi / 2.0)
        self.assertAlmostEqual(point.value, -1.0)
        self.assertTrue(point.isclose(BoundaryPoint(-1.0)))

    def test_infinity_is_tagged(self):
        with self.assertRaises(ValueError):
            BoundaryPoint(math.inf)
        self.assertTrue(INFINITY.isInfinite)

    def test_geodesic_order(self):
        g = Geodesic(INFINITY, 3.0)
        self.assertTrue(g.isVertical)
        self.assertEqual(g.a, BoundaryPoint(3.0))
        self.assertEqual(Geodesic(2.0, -1.0), Geodesic(-1.0, 2.0))
        with self.assertRaises(DegeneratePair):
            Geodesic(1.0, 1.0)


class TestMobius(unittest.TestCase):
    def test_normalized(self):
        m = MobiusMap(2.0, 0.0, 0.0, 2.0)
        self.assertAlmostEqual(m.determinant, 1.0)
        self.assertTrue(m.isclose(MobiusMap.identity()))
        self.assertTrue(MobiusMap(-1.0, 0.0, 0.0, -1.0).isclose(MobiusMap.identity()))

    def test_orientation_reversing_rejected(self):
        with self.assertRaises(PreconditionError):
            MobiusMap(0.0, 1.0, 1.0, 0.0)

    def test_immutable(self):
        m = MobiusMap.identity()
        with self.assertRaises(AttributeError):
            m.a = 2.0

    def test_apply_dispatch(self):
        m = MobiusMap(1.0, 1.0, 0.0, 1.0)
        self.assertEqual(apply(m, I), HPoint(1.0, 1.0))
        self.assertEqual(apply(m, INFINITY), INFINITY)
        self.assertEqual(apply(m, Geodesic(0.0, INFINITY)), Geodesic(1.0, INFINITY))
        with self.assertRaises(TypeError):
            apply(m, 1.0)

    def test_rotation_turns_disc_angles(self):
        theta = 0.7
        rotation = MobiusMap.rotation(theta)
        for value in (-2.0, 0.0, 0.5):
            point = BoundaryPoint(value)
            turned = apply(rotation, point).disc_angle()
            self.assertAlmostEqual(turned, (point.disc_angle() + theta) % (2 * math.pi))
        image = apply(rotation, I)
        self.assertAlmostEqual(image.x, 0.0)
        self.assertAlmostEqual(image.y, 1.0)

    def test_composition_and_inverse(self):
        m = MobiusMap(2.0, 1.0, 1.0, 1.0)
        self.assertTrue((m @ m.inverse()).isclose(MobiusMap.identity()))

    def test_distance(self):
        self.assertAlmostEqual(distance(I, HPoint(0.0, 2.0)), math.log(2.0))
        p, q = HPoint(0.3, 0.2), HPoint(-1.0, 4.0)
        m = MobiusMap(2.0, 1.0, 1.0, 3.0)
        self.assertAlmostEqual(distance(apply(m, p), apply(m, q)), distance(p, q))

    def test_fixed_points(self):
        dilation = MobiusMap(2.0, 0.0, 0.0, 0.5)
        repelling, attracting = fixed_points(dilation)
        self.assertEqual(repelling, BoundaryPoint(0.0))
        self.assertEqual(attracting, INFINITY)
        axis, length = axis_and_translation_length(dilation)
        self.assertEqual(axis, Geodesic(0.0, INFINITY))
        self.assertAlmostEqual(length, math.log(4.0))

    def test_fixed_points_of_a_general_map(self):
        m = MobiusMap(3.0, 1.0, 2.0, 1.0)
        for point in fixed_points(m):
            self.assertAlmostEqual(apply(m, point).value, point.value)

    def test_not_hyperbolic(self):
        with self.assertRaises(NotHyperbolic):
            axis_and_translation_length(MobiusMap.rotation(1.0))
        with self.assertRaises(NotHyperbolic):
            fixed_points(MobiusMap(1.0, 1.0, 0.0, 1.0))

    def test_axis_under_conjugation(self):
        m = MobiusMap(2.0, 1.0, 1.0, 1.0)
        axis, length = axis_and_translation_length(m)
        for h in (MobiusMap(1.0, 0.5, 0.3, 1.2), MobiusMap(0.4, -2.0, 1.0, 3.0)):
            conjugate = h @ m @ h.inverse()
            movedAxis, movedLength = axis_and_translation_length(conjugate)
            self.assertTrue(movedAxis.isclose(apply(h, axis), 1e-8))
            self.assertAlmostEqual(movedLength, length)


class TestGeodesics(unittest.TestCase):
    def test_crossing(self):
        self.assertTrue(crossing(Geodesic(-1.0, 1.0), Geodesic(0.0, INFINITY)))
        self.assertFalse(crossing(Geodesic(-1.0, 1.0), Geodesic(2.0, 3.0)))
        self.assertFalse(crossing(Geodesic(-1.0, 1.0), Geodesic(-2.0, 2.0)))
        with self.assertRaises(SharedEndpoint):
            crossing(Geodesic(0.0, 1.0), Geodesic(1.0, 2.0))

    def test_crossing_point(self):
        meet = crossing_point(Geodesic(-1.0, 1.0), Geodesic(0.0, INFINITY))
        self.assertAlmostEqual(meet.x, 0.0)
        self.assertAlmostEqual(meet.y, 1.0)
        self.assertIsNone(crossing_point(Geodesic(-1.0, 1.0), Geodesic(2.0, 3.0)))

    def test_distance_to_geodesic(self):
        self.assertAlmostEqual(distance_to_geodesic(I, Geodesic(0.0, INFINITY)), 0.0)
        self.assertAlmostEqual(
            distance_to_geodesic(HPoint(1.0, 1.0), Geodesic(0.0, INFINITY)), math.asinh(1.0)
        )
        self.assertAlmostEqual(distance_to_geodesic(I, Geodesic(-1.0, 1.0)), 0.0)

    def test_shadow(self):
        near = o_shadow(Geodesic(1.0, 3.0), I)
        self.assertTrue(arc_contains(near, BoundaryPoint(2.0)))
        self.assertFalse(arc_contains(near, BoundaryPoint(0.0)))
        around = o_shadow(Geodesic(-2.0, 2.0), I)
        self.assertTrue(arc_contains(around, INFINITY))
        self.assertFalse(arc_contains(around, BoundaryPoint(0.0)))
        with self.assertRaises(PointOnGeodesic):
            o_shadow(Geodesic(-1.0, 1.0), I)

    def test_coarse_intersection(self):
        first, second = Geodesic(-1.0, 1.0), Geodesic(0.0, INFINITY)
        small = coarse_intersection_diameter(first, second, 0.5, 3.0)
        large = coarse_intersection_diameter(first, second, 1.0, 3.0)
        self.assertGreater(small, 0.0)
        self.assertLessEqual(small, large)
        far = coarse_intersection_diameter(first, Geodesic(100.0, 200.0), 0.05, 3.0)
        self.assertEqual(far, 0.0)
        with self.assertRaises(DegeneratePair):
            coarse_intersection_diameter(first, first, 1.0, 3.0)
        with self.assertRaises(PreconditionError):
            coarse_intersection_diameter(first, second, 0.0, 3.0)

    def test_touching_radius(self):
        center, radius = touching_radius([Geodesic(-1.0, 1.0), Geodesic(0.0, INFINITY)])
        self.assertLess(radius, 1e-6)
        self.assertLess(distance(center, I), 1e-4)
        with self.assertRaises(PreconditionError):
            touching_radius([])

    def test_interleaved_ends_cross(self):
        self.assertTrue(crossing(Geodesic(-1.0, 1.0), Geodesic(-2.0, 0.0)))
        self.assertTrue(crossing(Geodesic(-2.0, 0.0), Geodesic(-1.0, 1.0)))

    def test_shadows_of_crossing_geodesics_meet(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 200:
            a, b, c, d = sorted(float(t) for t in rng.uniform(-10.0, 10.0, size=4))
            first, second = Geodesic(a, c), Geodesic(b, d)
            o = HPoint(float(rng.uniform(-10.0, 10.0)), float(rng.uniform(0.05, 10.0)))
            try:
                shadows = o_shadow(first, o), o_shadow(second, o)
            except PointOnGeodesic:
                continue
            self.assertTrue(crossing(first, second))
            self.assertTrue(arcs_intersect(*shadows), (first, second, o))
            checked += 1

    def test_shadow_tolerance_from_config(self):
        g, o = Geodesic(-1.0, 1.0), HPoint(0.0, 1.05)
        self.assertTrue(arc_contains(o_shadow(g, o), BoundaryPoint(0.0)))
        with self.assertRaises(PointOnGeodesic):
            o_shadow(g, o, DEFAULTS._replace(geodesicTol=0.1))

    def test_coarse_grid_from_config(self):
        first, second = Geodesic(-1.0, 1.0), Geodesic(0.0, INFINITY)
        fine = coarse_intersection_diameter(first, second, 1.0, 3.0)
        coarse = coarse_intersection_diameter(
            first, second, 1.0, 3.0, DEFAULTS._replace(coarseGridStep=0.5)
        )
        # the coarse grid is a subset of the fine one
        self.assertLessEqual(coarse, fine + 1e-9)
        self.assertNotAlmostEqual(coarse, fine, places=6)

    def test_touching_random_crossing_sets(self):
        rng = np.random.default_rng(5)
        for k in range(2, 7):
            for _ in range(5):
                ends = np.sort(rng.uniform(-10.0, 10.0, size=2 * k))
                if np.min(np.diff(ends)) < 0.05:
                    continue
                geodesics = [Geodesic(float(ends[i]), float(ends[i + k])) for i in range(k)]
                for i, first in enumerate(geodesics):
                    for second in geodesics[i + 1 :]:
                        self.assertTrue(crossing(first, second))
                center, radius = touching_radius(geodesics)
                for g in geodesics:
                    self.assertLessEqual(distance_to_geodesic(center, g), radius + 1e-9)
                meet = crossing_point(geodesics[0], geodesics[1])
                self.assertLessEqual(
                    radius, max(distance_to_geodesic(meet, g) for g in geodesics) + 1e-9
                )


class TestHorostrips(unittest.TestCase):
    """
    the leaf length of a horostrip against the quadrilateral relation
    """

    def test_width(self):
        strip = horostrip(1.0, math.e)
        self.assertAlmostEqual(horostrip_width(strip), 1.0)
        self.assertAlmostEqual(horostrip_leaf_length(strip), 1.0)
        with self.assertRaises(NonPositiveLength):
            horostrip(2.0, 1.0)
        with self.assertRaises(NonPositiveLength):
            quadrilateral_relation(0.0, 1.0)

    def test_random_strips(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            yLow = float(rng.uniform(0.1, 5.0))
            yHigh = yLow * math.exp(float(rng.uniform(0.01, 3.0)))
            w = float(rng.uniform(0.1, 3.0))
            x = float(rng.uniform(-5.0, 5.0))
            leaf = horostrip_leaf_length(horostrip(yLow, yHigh))
            self.assertLessEqual(abs(quadrilateral_relation(w / yLow, w / yHigh) - leaf), 1e-9)
            measured = path_length(
                lambda t: (x, yLow + t * (yHigh - yLow)),
                derivative=lambda t: (0.0, yHigh - yLow),
            )
            self.assertLessEqual(abs(measured - leaf), 1e-5)

    def test_path_length_without_derivative(self):
        measured = path_length(lambda t: (0.0, math.exp(t)), 0.0, 2.0)
        self.assertAlmostEqual(measured, 2.0, places=5)

    def test_sampled_path(self):
        p, q = HPoint(-1.0, 0.5), HPoint(2.0, 3.0)
        samples = geodesic_arc(p, q, 400)
        self.assertAlmostEqual(samples[0][0], p.x)
        self.assertAlmostEqual(samples[-1][1], q.y)
        self.assertAlmostEqual(path_length(samples), distance(p, q), places=3)
        with self.assertRaises(NotInUpperHalfPlane):
            path_length(np.array([[0.0, 1.0], [0.0, -1.0]]))

    def test_distance_by_quadrature(self):
        # the geodesic through i and 1 + i is the half circle about 1/2
        radius = math.sqrt(1.25)
        start, end = math.acos(-0.5 / radius), math.acos(0.5 / radius)

        def along(t):
            theta = start + t * (end - start)
            return 0.5 + radius * math.cos(theta), radius * math.sin(theta)

        def velocity(t):
            theta = start + t * (end - start)
            return (
                -radius * math.sin(theta) * (end - start),
                radius * math.cos(theta) * (end - start),
            )

        expected = distance(I, HPoint(1.0, 1.0))
        self.assertAlmostEqual(expected, math.acosh(1.5))
        self.assertAlmostEqual(path_length(along, derivative=velocity), expected, places=8)
        self.assertAlmostEqual(path_length(along), expected, places=5)


class TestVisualMetric(unittest.TestCase):
    def test_admissible(self):
        params = visual_params()
        self.assertLess(epsilon_prime(params), math.sqrt(2.0) - 1.0)
        with self.assertRaises(InadmissibleParameters):
            visual_params(1.0, 1.0)
        with self.assertRaises(InadmissibleParameters):
            visual_params(-0.1)

    def test_gromov_product(self):
        self.assertAlmostEqual(gromov_product(I, BoundaryPoint(0.0), INFINITY), 0.0)
        self.assertAlmostEqual(
            gromov_product(I, BoundaryPoint(-4.0), BoundaryPoint(4.0)), math.log(4.0)
        )
        params = visual_params()
        self.assertAlmostEqual(
            visual_q(params, BoundaryPoint(-4.0), BoundaryPoint(4.0)), 4.0 ** (-0.1)
        )
        self.assertAlmostEqual(visual_q(params, BoundaryPoint(-1.0), BoundaryPoint(1.0)), 1.0)

    def test_chain_sandwich(self):
        params = visual_params()
        points = visual_boundary_sample(params, 142)
        q, chain = visual_chain_metric(params, points)
        self.assertAlmostEqual(q[0, 5], visual_q(params, points[0], points[5]))
        self.assertAlmostEqual(q[3, 100], visual_q(params, points[3], points[100]))
        lower = (1.0 - 2.0 * epsilon_prime(params)) * q
        upper = np.triu_indices(len(points), k=1)
        self.assertGreaterEqual(len(upper[0]), 10**4)
        self.assertTrue(np.all(chain[upper] <= q[upper] + 1e-12))
        self.assertTrue(np.all(chain[upper] >= lower[upper] - 1e-12))

    def test_sample_seen_from_elsewhere(self):
        params = visual_params(o=HPoint(1.0, 2.0))
        points = visual_boundary_sample(params, 8)
        self.assertEqual(len(set(points)), 8)

    def test_parameters_from_config(self):
        params = visual_params(config=DEFAULTS._replace(visualEpsilon=0.2, visualDelta=1.0))
        self.assertEqual((params.epsilon, params.delta), (0.2, 1.0))
        wide = visual_params(0.05, config=DEFAULTS._replace(visualDelta=2.0))
        self.assertEqual(wide.delta, 2.0)
        with self.assertRaises(InadmissibleParameters):
            visual_params(config=DEFAULTS._replace(visualEpsilon=1.0, visualDelta=1.0))


if __name__ == "__main__":
    unittest.main()
