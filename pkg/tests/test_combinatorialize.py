# -*- coding: utf-8 -*-
"""
Test cube complex isomorphisms induced by wall matchings

The symmetric window holds four geodesics with disc ends at 90k +- 50
degrees; neighbours cross near the center and a quarter turn permutes them.
"""

import json
import math
import os
import tempfile
import unittest

from wafflecert.chambers import arrangement, euclidean_arrangement
from wafflecert.combinatorialize import (
    CubeIsomorphism,
    InvalidMatching,
    NotConsistent,
    OrderViolation,
    QuasiMatching,
    combinatorialize,
    compose_isomorphisms,
    compose_matchings,
    identity_matching,
    isomorphism_to_json,
    matching_from_json,
    matching_from_mobius,
    matching_to_json,
    read_matching,
    transport_orientation,
    verify_isomorphism,
)
from wafflecert.cubulation import cubulate, find_isomorphisms, wall_system
from wafflecert.hyperbolic import BoundaryPoint, Geodesic, MobiusMap
from wafflecert.patterns import LinePattern, PatternLine, PlanarLine, Window


def symmetric_window():
    lines = []
    for k in range(4):
        center = k * math.pi / 2.0
        geodesic = Geodesic(
            BoundaryPoint.from_disc_angle(center - math.radians(50)),
            BoundaryPoint.from_disc_angle(center + math.radians(50)),
        )
        lines.append(PatternLine(geodesic, "g", (k,)))
    window = Window(3.0, 0)
    complex_ = arrangement(LinePattern(tuple(lines)), window)
    return complex_, cubulate(wall_system(complex_))


def parallel_model():
    lines = [
        PlanarLine((1.0, 0.0), -0.3, "p"),
        PlanarLine((1.0, 0.0), 0.3, "q"),
        PlanarLine((0.0, 1.0), 0.0, "r"),
    ]
    return cubulate(wall_system(euclidean_arrangement(lines, 1.0)))


class TestMatchings(unittest.TestCase):
    def test_identity(self):
        model = parallel_model()
        iso = combinatorialize(identity_matching(3), model, model)
        self.assertEqual(iso.vertexMap, {v: v for v in range(len(model.vertices))})
        self.assertEqual(verify_isomorphism(iso, model, model), (True, None))

    def test_transport_orientation(self):
        matching = QuasiMatching({0: 1, 1: 0}, {0: 1, 1: 0})
        # wall 0 at side 1 lands on side 0 of wall 1
        self.assertEqual(transport_orientation(matching, 0b01), 0b00)
        self.assertEqual(transport_orientation(matching, 0b10), 0b11)

    def test_composition(self):
        first = QuasiMatching({0: 1, 1: 2, 2: 0}, {0: 1, 1: 0, 2: 0})
        second = QuasiMatching({0: 2, 1: 0, 2: 1}, {0: 1, 1: 1, 2: 0})
        both = compose_matchings(first, second)
        self.assertEqual(both.wallBijection, {0: 0, 1: 1, 2: 2})
        self.assertEqual(both.arcTransport, {0: 0, 1: 0, 2: 1})

    def test_invalid(self):
        model = parallel_model()
        cases = [
            QuasiMatching({0: 0, 1: 1}, {0: 0, 1: 0}),
            QuasiMatching({0: 0, 1: 0, 2: 2}, {0: 0, 1: 0, 2: 0}),
            QuasiMatching({0: 0, 1: 1, 2: 3}, {0: 0, 1: 0, 2: 0}),
            QuasiMatching({0: 0, 1: 1, 2: 2}, {0: 0, 1: 2, 2: 0}),
            QuasiMatching({0: 0, 1: 1, 2: 2}, {0: 0, 1: 0}),
        ]
        for matching in cases:
            with self.assertRaises(InvalidMatching) as caught:
                combinatorialize(matching, model, model)
            self.assertEqual(len(caught.exception.problems), 1)

    def test_order_violation(self):
        model = parallel_model()
        swap = QuasiMatching({0: 0, 1: 2, 2: 1}, {0: 0, 1: 0, 2: 0})
        with self.assertRaises(OrderViolation):
            combinatorialize(swap, model, model)
        # without the order check the swap sends 001 to the missing 010
        with self.assertRaises(NotConsistent) as caught:
            combinatorialize(swap, model, model, checkOrder=False)
        self.assertEqual(caught.exception.witness, ("vertex", 1))


class TestMobiusMatchings(unittest.TestCase):
    def setUp(self):
        self.complex_, self.model = symmetric_window()

    def test_window(self):
        self.assertEqual(len(self.complex_.crossingPairs), 4)
        self.assertEqual(len(self.complex_.chambers), 9)
        self.assertEqual(self.model.marginCubes, 0)

    def test_quarter_turn(self):
        matching = matching_from_mobius(
            self.complex_, self.complex_, MobiusMap.rotation(math.pi / 2.0)
        )
        self.assertEqual(matching.wallBijection, {0: 1, 1: 2, 2: 3, 3: 0})
        self.assertEqual(matching.arcTransport, {0: 1, 1: 0, 2: 0, 3: 1})
        iso = combinatorialize(matching, self.model, self.model)
        self.assertEqual(verify_isomorphism(iso, self.model, self.model), (True, None))
        found = find_isomorphisms(
            self.model,
            self.model,
            wallMap=matching.wallBijection,
            flips=matching.arcTransport,
        )
        self.assertEqual(found, [iso.vertexMap])

    def test_functoriality(self):
        quarter = matching_from_mobius(
            self.complex_, self.complex_, MobiusMap.rotation(math.pi / 2.0)
        )
        half = matching_from_mobius(self.complex_, self.complex_, MobiusMap.rotation(math.pi))
        self.assertEqual(compose_matchings(quarter, quarter), half)

        once = combinatorialize(quarter, self.model, self.model)
        twice = compose_isomorphisms(once, once)
        self.assertEqual(twice, combinatorialize(half, self.model, self.model))

        full = compose_isomorphisms(twice, twice)
        identity = combinatorialize(identity_matching(4), self.model, self.model)
        self.assertEqual(full, identity)

    def test_no_image(self):
        with self.assertRaises(InvalidMatching):
            matching_from_mobius(self.complex_, self.complex_, MobiusMap.rotation(math.pi / 4.0))

    def test_broken_vertex_map(self):
        identity = {v: v for v in range(len(self.model.vertices))}
        iso = CubeIsomorphism(identity, {0: 1, 1: 0, 2: 2, 3: 3})
        ok, witness = verify_isomorphism(iso, self.model, self.model)
        self.assertFalse(ok)
        self.assertEqual(witness[0], "edge")

        partial = CubeIsomorphism({0: 0}, {k: k for k in range(4)})
        self.assertEqual(verify_isomorphism(partial, self.model, self.model), (False, ("total", 1)))


class TestMatchingFiles(unittest.TestCase):
    def test_json(self):
        matching = matching_from_json([[0, 1, 1], [1, 0, 0]])
        self.assertEqual(matching, QuasiMatching({0: 1, 1: 0}, {0: 1, 1: 0}))
        self.assertEqual(matching_to_json(matching), [[0, 1, 1], [1, 0, 0]])

    def test_bad_json(self):
        for entries in ({"0": 1}, [[0, 1]], [[0, 1, True]], [[0, 1, 0], [0, 2, 0]]):
            with self.assertRaises(InvalidMatching):
                matching_from_json(entries)

    def test_read(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "matching.json")
            with open(path, "w", encoding="utf-8") as matchingFile:
                json.dump([[0, 0, 0], [1, 2, 1], [2, 1, 1]], matchingFile)
            matching = read_matching(path)
        self.assertEqual(matching.wallBijection, {0: 0, 1: 2, 2: 1})

    def test_isomorphism_json(self):
        iso = CubeIsomorphism({1: 0, 0: 1}, {0: 0})
        self.assertEqual(
            isomorphism_to_json(iso), {"vertex_map": [[0, 1], [1, 0]], "wall_map": [[0, 0]]}
        )


if __name__ == "__main__":
    unittest.main()
