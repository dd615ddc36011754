# -*- coding: utf-8 -*-
"""
Test strand shortening on developed carriers
"""

from fractions import Fraction
import math
import unittest

from wafflecert.chambers import euclidean_arrangement
from wafflecert.config import DEFAULTS
from wafflecert.cubulation import automorphisms, cubulate, to_bits, wall_system
from wafflecert.errors import PreconditionError
from wafflecert.patterns import PlanarLine, hexagonal_pattern
from wafflecert.strands import (
    IDENTITY,
    RIGHT,
    UP,
    NoConvergence,
    NotStabilizing,
    NotTranslating,
    PeriodMap,
    StrandCarrier,
    UnsupportedPeriod,
    carrier_from_crossings,
    carrier_symmetries,
    classify_strand,
    development_symmetry,
    hyperplane_path,
    hyperplane_strand,
    pattern_carrier,
    strand,
    strand_density,
    strand_invariant,
    strand_to_json,
    strip_carrier,
    unfolded_length,
)

STAIR = StrandCarrier((RIGHT, UP, RIGHT), "stair")


class TestCarriers(unittest.TestCase):
    def test_strip(self):
        carrier = strip_carrier(3)
        self.assertEqual(tuple(carrier.period), (3, 0))
        self.assertEqual(carrier.squares(), [(0, 0), (1, 0), (2, 0)])
        self.assertEqual(len(carrier.gates()), 3)
        with self.assertRaises(NotTranslating):
            strip_carrier(0)

    def test_bad_moves(self):
        with self.assertRaises(UnsupportedPeriod):
            StrandCarrier("RL")

    def test_stair(self):
        self.assertEqual(tuple(STAIR.period), (2, 1))
        self.assertEqual(STAIR.squares(range(2)), [(0, 0), (1, 0), (1, 1), (2, 1), (3, 1), (3, 2)])

    def test_from_crossings(self):
        crossing = {(0, 1)}

        def crosses(i, j):
            return (min(i, j), max(i, j)) in crossing

        self.assertEqual(carrier_from_crossings([0, 1], crosses).moves, (RIGHT, UP))
        self.assertEqual(carrier_from_crossings([2, 3], crosses).moves, (RIGHT, RIGHT))
        with self.assertRaises(UnsupportedPeriod):
            carrier_from_crossings([], crosses)
        # a single turn per period does not close up
        with self.assertRaises(UnsupportedPeriod):
            carrier_from_crossings([0, 1, 2], crosses)

        crossing.update({(0, 2), (1, 2)})
        with self.assertRaises(UnsupportedPeriod):
            carrier_from_crossings([0, 1, 2], crosses)


class TestStrand(unittest.TestCase):
    def test_strip(self):
        model = strand(strip_carrier(3))
        self.assertEqual(model.tau, 3.0)
        self.assertEqual(model.l1Length, 3.0)
        self.assertEqual(model.iterations, 1)
        self.assertEqual(model.period, PeriodMap.translation((3, 0)))

    def test_stair(self):
        model = strand(STAIR)
        self.assertAlmostEqual(model.tau, math.sqrt(5.0), places=7)
        self.assertAlmostEqual(model.tau, unfolded_length(STAIR), places=7)
        self.assertAlmostEqual(model.l1Length, 3.0, places=7)
        for a, b in zip(model.lengths, model.lengths[1:]):
            self.assertLessEqual(b, a + 1e-12)
        self.assertTrue(all(0.0 <= s <= 1.0 for s in model.parameters))

    def test_diagonal(self):
        carrier = StrandCarrier((RIGHT, UP))
        self.assertAlmostEqual(strand(carrier).tau, math.sqrt(2.0), places=7)
        self.assertAlmostEqual(unfolded_length(carrier), math.sqrt(2.0))

    def test_unfolded_misses_a_gate(self):
        # the straight path of slope 1 cannot reach the gates past the corner
        carrier = StrandCarrier((RIGHT, RIGHT, RIGHT, UP, UP, UP))
        self.assertIsNone(unfolded_length(carrier))
        self.assertGreater(strand(carrier).tau, math.sqrt(18.0) + 0.1)

    def test_no_convergence(self):
        config = DEFAULTS._replace(strandIterations=1)
        with self.assertRaises(NoConvergence) as caught:
            strand(STAIR, config=config)
        self.assertEqual(caught.exception.iterations, 1)
        self.assertGreater(caught.exception.change, 0.0)

    def test_multiple_period(self):
        single = strand(STAIR)
        double = strand(STAIR, PeriodMap.translation((4, 2)))
        self.assertAlmostEqual(double.tau, 2.0 * single.tau, places=7)
        self.assertEqual(len(double.carrier.moves), 6)

    def test_period_maps(self):
        with self.assertRaises(NotTranslating):
            strand(STAIR, IDENTITY)
        with self.assertRaises(NotTranslating):
            strand(STAIR, PeriodMap(((-1, 0), (0, -1)), (0, 0)))
        with self.assertRaises(UnsupportedPeriod):
            strand(STAIR, PeriodMap.translation((1, 0)))
        with self.assertRaises(UnsupportedPeriod):
            strand(STAIR, PeriodMap(((1, 0), (0, -1)), (2, 0)))

    def test_json(self):
        data = strand_to_json(strand(STAIR))
        self.assertEqual(data["moves"], "RUR")
        self.assertEqual(data["label"], "stair")
        self.assertEqual(len(data["polyline"]), 4)


class TestPatternCarrier(unittest.TestCase):
    def setUp(self):
        lines, radius = hexagonal_pattern(7)
        self.complex_ = euclidean_arrangement(lines, radius)

    def test_hexagonal(self):
        carrier = pattern_carrier(self.complex_, 3, 2.0 / math.sqrt(3.0))
        self.assertEqual(carrier.moves, (RIGHT, UP))
        self.assertEqual(carrier.label, "h0:3")
        self.assertAlmostEqual(strand(carrier).tau, math.sqrt(2.0), places=7)

    def test_errors(self):
        with self.assertRaises(NotTranslating):
            pattern_carrier(self.complex_, 3, 0.0)
        with self.assertRaises(UnsupportedPeriod):
            pattern_carrier(self.complex_, 3, 2.0 / math.sqrt(3.0), margin=20)
        # crossings one unit apart do not repeat
        with self.assertRaises(UnsupportedPeriod):
            pattern_carrier(self.complex_, 3, 1.0)


class TestClassification(unittest.TestCase):
    def setUp(self):
        self.model = strand(strip_carrier(3))
        self.mirror = PeriodMap(((1, 0), (0, -1)), (0, 1))
        self.flip = PeriodMap(((-1, 0), (0, 1)), (4, 0))

    def test_types(self):
        self.assertEqual(classify_strand([PeriodMap.translation((3, 0))], self.model), "Z")
        self.assertEqual(classify_strand([self.mirror], self.model), "reflective-Z")
        self.assertEqual(classify_strand([self.flip], self.model), "dihedral")
        self.assertEqual(
            classify_strand([self.mirror, self.flip], self.model), "reflective-dihedral"
        )

    def test_not_stabilizing(self):
        shift = PeriodMap.translation((0, 1))
        with self.assertRaises(NotStabilizing) as caught:
            classify_strand([shift], self.model)
        self.assertEqual(caught.exception.generator, shift)

    def test_density(self):
        self.assertEqual(strand_density("reflective-Z"), Fraction(1, 2))
        self.assertEqual(strand_density("reflective-dihedral"), Fraction(1, 2))
        self.assertEqual(strand_density("dihedral"), 1)
        with self.assertRaises(PreconditionError):
            strand_density("helical")

    def test_symmetries(self):
        carrier = strip_carrier(3)
        self.assertEqual(len(carrier_symmetries(carrier)), 6)
        every = carrier_symmetries(carrier, commuting=False)
        self.assertEqual(len(every), 12)
        for symmetry in every:
            self.assertTrue(strand_invariant(self.model, symmetry))


class TestModelStrands(unittest.TestCase):
    """a horizontal wall crossed by three verticals, a ladder of three squares"""

    def setUp(self):
        lines = [PlanarLine((0.0, 1.0), 0.0, "h")]
        lines += [PlanarLine((1.0, 0.0), x, "v%d" % k) for k, x in enumerate((-1.0, 0.0, 1.0))]
        self.model = cubulate(wall_system(euclidean_arrangement(lines, 2.5)))
        self.wall = list(self.model.walls).index("h")
        self.verticals = [list(self.model.walls).index("v%d" % k) for k in range(3)]
        self.byPlace = {}
        for vid, mask in enumerate(self.model.vertices):
            bits = to_bits(mask, len(self.model.walls))
            column = sum(bits[k] for k in self.verticals)
            self.byPlace[column, bits[self.wall]] = vid

    def shifted(self, step):
        return {
            self.byPlace[column, side]: self.byPlace[column + step, side]
            for column, side in self.byPlace
            if (column + step, side) in self.byPlace
        }

    def test_path(self):
        self.assertEqual(len(self.byPlace), 8)
        path = hyperplane_path(self.model, self.wall)
        self.assertEqual(len(path.rungs), 4)
        self.assertIn(path.walls, (tuple(self.verticals), tuple(reversed(self.verticals))))
        self.assertEqual(len(hyperplane_path(self.model, self.verticals[0]).rungs), 2)

    def test_branching_hyperplane(self):
        lines = []
        for k, degrees in enumerate((90, 210, 330)):
            angle = math.radians(degrees)
            lines.append(PlanarLine((math.cos(angle), math.sin(angle)), 0.2, "t%d" % k))
        cube = cubulate(wall_system(euclidean_arrangement(lines, 1.0)))
        with self.assertRaises(UnsupportedPeriod):
            hyperplane_path(cube, 0)

    def test_translation(self):
        for step in (1, -1):
            model = hyperplane_strand(self.model, self.wall, self.shifted(step))
            self.assertEqual(model.carrier.moves, (RIGHT,))
            self.assertEqual(model.carrier.label, "h")
            self.assertAlmostEqual(model.tau, 1.0)
        self.assertAlmostEqual(hyperplane_strand(self.model, self.wall, self.shifted(2)).tau, 2.0)

    def test_not_translating(self):
        identity = {vid: vid for vid in range(len(self.model.vertices))}
        reversal = {self.byPlace[c, s]: self.byPlace[3 - c, s] for c, s in self.byPlace}
        for periodMap in (identity, reversal, {}):
            with self.assertRaises(NotTranslating):
                hyperplane_strand(self.model, self.wall, periodMap)

    def test_broken_edge(self):
        torn = {self.byPlace[0, 0]: self.byPlace[1, 0], self.byPlace[0, 1]: self.byPlace[3, 1]}
        with self.assertRaises(UnsupportedPeriod):
            hyperplane_strand(self.model, self.wall, torn)

    def test_brute_force_automorphisms(self):
        carrier = strip_carrier(4, "h")
        model = strand(carrier)
        found = automorphisms(self.model)
        self.assertEqual(len(found), 4)
        maps = [development_symmetry(self.model, self.wall, each, carrier) for each in found]
        mirror = PeriodMap(((1, 0), (0, -1)), (0, 1))
        self.assertEqual(
            set(maps),
            {
                IDENTITY,
                mirror,
                PeriodMap(((-1, 0), (0, 1)), (4, 0)),
                PeriodMap(((-1, 0), (0, -1)), (4, 1)),
            },
        )
        for symmetry in maps:
            self.assertTrue(strand_invariant(model, symmetry))
        self.assertEqual(
            classify_strand([PeriodMap.translation((4, 0)), mirror], model), "reflective-Z"
        )
        self.assertEqual(classify_strand(maps, model), "reflective-dihedral")

    def test_automorphism_moving_the_wall(self):
        carrier = strip_carrier(2)
        reversal = next(
            each for each in automorphisms(self.model)
            if each[self.byPlace[0, 0]] == self.byPlace[3, 0]
        )
        with self.assertRaises(NotStabilizing) as caught:
            development_symmetry(self.model, self.verticals[0], reversal, carrier)
        self.assertEqual(caught.exception.generator, reversal)


if __name__ == "__main__":
    unittest.main()
