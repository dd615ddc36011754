# -*- coding: utf-8 -*-
"""
Test reading and validating input documents
"""

import json
import os
import unittest

from wafflecert.groupings import OrientationViolation
from wafflecert.inputspec import (
    SchemaError,
    parse,
    parse_document,
    quotient_graph,
)
from wafflecert.patterns import Window

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def document(**changes):
    base = {
        "surfaces": [{"id": "w1", "genus": 2}],
        "churros": [{"id": "c1"}],
        "edges": [{"id": "e0", "waffle": "w1", "churro": "c1", "coweight": 1, "tau": 2.0}],
    }
    base.update(changes)
    return json.dumps(base, indent=2)


class TestParse(unittest.TestCase):
    def test_minimal(self):
        spec = parse(os.path.join(DATA, "minimal.json"))
        self.assertEqual([s.id for s in spec.surfaces], ["w1"])
        self.assertEqual(spec.surfaces[0].curves, {})
        self.assertEqual(spec.edges[0].tau, 2.0)
        self.assertEqual(spec.window.window, Window(3.0, 4))
        self.assertIsNone(spec.window.margin)
        self.assertFalse(spec.window.saturate)
        self.assertEqual(spec.tolerances, {})

    def test_tree(self):
        spec = parse(os.path.join(DATA, "tree_synthetic.json"))
        graph, derived = quotient_graph(spec)
        self.assertEqual(derived, ["e1"])
        self.assertEqual(graph.edges["e1"].coweight, 2)
        self.assertTrue(graph.edges["e1"].reflective)
        self.assertEqual(spec.churros[1].match.flaps, {"e2": "e0", "e3": "e1"})
        self.assertEqual(spec.tolerances, {"ratio_rel_tol": 1e-8})

    def test_curves(self):
        spec = parse(os.path.join(DATA, "non_filling.json"))
        curve = spec.surfaces[0].curves["e0"]
        self.assertEqual(curve.word, (1,))
        self.assertEqual(curve.label, "a1")
        self.assertEqual(spec.window.window, Window(2.5, 2))

    def test_orientation(self):
        with self.assertRaises(OrientationViolation) as caught:
            parse(os.path.join(DATA, "orientation.json"))
        self.assertEqual(caught.exception.edgeId, "e0")


class TestSchemaErrors(unittest.TestCase):
    def test_all_problems_with_lines(self):
        path = os.path.join(DATA, "schema_error.json")
        with self.assertLogs("wafflecert.inputspec", "ERROR") as logs:
            with self.assertRaises(SchemaError) as caught:
                parse(path)
        problems = caught.exception.problems
        self.assertEqual(len(problems), 2)
        self.assertEqual(problems[0], "line 3: surface 'w1': genus must be an integer in 2..6")
        self.assertEqual(problems[1], "line 15: unknown field 'colour' in edge 'e0'")
        expected = "%s:15: unknown field 'colour' in edge 'e0'" % path
        self.assertTrue(logs.output[1].endswith(expected))

    def test_invalid_json(self):
        with self.assertRaises(SchemaError) as caught:
            parse_document('{"surfaces": [}')
        self.assertIn("not valid JSON", caught.exception.problems[0])
        with self.assertRaises(SchemaError):
            parse_document("[]")

    def test_derive_needs_flap_family(self):
        edges = [{"id": "e0", "waffle": "w1", "churro": "c1", "coweight": "derive", "tau": 2.0}]
        with self.assertRaises(SchemaError) as caught:
            parse_document(document(edges=edges))
        self.assertIn("derive", caught.exception.problems[0])

        churros = [{"id": "c1", "flap_families": {"e0": 3}}]
        spec = parse_document(document(edges=edges, churros=churros))
        graph, derived = quotient_graph(spec)
        self.assertEqual(graph.edges["e0"].coweight, 3)
        self.assertEqual(derived, ["e0"])

    def test_tau_or_curve(self):
        edges = [{"id": "e0", "waffle": "w1", "churro": "c1", "coweight": 1}]
        with self.assertRaises(SchemaError) as caught:
            parse_document(document(edges=edges))
        self.assertIn("no tau given", caught.exception.problems[0])

    def test_field_checks(self):
        cases = [
            {"edges": [{"id": "e0", "waffle": "w1", "churro": "c1", "coweight": 0, "tau": 1.0}]},
            {"edges": [{"id": "e0", "waffle": "w1", "churro": "c1", "coweight": 1, "tau": -1.0}]},
            {"edges": [{"id": "e0", "waffle": "w9", "churro": "c1", "coweight": 1, "tau": 1.0}]},
            {"churros": [{"id": "c1", "core": "Z2"}]},
            {"surfaces": [{"id": "w1", "genus": 2, "curves": [{"edge": "e0", "word": [1, -1]}]}]},
            {"surfaces": [{"id": "w1", "genus": 2, "curves": [{"edge": "e0", "word": [5]}]}]},
            {"window": {"radius": 0.0}},
            {"window": {"radius": 2.0, "sides": 8}},
            {"tolerances": {"foo_tol": 1.0}},
        ]
        for changes in cases:
            with self.assertRaises(SchemaError) as caught:
                parse_document(document(**changes))
            self.assertEqual(len(caught.exception.problems), 1, changes)

    def test_duplicate_ids(self):
        surfaces = [{"id": "w1", "genus": 2}, {"id": "w1", "genus": 3}]
        with self.assertRaises(SchemaError) as caught:
            parse_document(document(surfaces=surfaces))
        self.assertIn("duplicate id 'w1'", caught.exception.problems[0])


if __name__ == "__main__":
    unittest.main()
