# -*- coding: utf-8 -*-
"""
Test whole runs on the input documents in tests/data

The documents supply their translation lengths, so the runs skip the
window stages and stay fast; the window stages have their own tests.
"""

import json
import os
import unittest

from wafflecert.config import DEFAULTS
from wafflecert.errors import PreconditionError
from wafflecert.inputspec import parse, parse_document
from wafflecert.pipeline import (
    EXIT_OBSTRUCTION,
    EXIT_OK,
    EXIT_PRECONDITION,
    STAGES,
    assembly_conditions,
    oracle_automorphisms,
    oracle_clique,
    oracle_quadrature,
    oracle_visual_metric,
    report_to_json,
    run_pipeline,
)

DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def load(name):
    return parse(os.path.join(DATA, name))


class TestRuns(unittest.TestCase):
    def test_tree_certificate(self):
        report = run_pipeline(load("tree_synthetic.json"))
        self.assertEqual(report.outcome, "certificate")
        self.assertEqual(report.exitCode, EXIT_OK)
        self.assertEqual(list(report.results), list(STAGES))
        self.assertEqual(report.results["check-filling"]["w1"], {"skipped": "no curves"})
        self.assertEqual(report.results["strands"]["e0"], {"tau": 2.0, "mode": "supplied"})
        self.assertEqual(report.results["clutching"]["c1"]["tau_core"], 2.5)
        self.assertTrue(report.results["balance"]["balanced"])
        self.assertEqual(report.results["balance"]["derived_coweights"], ["e1"])
        self.assertEqual(report.results["group"]["kind"], "certificate")
        certify = report.results["certify"]
        self.assertTrue(certify["clutching_matches"]["c2"]["matched"])
        self.assertEqual(
            certify["assembly"],
            {"tree_structure": True, "waffle_isometries": True, "clutching_ratios": True},
        )
        self.assertEqual(report.config["ratio_rel_tol"], 1e-8)

    def test_stop_early(self):
        report = run_pipeline(load("tree_synthetic.json"), "balance")
        self.assertEqual(report.outcome, "completed")
        self.assertEqual(report.exitCode, EXIT_OK)
        self.assertEqual(list(report.results), list(STAGES[:5]))
        with self.assertRaises(PreconditionError):
            run_pipeline(load("tree_synthetic.json"), "assemble")

    def test_clutching_mismatch(self):
        with open(os.path.join(DATA, "tree_synthetic.json"), "r", encoding="utf-8") as dataFile:
            document = json.load(dataFile)
        document["edges"][3]["tau"] = 7.0
        report = run_pipeline(parse_document(json.dumps(document)))
        self.assertEqual(report.outcome, "obstruction")
        self.assertEqual(report.exitCode, EXIT_OBSTRUCTION)
        check = report.results["certify"]["clutching_matches"]["c2"]
        self.assertFalse(check["matched"])
        self.assertEqual(check["witness"], ["e2", "e3"])

    def test_unbalanced(self):
        report = run_pipeline(load("unbalanced_cycle.json"))
        self.assertEqual(report.outcome, "obstruction")
        self.assertEqual(report.exitCode, EXIT_OBSTRUCTION)
        self.assertNotIn("group", report.results)
        balance = report.results["balance"]
        self.assertFalse(balance["balanced"])
        self.assertEqual(balance["unbalanced_cycles"][0]["edges"], ["e0", "e1"])

    def test_not_filling(self):
        report = run_pipeline(load("non_filling.json"))
        self.assertEqual(report.outcome, "failed")
        self.assertEqual(report.exitCode, EXIT_PRECONDITION)
        self.assertEqual(report.diagnostic["stage"], "check-filling")
        self.assertEqual(report.diagnostic["error"], "NotFilling")
        self.assertEqual(report.diagnostic["surface"], "w1")
        self.assertEqual(report.results, {})

    def test_filling_margin_from_config(self):
        with open(os.path.join(DATA, "non_filling.json"), "r", encoding="utf-8") as dataFile:
            document = json.load(dataFile)
        del document["window"]["margin"]
        report = run_pipeline(parse_document(json.dumps(document)))
        self.assertEqual(report.diagnostic["error"], "NotFilling")
        self.assertEqual(report.config["filling_margin"], 1.0)

        document["tolerances"] = {"filling_margin": 2.5}
        report = run_pipeline(parse_document(json.dumps(document)))
        self.assertEqual(report.exitCode, EXIT_PRECONDITION)
        self.assertEqual(report.diagnostic["error"], "WindowTooSmall")
        self.assertEqual(report.config["filling_margin"], 2.5)

    def test_report_is_reproducible(self):
        first = report_to_json(run_pipeline(load("tree_synthetic.json")))
        second = report_to_json(run_pipeline(load("tree_synthetic.json")))
        self.assertEqual(first, second)
        document = json.loads(first)
        self.assertEqual(document["exit_code"], 0)
        self.assertNotIn("timing", document)

    def test_timing(self):
        report = run_pipeline(load("minimal.json"), "strands", timing=True)
        self.assertEqual(set(report.timing), {"check-filling", "cubulate", "strands"})
        self.assertIn("timing", json.loads(report_to_json(report)))

    def test_assembly_conditions(self):
        conditions = assembly_conditions(None, {"w1->w2": True}, {"c1": {"matched": True}})
        self.assertFalse(conditions["tree_structure"])
        self.assertTrue(conditions["waffle_isometries"])


class TestOracles(unittest.TestCase):
    def test_quadrature(self):
        result = oracle_quadrature(seed=3, samples=20)
        self.assertTrue(result["passed"])
        self.assertLessEqual(result["closed_form_error"], 1e-9)

    def test_visual_metric(self):
        config = DEFAULTS._replace(boundarySamples=512, visualEpsilon=0.05)
        result = oracle_visual_metric(seed=1, config=config)
        self.assertTrue(result["passed"])
        self.assertEqual(result["boundary_samples"], 512)
        self.assertEqual(result["pairs"], 4 * 511)
        self.assertEqual(result["epsilon"], 0.05)

    def test_clique(self):
        result = oracle_clique(3)
        self.assertTrue(result["passed"])
        self.assertEqual(result["dimension"], 3)

    def test_automorphisms_without_windows(self):
        result = oracle_automorphisms(load("minimal.json"), DEFAULTS)
        self.assertEqual(result, {"surfaces": {}, "passed": True})


if __name__ == "__main__":
    unittest.main()
