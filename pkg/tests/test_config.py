# -*- coding: utf-8 -*-
"""
Test the tolerance record and its overrides
"""

import json
import os
import tempfile
import unittest

from wafflecert.config import (
    DEFAULTS,
    ConfigError,
    apply_overrides,
    config_echo,
    load_config,
    snake_name,
)


class TestOverrides(unittest.TestCase):
    def test_snake_names(self):
        self.assertEqual(snake_name("ratioRelTol"), "ratio_rel_tol")
        self.assertEqual(snake_name("detTol"), "det_tol")

    def test_defaults(self):
        self.assertEqual(DEFAULTS.orientationCap, 10**6)
        self.assertEqual(DEFAULTS.automorphismCap, 5000)
        self.assertEqual(DEFAULTS.strandIterations, 10**5)
        self.assertEqual(DEFAULTS.visualEpsilon, 0.1)

    def test_apply(self):
        with self.assertLogs("wafflecert.config", level="INFO"):
            config = apply_overrides(DEFAULTS, {"ratio_rel_tol": 1e-6})
        self.assertEqual(config.ratioRelTol, 1e-6)
        self.assertEqual(DEFAULTS.ratioRelTol, 1e-9)

    def test_unknown_key(self):
        with self.assertRaises(ConfigError) as context:
            apply_overrides(DEFAULTS, {"ratio_tol": 1e-6})
        self.assertEqual(context.exception.key, "ratio_tol")

    def test_bad_values(self):
        for value in ("1e-6", True, -1.0, 0):
            with self.assertRaises(ConfigError):
                apply_overrides(DEFAULTS, {"strand_tol": value})
        with self.assertRaises(ConfigError):
            apply_overrides(DEFAULTS, {"orientation_cap": 10.5})
        config = apply_overrides(DEFAULTS, {"orientation_cap": 100.0})
        self.assertIsInstance(config.orientationCap, int)

    def test_echo(self):
        echo = config_echo(DEFAULTS)
        self.assertEqual(echo["orientation_cap"], DEFAULTS.orientationCap)
        self.assertEqual(len(echo), len(DEFAULTS))


class TestLoadConfig(unittest.TestCase):
    def setUp(self):
        handle, self.path = tempfile.mkstemp(suffix=".json")
        os.close(handle)

    def tearDown(self):
        os.remove(self.path)

    def write(self, content):
        with open(self.path, "w") as configFile:
            configFile.write(content)

    def test_file_then_input(self):
        self.write(json.dumps({"strand_tol": 1e-8, "ratio_rel_tol": 1e-7}))
        config = load_config(self.path, overrides={"ratio_rel_tol": 1e-5})
        self.assertEqual(config.strandTol, 1e-8)
        self.assertEqual(config.ratioRelTol, 1e-5)

    def test_not_json(self):
        self.write("{strand_tol: 1}")
        with self.assertRaises(ConfigError):
            load_config(self.path)

    def test_not_an_object(self):
        self.write("[1, 2]")
        with self.assertRaises(ConfigError):
            load_config(self.path)

    def test_nothing_given(self):
        self.assertEqual(load_config(), DEFAULTS)


if __name__ == "__main__":
    unittest.main()
