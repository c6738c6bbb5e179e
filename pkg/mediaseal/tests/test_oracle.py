# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

import unittest

from ..exception import InvariantViolation
from ..oracle import (
    INTERNAL_CONFIDENCE,
    PUBLIC_RATE_LIMITED,
    OracleResult,
    oracle_attack_simulation,
)


class TestOracleSimulation(unittest.TestCase):
    def test_no_budget(self):
        for endpoint in (INTERNAL_CONFIDENCE, PUBLIC_RATE_LIMITED):
            result = oracle_attack_simulation(endpoint, budget=0)
            self.assertFalse(result.success)
            self.assertEqual(0, result.queries)
            self.assertEqual(0.0, result.distortion)

    def test_internal_not_rate_limited(self):
        result = oracle_attack_simulation(INTERNAL_CONFIDENCE, budget=30)
        self.assertLessEqual(result.queries, 30)
        self.assertEqual(0, result.refused)
        self.assertEqual(float(result.queries), result.elapsed)
        self.assertEqual(1, result.windows)

    def test_public_rate_limited(self):
        result = oracle_attack_simulation(
            PUBLIC_RATE_LIMITED, budget=30, rate_limit=10, rate_window=60.0
        )
        self.assertFalse(result.success)
        self.assertEqual(30, result.queries)
        self.assertGreater(result.refused, 0)
        self.assertGreaterEqual(result.elapsed, 120.0)
        self.assertGreaterEqual(result.windows, 3)
        self.assertLessEqual(result.max_grants_per_window(60.0), 10)

    def test_confidence_is_cheaper(self):
        for seed in (0, 1, 2):
            internal = oracle_attack_simulation(INTERNAL_CONFIDENCE, seed=seed, budget=4000)
            public = oracle_attack_simulation(PUBLIC_RATE_LIMITED, seed=seed, budget=4000)
            self.assertTrue(internal.success, seed)
            self.assertLess(internal.queries, public.queries, seed)
            self.assertLessEqual(internal.windows, public.windows, seed)

    def test_deterministic(self):
        self.assertEqual(
            oracle_attack_simulation(PUBLIC_RATE_LIMITED, seed=3, budget=20, rate_limit=5),
            oracle_attack_simulation(PUBLIC_RATE_LIMITED, seed=3, budget=20, rate_limit=5),
        )

    def test_invalid(self):
        with self.assertRaises(InvariantViolation):
            oracle_attack_simulation("telepathy")
        with self.assertRaises(InvariantViolation):
            oracle_attack_simulation(PUBLIC_RATE_LIMITED, rate_limit=0)
        with self.assertRaises(InvariantViolation):
            oracle_attack_simulation(PUBLIC_RATE_LIMITED, queries_per_estimate=0)


class TestOracleResult(unittest.TestCase):
    def test_max_grants_per_window(self):
        result = OracleResult(INTERNAL_CONFIDENCE, True, 5, grants=(0.0, 1.0, 2.0, 60.0, 61.0))
        self.assertEqual(3, result.max_grants_per_window(60.0))
        self.assertEqual(5, result.max_grants_per_window(62.0))
        self.assertEqual(0, OracleResult(INTERNAL_CONFIDENCE, False, 0).max_grants_per_window(1.0))

    def test_to_dict(self):
        values = OracleResult(PUBLIC_RATE_LIMITED, False, 3, 1, 62.5, 2, 0.25).to_dict()
        self.assertEqual("62.500000", values["elapsed"])
        self.assertEqual("0.250000", values["distortion"])
        self.assertNotIn("grants", values)
