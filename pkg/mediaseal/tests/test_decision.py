# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

import unittest

from ..models.decision import OutcomeRow, OutcomeTable, decide, default_table
from ..models.outcome import (
    CANNOT_BE_ASSERTED,
    CONFIDENCES,
    HIGH,
    INDETERMINATE,
    LOW,
    MATCH,
    MEDIA_VALIDATES,
    RESULTS,
)


class TestOutcomeTable(unittest.TestCase):
    def setUp(self):
        super().setUp()
        self.table = default_table()

    def test_shape(self):
        self.assertEqual(60, len(self.table))
        self.assertEqual(list(range(1, 61)), [row.row for row in self.table])
        self.assertEqual(20, sum(1 for row in self.table if row.confidence == HIGH))
        for row in self.table:
            self.assertIn(row.result, RESULTS)
            self.assertIn(row.confidence, CONFIDENCES)

    def test_every_row_decides_itself(self):
        for row in self.table:
            decision = decide((row.c2pa, row.watermark, row.fingerprint))
            self.assertEqual(row.row, decision.row)
            self.assertEqual((row.result, row.confidence), decision[:2])
            self.assertFalse(decision.extra_tabular)
            self.assertEqual((row.concern,) if row.concern else (), decision.concerns)

    def test_row_accessor(self):
        row = self.table.row(26)
        self.assertEqual(("PresentHashNoMatch", "Det/NoMatch", "Valid/Missing"), row[1:4])

    def test_duplicate_triples(self):
        row = OutcomeRow(1, "NotPresent", "Undetectable", "Invalid", INDETERMINATE, LOW, "")
        with self.assertRaises(ValueError):
            OutcomeTable([row, row._replace(row=2)])


class TestPrecedence(unittest.TestCase):
    def test_watermark_match_outside_table(self):
        decision = decide(("NotPresent", "Det/Match", "Invalid"))
        self.assertEqual((MATCH, HIGH), decision[:2])
        self.assertTrue(decision.extra_tabular)
        self.assertIsNone(decision.row)

    def test_manifest_match_outside_table(self):
        decision = decide(("PresentHashMatch", "Det/NoMatch", "Valid/Match"))
        self.assertEqual((MEDIA_VALIDATES, HIGH), decision[:2])
        self.assertTrue(decision.extra_tabular)

    def test_most_pessimistic_row(self):
        decision = decide(("NotPresent", "Undetectable", None))
        self.assertEqual((INDETERMINATE, CANNOT_BE_ASSERTED), decision[:2])
        self.assertTrue(decision.extra_tabular)
        self.assertEqual((default_table().row(18).concern,), decision.concerns)

        decision = decide(("PresentHashNoMatch", "Det/NoMatch", None))
        self.assertEqual((INDETERMINATE, LOW), decision[:2])
        self.assertEqual((default_table().row(26).concern,), decision.concerns)


class TestSkippedStages(unittest.TestCase):
    def test_short_circuit(self):
        decision = decide(("PresentHashMatch", None, None))
        self.assertEqual((MEDIA_VALIDATES, HIGH), decision[:2])
        self.assertFalse(decision.extra_tabular)
        self.assertIsNone(decision.row)
        self.assertEqual((), decision.concerns)

    def test_watermark_match_skips_fingerprint(self):
        decision = decide(("NotPresent", "Det/Match", None))
        self.assertEqual((MATCH, HIGH), decision[:2])
        self.assertFalse(decision.extra_tabular)
