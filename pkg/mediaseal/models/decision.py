# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""
Decision Table
==============

The final result of a validation is a lookup of the triple of stage labels
in the outcome table shipped in ``mediaseal/data/outcome_table.csv``.

A skipped stage (label None) matches any label; when all the rows it
matches agree on the result and the confidence, that is the decision.

Other triples absent from the table are resolved by precedence:

1. a matching manifest validates the media, High;
2. a detected watermark whose registry hash matches is a Match, High;
3. otherwise the most pessimistic row sharing the C2PA and watermark labels.

Such decisions are flagged as extra-tabular.

"""

import csv
import logging
import os
from collections import namedtuple

from .manifest import PRESENT_HASH_MATCH
from .outcome import CONFIDENCES, HIGH, MATCH, MEDIA_VALIDATES, RESULTS

_logger = logging.getLogger(__name__)

TABLE_PATH = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data", "outcome_table.csv")

OutcomeRow = namedtuple(
    "OutcomeRow", "row c2pa watermark fingerprint result confidence concern"
)
Decision = namedtuple("Decision", "result confidence concerns row extra_tabular")


def _pessimism(row):
    return (CONFIDENCES.index(row.confidence), RESULTS.index(row.result), row.row)


class OutcomeTable:
    def __init__(self, rows):
        self.rows = tuple(rows)
        self._by_triple = {(r.c2pa, r.watermark, r.fingerprint): r for r in self.rows}
        if len(self._by_triple) != len(self.rows):
            raise ValueError("the outcome table has duplicate triples")

    @classmethod
    def load(cls, path=TABLE_PATH):
        with open(path, newline="", encoding="utf-8") as table_file:
            rows = [
                OutcomeRow(
                    row=int(record["row"]),
                    c2pa=record["c2pa"],
                    watermark=record["watermark"],
                    fingerprint=record["fingerprint"],
                    result=record["result"],
                    confidence=record["confidence"],
                    concern=record["concern"],
                )
                for record in csv.DictReader(table_file)
            ]
        return cls(rows)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def get(self, triple):
        return self._by_triple.get(tuple(triple))

    def row(self, number):
        return self.rows[number - 1]

    def decide(self, triple):
        c2pa, watermark, fingerprint = triple
        found = self.get(triple)
        if found is not None:
            concerns = (found.concern,) if found.concern else ()
            return Decision(found.result, found.confidence, concerns, found.row, False)
        skipped = self._decide_skipped(triple)
        if skipped is not None:
            return skipped
        _logger.debug("extra-tabular triple %s", triple)
        if c2pa == PRESENT_HASH_MATCH:
            return Decision(MEDIA_VALIDATES, HIGH, (), None, True)
        if watermark == "Det/Match":
            return Decision(MATCH, HIGH, (), None, True)
        candidates = [
            r for r in self.rows if r.c2pa == c2pa and r.watermark == watermark
        ]
        if not candidates:
            candidates = [r for r in self.rows if r.c2pa == c2pa]
        worst = min(candidates, key=_pessimism)
        concerns = (worst.concern,) if worst.concern else ()
        return Decision(worst.result, worst.confidence, concerns, None, True)

    def _decide_skipped(self, triple):
        """Triple with skipped stages (None labels)

        Decided without flag when every row agreeing on the evaluated
        stages gives the same result and confidence; the concerns kept are
        the ones common to these rows.
        """
        if None not in triple:
            return None
        rows = [
            r
            for r in self.rows
            if all(
                label is None or label == value
                for label, value in zip(triple, (r.c2pa, r.watermark, r.fingerprint))
            )
        ]
        if not rows or len({(r.result, r.confidence) for r in rows}) != 1:
            return None
        concerns = {r.concern for r in rows}
        common = (rows[0].concern,) if len(concerns) == 1 and rows[0].concern else ()
        return Decision(rows[0].result, rows[0].confidence, common, None, False)


_default_table = None


def default_table():
    global _default_table
    if _default_table is None:
        _default_table = OutcomeTable.load()
    return _default_table


def decide(triple, table=None):
    """Pure lookup of (c2pa, watermark, fingerprint) labels"""
    return (table or default_table()).decide(triple)
