# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

from dataclasses import dataclass
from typing import Optional, Tuple

from .outcome import ValidationReport


def _json_value(value):
    if isinstance(value, float):
        return "%g" % value
    if isinstance(value, bytes):
        return value.hex()
    if isinstance(value, (list, tuple)):
        return [_json_value(item) for item in value]
    return value


@dataclass(frozen=True)
class AttackSpec:
    name: str
    parameters: Tuple[Tuple[str, object], ...] = ()
    seed: int = 0

    def __post_init__(self):
        parameters = self.parameters
        if isinstance(parameters, dict):
            parameters = parameters.items()
        object.__setattr__(self, "parameters", tuple(sorted(parameters)))

    def get(self, name, default=None):
        return dict(self.parameters).get(name, default)

    def to_dict(self):
        return {
            "name": self.name,
            "parameters": {key: _json_value(value) for key, value in self.parameters},
            "seed": self.seed,
        }


@dataclass(frozen=True)
class ScenarioResult:
    scenario: str
    attack_applied: AttackSpec
    report_before: Optional[ValidationReport]
    report_after: ValidationReport
    mitigated: bool
    #: runs of the same scenario under other conditions, by name
    variants: Tuple[Tuple[str, "ScenarioResult"], ...] = ()

    def variant(self, name):
        return dict(self.variants)[name]

    def to_dict(self):
        return {
            "attack_applied": self.attack_applied.to_dict(),
            "mitigated": self.mitigated,
            "report_after": self.report_after.to_dict(),
            "report_before": self.report_before.to_dict() if self.report_before else None,
            "scenario": self.scenario,
            "variants": {name: result.to_dict() for name, result in self.variants},
        }
