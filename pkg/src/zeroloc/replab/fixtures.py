from dataclasses import dataclass, field


@dataclass
class FixtureReport:
    """One reproduced value set: what was expected, what was computed."""

    fixture_id: str
    expected: object
    computed: object
    deviation: float
    tolerance: float
    provenance: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(self.deviation <= self.tolerance)

    def summary(self):
        return {
            "id": self.fixture_id,
            "passed": self.passed,
            "deviation": float(self.deviation),
            "tolerance": float(self.tolerance),
            "provenance": self.provenance,
        }
