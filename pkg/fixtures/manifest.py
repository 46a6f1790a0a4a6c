"""
Golden counts for the ``bmi_app`` fixture, counted by hand.

The same numbers are listed in ``fixtures/bmi_app/README.md``; tests check
them against the source model and against an independent token scan.
"""

from pathlib import Path
from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field

FIXTURE_ROOT = Path(__file__).resolve().parent / "bmi_app"


class FixtureFile(BaseModel):
    model_config = ConfigDict(frozen=True)

    relative_path: str
    classes: int
    methods: int
    anon_methods: int = 0

    @property
    def sites(self) -> int:
        return self.classes + self.methods + self.anon_methods


class FixtureManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    app_src: Path
    lib4ast: Path
    app_name: str
    files: List[FixtureFile]
    lifecycle_pairs: int
    nested_class_methods: int
    collision_file: str
    collision_mutant: int
    scopesink_labels: Dict[int, List[str]] = Field(default_factory=dict)

    @property
    def total_sites(self) -> int:
        return sum(entry.sites for entry in self.files)

    @property
    def method_sites(self) -> int:
        return sum(entry.methods + entry.anon_methods for entry in self.files)

    def file(self, relative_path: str) -> FixtureFile:
        return next(entry for entry in self.files if entry.relative_path == relative_path)


def fixture_layout() -> FixtureManifest:
    """Manifest of the committed ``bmi_app`` project."""
    return FixtureManifest(
        app_src=FIXTURE_ROOT / "src",
        lib4ast=FIXTURE_ROOT / "libs4ast",
        app_name="BMIApp",
        files=[
            FixtureFile(relative_path="com/example/bmi/BMIMain.java", classes=1, methods=4),
            FixtureFile(relative_path="com/example/bmi/HistoryStore.java", classes=1, methods=3),
            FixtureFile(relative_path="com/example/bmi/ParentClass.java", classes=2, methods=2),
            FixtureFile(relative_path="com/example/bmi/Recorder.java", classes=0, methods=0),
            FixtureFile(relative_path="com/example/bmi/ReminderScheduler.java", classes=1, methods=1, anon_methods=1),
            FixtureFile(relative_path="com/example/bmi/util/Formatter.java", classes=2, methods=3),
            FixtureFile(relative_path="com/example/bmi/util/LegacyCounter.java", classes=1, methods=1),
        ],
        lifecycle_pairs=3,
        nested_class_methods=2,
        collision_file="com/example/bmi/util/LegacyCounter.java",
        collision_mutant=22,
        scopesink_labels={
            0: ["leak-0-0", "leak-0-1"],
            1: ["leak-1-0", "leak-1-1", "leak-1-2"],
        },
    )
