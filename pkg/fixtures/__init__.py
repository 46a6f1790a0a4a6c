"""
Committed test-bed projects and their hand-counted golden values.
"""

from .manifest import FIXTURE_ROOT, FixtureFile, FixtureManifest, fixture_layout

__all__ = ['FIXTURE_ROOT', 'FixtureFile', 'FixtureManifest', 'fixture_layout']
