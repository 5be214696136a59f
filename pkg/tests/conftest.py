"""Shared fixture-corpus helpers for the test suite."""

import json
import time
from functools import lru_cache
from pathlib import Path

from veerpoly import homology, ingest

FIXDIR = Path(__file__).resolve().parent.parent / "fixtures"

SESSION_START = time.time()


@lru_cache(maxsize=1)
def manifest():
    with open(FIXDIR / "manifest.json", "r", encoding="utf-8") as fh:
        return json.load(fh)["fixtures"]


def unique_entries():
    """(name, entry) pairs with alias duplicates removed, by file."""
    seen = set()
    out = []
    for name in sorted(manifest()):
        entry = manifest()[name]
        if entry["file"] in seen:
            continue
        seen.add(entry["file"])
        out.append((name, entry))
    return out


@lru_cache(maxsize=64)
def load(filename):
    """(triangulation, homology model) for a bundled fixture file."""
    with open(FIXDIR / filename, "r", encoding="utf-8") as fh:
        doc = ingest.parse_vt(fh.read())
    tri = ingest.to_triangulation(doc)
    return tri, homology.homology_basis(tri)


def load_named(name):
    """(triangulation, homology model) for a manifest entry name."""
    return load(manifest()[name]["file"])


def pytest_collection_modifyitems(config, items):
    # the acceptance gate runs last; its final criterion times the suite
    items.sort(key=lambda it: "test_acceptance" in str(it.fspath))


# one PASS/FAIL line per acceptance criterion, emitted after the run
# (outside pytest's capture) so they always reach the terminal
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
