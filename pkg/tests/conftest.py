import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from hypothesis import settings  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

CRITERIA: dict[int, list] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    CRITERIA.setdefault(criterion, []).append((ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        checks = CRITERIA[k]
        ok = all(c[0] for c in checks)
        details = "; ".join(d for _, d in checks)
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({details})")
