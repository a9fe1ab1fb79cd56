import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

_acceptance: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "acceptance" not in props:
        return
    number, title = props["acceptance"].split("|", 1)
    if report.passed:
        outcome, detail = "PASS", props.get("detail", "")
    else:
        outcome = "FAIL"
        detail = report.longrepr.reprcrash.message if hasattr(report.longrepr, "reprcrash") \
            else str(report.longrepr).splitlines()[-1]
    _acceptance[int(number)] = (outcome, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        outcome, title, detail = _acceptance[number]
        terminalreporter.write_line(f"ACCEPTANCE {number} {outcome}  {title}: {detail}")
