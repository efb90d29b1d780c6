import re

_CRITERIA = {
    1: "expansion agrees with the signed-subset oracle (J=8)",
    2: "neighbor exclusion on the J=6 universe",
    3: "density bound and decreasing ratios (base-4 preset)",
    4: "window locality for 200 random labels",
    5: "translation locality for 100 random triples",
    6: "asymptotic agreement radius for 20 pairs",
    7: "ex8a identities and limit",
    8: "ex10a identities and non-commuting double limits",
    9: "proper sub-label outside the orbit closure",
    10: "heights: chains, random trees, omega leaf",
    11: "translation-finite refutation and unit label TF",
    12: "ex11a independence certificate, n=4",
    13: "metric / point-map consistency on 200 pairs",
    14: "ultrametric and action laws on 500 samples",
}
_outcomes: dict[int, list[str]] = {}
_PAT = re.compile(r"test_criterion_(\d+)")


def pytest_runtest_logreport(report):
    m = _PAT.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in _CRITERIA.items():
        got = _outcomes.get(n)
        if got is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(o == "passed" for o in got) else "FAIL"
        terminalreporter.write_line(f"{status:7} {n:2}. {text}")
