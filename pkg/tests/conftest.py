"""Emit one ACCEPTANCE CRITERION nn ... PASS/FAIL line per gate test."""

import re

_LABELS = {
    1: "exact mass identities",
    2: "tame brute-force mass oracle",
    3: "degeneration to S=() averages",
    4: "cross-theorem ladder",
    5: "enumeration vs monic oracle + counts",
    6: "class-group oracle equivalence",
    7: "Selmer route identity",
    8: "empirical trends",
    9: "proportion floors with nesting",
    10: "K-group 2-ranks",
    11: "deterministic reports",
}

def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    verdict = "PASS" if report.passed else "FAIL"
    print(f"\nACCEPTANCE CRITERION {n:02d} "
          f"({_LABELS.get(n, '?')}): {verdict}", flush=True)
