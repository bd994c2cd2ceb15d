from helpers import ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE, key=int):
        rows = ACCEPTANCE[crit]
        ok = all(r[1] for r in rows)
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {crit}: " + "; ".join(d for d, _ in rows))
