"""Acceptance criteria A1-A14, run through the same entry point as the CLI.

Each test prints one ``A<k> PASS|FAIL`` line (visible even without ``-s``)
and asserts the criterion at its stated tolerance.  Defaults, including the
truncation caps, live in ``periodic_macdonald.cli``.
"""

import pytest

from periodic_macdonald.cli import CHECKS, load_config, run_check


@pytest.mark.parametrize("check_id", list(CHECKS))
def test_acceptance(check_id, capsys, monkeypatch):
    monkeypatch.delenv("PERIODIC_MACDONALD_PROFILE", raising=False)
    report = run_check(load_config(check_id))
    with capsys.disabled():
        line = report.summary()
        if report.reason:
            line += f"  [{report.reason}]"
        print(f"\n{line}")
    bad = [r for r in report.rows if not r.get("ok", True)][:5]
    assert report.passed, f"{report.reason}; first failing rows: {bad}"
