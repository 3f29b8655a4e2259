"""One test per acceptance criterion; each records a PASS/FAIL line.

The lines are printed in the pytest terminal summary (see conftest.py) and
also when this file is run directly with ``python3 tests/test_acceptance.py``.
"""

import pytest

from heckex.suites import CRITERIA, acceptance

RESULTS: dict[int, str] = {}


def _line(res: dict) -> str:
    status = "PASS" if res["pass"] else "FAIL"
    limit = f" (limit {res['limit']:.0f}s)" if res["limit"] else ""
    failed = [f"{r['suite']}:{p['property']}" for r in res["reports"] for p in r["properties"] if not p["pass"]]
    if not res["within_limit"]:
        failed.append("time limit exceeded")
    tail = f" failed: {', '.join(failed)}" if failed else ""
    return f"criterion {res['criterion']:>2} {status} {res['title']} [{res['elapsed']:.2f}s{limit}]{tail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    res = acceptance(number, seed=0)
    RESULTS[number] = _line(res)
    print(RESULTS[number])
    assert res["within_limit"], RESULTS[number]
    assert res["pass"], RESULTS[number]


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        print(_line(acceptance(n, seed=0)))
