"""Shared desk-scale instances. Solves are cached per session because the
planning models take seconds each."""

import pytest

from irepta.milfp import BnbConfig
from irepta.model import (PlanningConfig, build_deterministic_model, default_facilities,
                          solve_model, synthetic_profile)

DESK_SEED = 1


@pytest.fixture(scope="session")
def facs():
    return default_facilities()


@pytest.fixture(scope="session")
def desk_profile():
    return synthetic_profile(168, 1.0, seed=DESK_SEED)


@pytest.fixture(scope="session")
def desk_cfg():
    return PlanningConfig(relax_bess_binaries=True)


@pytest.fixture(scope="session")
def bnb():
    return BnbConfig(time_limit=300)


@pytest.fixture(scope="session")
def desk_solution(desk_cfg, facs, desk_profile, bnb):
    inst = build_deterministic_model(desk_cfg, facs, desk_profile)
    plan, sol = solve_model(inst, bnb)
    return inst, plan, sol


@pytest.fixture(scope="session")
def small_profile():
    return synthetic_profile(72, 1.0, seed=DESK_SEED)


@pytest.fixture(scope="session")
def small_cfg():
    return PlanningConfig(N=72, relax_bess_binaries=True)


@pytest.fixture(scope="session")
def small_solution(small_cfg, facs, small_profile, bnb):
    inst = build_deterministic_model(small_cfg, facs, small_profile)
    return solve_model(inst, bnb)[0]


# acceptance report ---------------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = mark.args
    detail = "; ".join(v for k, v in item.user_properties if k == "detail")
    _CRITERIA[number] = ("PASS" if rep.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        verdict, title, detail = _CRITERIA[number]
        line = f"criterion {number:2d}: {verdict}  {title}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
