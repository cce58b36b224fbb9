import pytest

from antichain_growth import constant_family, corollary_family, plan_for, random_table_family

RANDOM_SEEDS = range(20)


def all_families():
    fams = [("constant", constant_family(3)), ("corollary", corollary_family(1))]
    fams += [(f"random-{s}", random_table_family(s)) for s in RANDOM_SEEDS]
    return fams


_FAMILIES = all_families()
_PLANS = {}


def planned(name, seq, n_max=200):
    key = (name, n_max)
    if key not in _PLANS:
        _PLANS[key] = plan_for(seq, n_max)
    return _PLANS[key]


@pytest.fixture(scope="session")
def families():
    return _FAMILIES


@pytest.fixture(params=_FAMILIES, ids=[name for name, _ in _FAMILIES])
def family(request):
    name, seq = request.param
    return name, seq, planned(name, seq)


@pytest.fixture
def worked_plan():
    from antichain_growth.growth import ConstructionPlan

    return ConstructionPlan.from_lengths(2, [1, 3, 5])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
