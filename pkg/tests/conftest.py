import pytest

from classical_drg import geometry, graphs

# criterion number -> (title, outcome, seconds); filled by the report hook below
_ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number, title = marker.args
    _ACCEPTANCE[number] = (title, "PASS" if report.passed else "FAIL", report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status, seconds = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({seconds:.1f} s)")


@pytest.fixture(scope="session")
def h233():
    return graphs.build_bilinear_forms(2, 3, 3)


@pytest.fixture(scope="session")
def h233_dist(h233):
    return graphs.Distances(h233.graph)


@pytest.fixture(scope="session")
def h233_cover_result(h233, h233_dist):
    return geometry.delsarte_cover(h233.graph, h233.expected_params, h233_dist)


@pytest.fixture(scope="session")
def h233_cover(h233_cover_result):
    assert h233_cover_result.passed, h233_cover_result.witness
    return h233_cover_result.payload


@pytest.fixture(scope="session")
def h233_asys(h233, h233_cover):
    res = geometry.assemblies(h233.graph, h233.expected_params, h233_cover)
    assert res.passed, res.witness
    return res.payload


@pytest.fixture(scope="session")
def j2_63():
    return graphs.build_grassmann(2, 6, 3)


@pytest.fixture(scope="session")
def j2_63_dist(j2_63):
    return graphs.Distances(j2_63.graph)
