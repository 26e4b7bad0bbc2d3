import os

import pytest

from cwac.dataset import load_csv

DATA = os.path.join(os.path.dirname(__file__), "data")

_acceptance: list[tuple[str, str]] = []


def data_path(name):
    return os.path.join(DATA, name)


@pytest.fixture
def hiv():
    return load_csv(data_path("hiv.csv"))


@pytest.fixture
def t4():
    return load_csv(data_path("t4.csv"))


@pytest.fixture
def iris_path():
    return data_path("iris.csv")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    label = dict(report.user_properties).get("criterion")
    if label:
        _acceptance.append((label, "PASS" if report.passed else "FAIL"))


def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in _acceptance:
        terminalreporter.write_line(f"{status}  {label}")
