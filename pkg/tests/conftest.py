import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from xpkit.loader import load_fixture_instance, load_fixture_model


@pytest.fixture(scope='session')
def dl_fig1():
    return load_fixture_model('dl_fig1.json')


@pytest.fixture(scope='session')
def dl_fig1_instance(dl_fig1):
    return load_fixture_instance('dl_fig1_instance.json', model=dl_fig1)


@pytest.fixture(scope='session')
def dt_fig2():
    return load_fixture_model('dt_fig2.json')


@pytest.fixture(scope='session')
def dt_fig2_instance(dt_fig2):
    return load_fixture_instance('dt_fig2_instance.json', model=dt_fig2)


@pytest.fixture(scope='session')
def nn_or_table():
    return load_fixture_model('nn_or_table.json')


@pytest.fixture(scope='session')
def nn_or_instance(nn_or_table):
    return load_fixture_instance('nn_or_instance.json', model=nn_or_table)


@pytest.fixture(scope='session')
def grading():
    return load_fixture_model('grading.json')


@pytest.fixture(scope='session')
def grading_instance(grading):
    return load_fixture_instance('grading_instance.json', model=grading)


@pytest.fixture(scope='session')
def grading_small():
    return load_fixture_model('grading_small.json')


@pytest.fixture(scope='session')
def meningitis_dt():
    return load_fixture_model('meningitis_dt.json')


@pytest.fixture(scope='session')
def meningitis_instance(meningitis_dt):
    return load_fixture_instance('meningitis_instance.json', model=meningitis_dt)
