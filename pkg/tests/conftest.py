"""Shared fixtures: shipped models, a temporary run archive, the HTTP client"""

import os

import pytest

from tempock import models
from tempock.fiacre.parser import parse_program
from tempock.models.engine.file_storage import FileStorage
from tempock.pipeline import load_program

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

SMALL_CYCLE = """
process p [a : none] is
  states s0, s1
  from s0 wait [1,2]; to s1
  from s1 a; to s0

component main is
  port a : none in [0,0]
  par p [a] end

main
"""

CHOICE = """
process p [a, b : none] is
  states s0, s1
  from s0 select a; to s1 [] b; to s1 end

component main is
  port a, b : none in [0,0]
  {priority}
  par p [a, b] end

main
"""


TWO_WAITS = """
process slow is
  states s0, s1
  from s0 wait [3,3]; to s1

process fast is
  states s0, s1
  from s0 wait [1,1]; to s1

component main is
  par slow || fast end

main
"""


def data_file(*parts):
    return os.path.join(ROOT, "data", *parts)


def choice_program(priority=True):
    return parse_program(CHOICE.format(priority="priority a > b" if priority else ""))


def with_property(text, prop):
    """Model text with one more property declared before the root name"""
    head, _, root = text.rstrip().rpartition("\n")
    return "{}\n{}\n\n{}\n".format(head, prop, root)


@pytest.fixture
def periodic_path():
    return data_file("models", "periodic.fcr")


@pytest.fixture
def periodic_text(periodic_path):
    with open(periodic_path, encoding="UTF-8") as f:
        return f.read()


@pytest.fixture
def periodic(periodic_path):
    return load_program(periodic_path)


@pytest.fixture
def storage(tmp_path, monkeypatch):
    """Empty file archive in a temporary directory"""
    store = FileStorage(str(tmp_path / "runs.json"))
    monkeypatch.setattr(models, "storage", store)
    return store


@pytest.fixture
def client(storage):
    from tempock.dev_flask.app import app

    app.config["TESTING"] = True
    with app.test_client() as client:
        yield client
