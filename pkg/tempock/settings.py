#!/usr/bin/python3
"""Run-time settings read from the environment (and an optional .env file)"""

import os

from dotenv import load_dotenv

load_dotenv()


def _int(name, default):
    """Reads an integer variable, falling back to default when unset"""
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


def _float(name, default=None):
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


MAX_CLASSES = _int("TEMPOCK_MAX_CLASSES", 2_000_000)
TIME_BUDGET = _float("TEMPOCK_TIME_BUDGET")
MAX_TRANSITIONS = _int("TEMPOCK_MAX_TRANSITIONS", 10_000)
BUCHI_NODES = _int("TEMPOCK_BUCHI_NODES", 100_000)
PRODUCT_STATES = _int("TEMPOCK_PRODUCT_STATES", 5_000_000)
ORACLE_HORIZON = _int("TEMPOCK_ORACLE_HORIZON", 1_000_000)
THREADS = _int("TEMPOCK_THREADS", 1)
SEED = os.getenv("TEMPOCK_SEED")
LOG_LEVEL = os.getenv("TEMPOCK_LOG_LEVEL", "WARNING")

STORAGE_TYPE = os.getenv("TEMPOCK_TYPE_STORAGE", "file")
FILE_STORAGE = os.getenv("TEMPOCK_FILE_STORAGE", "data/runs.json")

HOST = os.getenv("TEMPOCK_HOST", "localhost")
PORT = _int("TEMPOCK_FLASK_PORT", 5000)

REPORT_SCHEMA = 1
