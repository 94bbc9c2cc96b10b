# tests/conftest.py
"""Pytest session hooks shared across the suite.

Puts the repository root on ``sys.path`` so the ``libs`` package and the
``frSweep`` launcher import without installation, and keeps library logging
quiet unless a test raises the level itself.
"""

import logging
import os
import sys

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)


def pytest_sessionstart(session):
    logging.getLogger('libs').setLevel(logging.WARNING)
