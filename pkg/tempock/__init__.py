#!/usr/bin/python3
"""tempock: timed specification models, state classes and realtime properties"""

__version__ = "0.3.0"
