#!/usr/bin/python3
"""python -m tempock"""

import sys

from tempock.cli import main

sys.exit(main())
