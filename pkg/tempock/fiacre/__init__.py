#!/usr/bin/python3
"""Front end: syntax tree, parser, printer and well-formedness"""
