#!/usr/bin/python3
"""Flask application serving the toolchain over HTTP"""
