#!/usr/bin/python3
"""Library components, their obligations and model generators"""
