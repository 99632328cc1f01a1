#!/usr/bin/python3
"""Storage engines of the run archive"""
