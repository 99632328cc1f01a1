#!/usr/bin/python3
"""Observables, formulas, patterns and their verification"""
