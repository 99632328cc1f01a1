#!/usr/bin/python3
"""Timed transition systems and their compilation"""
