#!/usr/bin/python3
"""State class graphs and the discrete-time oracle"""
