"""Pytest configuration; keeps the tests directory importable for oracles.py."""
