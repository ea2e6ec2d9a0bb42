"""Periodic q-Whittaker / Hall-Littlewood measures, vertex models and contour formulas."""
__version__ = "0.1.0"
