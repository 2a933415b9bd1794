"""Simulation and verification toolkit for continuous-variable blind MBQC."""

__version__ = "0.1.0"
