"""Workbench for finite algebras of n-ary partial functions."""

__version__ = "0.1.0"
