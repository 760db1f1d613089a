"""Triadic closure prediction with communicability distances."""

__version__ = "0.1.0"
