"""Definability workbench for two-sorted point/interval structures over linear orders."""

__version__ = "0.1.0"
