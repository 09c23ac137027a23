"""Lamplighter groups: Cayley balls, regular maps into metabelian groups, separators."""

__version__ = "0.1.0"
