"""Maximal-surface toolkit: singular Bjorling data, swallowtail analysis,
scaling deformations, and convergence certificates."""

__version__ = "0.1.0"
