"""Minimal-DAG statistics for leaf-centric binary tree sources."""

__version__ = "0.1.0"
