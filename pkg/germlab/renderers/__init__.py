"""Renderers for reports, catalogue tables and diagrams."""
