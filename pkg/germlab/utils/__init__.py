"""Utility functions for parsing and numeric settings."""
