"""Unit tests for the germlab package."""
