"""Tests for the germlab package."""
