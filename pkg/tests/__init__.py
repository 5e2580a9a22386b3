"""Tests for superefficiency-lab."""
