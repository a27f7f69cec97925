"""Test suite for molq."""
