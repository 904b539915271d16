"""Test suite for the realization toolkit."""
