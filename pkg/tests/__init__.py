"""Tests for the oscint package."""
