"""Tests for RingLab."""
