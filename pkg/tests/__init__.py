"""Tests for gauss_summation."""
