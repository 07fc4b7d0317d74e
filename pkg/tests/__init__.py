"""Tests for jetmoduli."""
