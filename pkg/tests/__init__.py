"""Tests for Agent Arcade."""
