"""Tests for mcp-karpenter-documentation."""
