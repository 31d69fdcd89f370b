"""Checked-in JSON schema for CLI reports."""
