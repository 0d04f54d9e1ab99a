"""Bundled problem files and their expected verdicts."""
