"""CLI layer - report rendering."""
