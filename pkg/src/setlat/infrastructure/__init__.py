"""Infrastructure layer - problem files and logging."""
