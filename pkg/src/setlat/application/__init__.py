"""Application layer - verbs, optimality checks and the bundled corpus."""
