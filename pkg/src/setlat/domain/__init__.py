"""Domain layer - upper sets, function models, Dini derivatives and convexity tests."""
