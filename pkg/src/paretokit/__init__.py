"""Multi-objective evolutionary optimization toolkit."""
