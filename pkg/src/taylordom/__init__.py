"""Taylor domination toolkit."""
