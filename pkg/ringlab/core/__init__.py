"""Core algebra: exact linear algebra, rings, modules and the chain constructions."""
