"""Ring-spec parsing and report records."""
