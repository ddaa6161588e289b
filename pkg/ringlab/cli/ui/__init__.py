"""Rich display components."""
