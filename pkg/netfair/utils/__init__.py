"""netfair utilities."""
