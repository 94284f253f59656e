"""netfair Excel generation."""
