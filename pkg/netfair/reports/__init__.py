"""netfair run manifests and report writers."""
