"""Motion model, certificates and the kinetic separation structures."""
