"""Jets, classification, versality and caustic models."""
