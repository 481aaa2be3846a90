# Steiner triple systems, 1-overlap cycles and rank two universal cycles

__version__ = "1.0.0"
