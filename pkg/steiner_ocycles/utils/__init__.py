# Utilities package for logging setup
