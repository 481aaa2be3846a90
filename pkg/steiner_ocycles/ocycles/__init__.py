# Overlap cycle algebra and the cycle builders
