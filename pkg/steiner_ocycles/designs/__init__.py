# Triple system types and constructions
