# gfregular core - pure computation, no I/O
