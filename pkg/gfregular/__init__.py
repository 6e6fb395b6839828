# gfregular - exact GF(q) / GF(q^2) matroid toolkit
# Field towers, represented matroids, the hat/bar families and their obstructions.

__version__ = "1.0.0"
