"""divlab: exact desk-scale verification of intersecting-family diversity results.

Modules:
    bitfam        bitmask families, degrees, diversity
    constructions named family builders and the triangle-center decomposition
    shiftlex      (i,j)-shifts and Kruskal-Katona lex machinery
    bounds        exact binomial bounds and inequality sweeps
    booleanlab    exact biased measures and influences on junta centers
    runstat       cyclic run-length statistics
    extremal      maximal-family enumeration and diversity search
    cli           command-line front end
"""

__version__ = "0.1.0"
