"""Exact toolkit for gluing Ricci-flat ALE resolutions into toric Kcsc orbifolds.

Submodules:

    lattice   exact integer/rational linear algebra, positive kernel vectors
    toric     fan files, quotient groups of cones, singularity classification
    moment    anticanonical polytopes, cone/vertex correspondence, barycenters
    balancing balancing matrices and positive weights b with c = s*b
    spectral  sphere eigen-data, biharmonic extensions, Dirichlet-to-Neumann maps
    tuning    gluing coefficients, epsilon schedule, error-band exponents
    report    end-to-end feasibility reports (also behind the CLI)
"""

__version__ = "0.1.0"
