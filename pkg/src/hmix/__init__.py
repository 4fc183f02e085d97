"""hmix: numerical laboratory for the simple random walk on the finite
Heisenberg group H(n).

Subpackages cover exact group-algebra mixing computations, the full
irreducible representation table and its Fourier machinery, Harper-type
spectra, Dirichlet-form eigenvalue bounds from canonical paths, and
Monte Carlo experiments on the infinite group.
"""

__version__ = "0.1.0"
