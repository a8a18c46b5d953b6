"""Numeric tolerances shared across the analytic layers.

Double precision with at most a few dozen product factors; equality checks
sit well above accumulated roundoff, singularity detection well below any
genuine denominator.
"""

# Generic floating-point equality for symmetry/identity checks.
EQ_TOL = 1e-9

# A c-function denominator smaller than this is treated as an exact pole.
SINGULAR_TOL = 1e-12

# Distance at which spherical evaluation switches to the perturbation path.
NEAR_SINGULAR_TOL = 1e-8

# Perturbation scheme: two step sizes per direction (Richardson pair) and
# the admissible spread between extrapolated directional values.
PERTURB_EPS = (1e-5, 5e-6)
PERTURB_SPREAD_TOL = 1e-6

# Monomial-expansion extraction: residual at fresh check points, and the
# largest acceptable condition number of the collocation system.
COEFF_VERIFY_TOL = 1e-8
CONDITION_LIMIT = 1e10

# Plancherel-side quadrature tolerance (wall error at moderate grids).
PLANCHEREL_TOL = 2e-3
QUAD_DROP_TOL = 1e-10
QUAD_MAX_RESOLUTION = 512

# Spectral realness contract: relative imaginary parts below IMAG_DISCARD_TOL
# are dropped silently; above IMAG_ERROR_TOL the contract is violated.
IMAG_DISCARD_TOL = 1e-9
IMAG_ERROR_TOL = 1e-6

# Half-open interval fuzz for the dilation search mod 2*pi.
DIRICHLET_FUZZ = 1e-12

# Rounding tolerance when recognising lattice vectors from floats.
LATTICE_ROUND_TOL = 1e-9
