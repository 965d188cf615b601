"""Constants."""

import math

APP_TITLE = "Torus Factorisation Checker"

TWO_PI = 2 * math.pi

# Absolute tolerance for algebraic identities
ALGEBRA_TOL = 1e-12

# Relative tolerance for self-adjointness of assembled Dirac operators
SELF_ADJOINT_RTOL = 1e-10

# Clifford generators must satisfy their relations to within this
CLIFFORD_TOL = 1e-7

# Eigenvalues of an SPD matrix must exceed this
SPD_TOL = 1e-12

# Blocks of at least this dimension are stored as sparse matrices
SPARSE_MIN_DIM = 16

# Sparse eigenvalue problems below this size, or with a band wider than this fraction of it, are solved densely
BANDED_MIN_DIM = 64
BANDED_MAX_FRACTION = 0.25

# Condition 1 passes when every graded commutator is below this norm
CONDITION1_TOL = 1e-10

# Condition 2 is bounded when successive refinements change the norm by at most this ratio
CONDITION2_RATIO_LIMIT = 1.1

# Relative agreement required with a closed-form condition-2 norm
CONDITION2_ANALYTIC_RTOL = 0.02

# Positivity minima may move by this fraction under one refinement and still count as stable
STABILITY_BAND = 0.05

# Changes between STABILITY_BAND and this multiple of it are reported as inconclusive
INCONCLUSIVE_FACTOR = 2.0

# Absolute floor used when comparing minima that sit at zero
STABILITY_ATOL = 1e-9

# Relative slack when comparing sector minima against the lower-bound certificate
CERTIFICATE_TOL = 1e-8

# A constructive-product gap counts as bounded when its fitted slope in |k| is below this
GAP_SLOPE_TOL = 1e-3

# Smallest grids accepted by the warped torus and the sphere
MIN_WARPED_POINTS = 16
MIN_SPHERE_POINTS = 64

# Pole margins must lie strictly below this
MAX_SPHERE_MARGIN = math.pi / 8

# Positivity scans need at least this many sectors either side of zero
MIN_POSITIVITY_WINDOW = 3

# Default algebra samples: bump centres as fractions of the orbit coordinate range
SAMPLE_CENTRES = (0.25, 0.5, 0.75)
SAMPLE_HALF_WIDTH = 0.125
SAMPLE_MAX_CHARACTER = 2

SCHEMA_VERSION = 1

REPORT_JSON = "report.json"
REPORT_TEXT = "report.txt"
SCAN_CSV = "scan.csv"
SECTORS_CSV = "sectors.csv"
GAP_CSV = "product_gap.csv"
RUN_LOG = "run.log"

MODEL_OPTIONS = ["torus", "warped_torus", "sphere", "nc_torus"]

CHECK_OPTIONS = ["ssa", "cond1", "cond2", "positivity", "certificate", "product_gap", "full"]

PROFILE_OPTIONS = ["constant", "sin-bump", "gaussian-bump"]
