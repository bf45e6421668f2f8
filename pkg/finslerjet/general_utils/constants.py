DEBUG_TRACE = False

SCHEMA_VERSION = "finsler-report/1"
MAX_DIMENSION = 4

DEFAULT_SEED = 42
DEFAULT_POINTS = 20
DEFAULT_BOX = (-0.3, 0.3)
DEFAULT_GRID = 3
MAX_REJECTION_ATTEMPTS = 1000

DEFAULT_TOLERANCE = 1e-5
SCALAR_FLAG_TOLERANCE = 1e-6
ISOTROPY_TOLERANCE = 1e-5
RANDERS_TOLERANCE = 1e-6
PROJECTIVE_TOLERANCE = 1e-6
QUADRATURE_TOLERANCE = 1e-8
FLAG_DEGENERACY = 1e-12
THETA_ZERO = 1e-10
SCALE_FLOOR = 1e-10

# number of sphere directions used by a fit at a fixed position, per unknown
DIRECTIONS_PER_UNKNOWN = 6

# minimal F-derivative order needed by each quantity
REQUIRED_ORDER = {
    "F": 0,
    "g": 2,
    "spray": 2,
    "connection": 3,
    "christoffel": 4,
    "riemann": 4,
    "cartan": 3,
    "berwald": 5,
    "landsberg": 5,
    "hh": 6,
    "bianchi": 7,
    "hamel": 2,
    "projective": 3,
}

PROBE_GRID_POINTS = 5
PROBE_GRID_HALF_WIDTH = 0.5

QUADRATURE_RESOLUTIONS = (16, 24)

FLOAT_DIGITS_JSON = 17
FLOAT_DIGITS_TABLE = 6
