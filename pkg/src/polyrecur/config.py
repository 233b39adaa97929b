"""Fixed run parameters shared by the library, tests and CLI."""
import math

import mpmath

# window lengths for uniform-average trend checks
WINDOW_SCHEDULE = (250, 1000, 4000)
# window starts M; uniform estimates take the max over these
WINDOW_STARTS = (0, 1_000, 10_000, 100_000)
# required relative decrease between consecutive window lengths
TREND_MARGIN = 0.10

DEFAULT_EPS = 0.01
DEFAULT_SEED = 0xF17A
# numpy.random.default_rng bit generator
PRNG = "PCG64"

ALPHA = math.sqrt(2) - 1
DEFAULT_ALPHAS = {"alpha": ALPHA}
# same value for exact sign decisions, evaluated at the caller's mpmath precision
ALPHAS_MP = {"alpha": lambda: mpmath.sqrt(2) - 1}
