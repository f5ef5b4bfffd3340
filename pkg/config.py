"""
Configuration module for torus-reciprocal
Contains numeric tolerances, geometric constants and built-in instance tables
"""
import math


class TorusConfig:
    """Configuration class containing all tolerance and instance constants"""

    # Tolerances
    ABS_TOL = 1e-9
    DET_TOL = 1e-12
    SVD_CUTOFF = 1e-10
    HOMOLOGY_TOL = 1e-6
    STRESS_SPACE_TOL = 1e-8

    # Counterclockwise quarter turn
    QUARTER_TURN = ((0.0, -1.0), (1.0, 0.0))

    # Cohomology classes of the rows of the homology matrix
    ROTATED_COCYCLE_CLASSES = ((1, 0), (0, 1))
    STANDARD_COCYCLE_CLASSES = ((0, 1), (-1, 0))

    # Document format
    DOCUMENT_VERSION = 1
    FLOAT_DIGITS = 17
    REPORT_DIGITS = 12

    # K7 on the square torus: v_i = (i/7, 3i/7 mod 1), edge classes i -> i+k
    K7_ORDER = 7
    K7_SLOPE_STEP = 3
    K7_CLASS_STEPS = (1, 2, 3)

    # Named stress tables: weight per class (slope 3, slope -1/2, slope 2/3)
    K7_STRESS_TABLES = {
        "uniform": (1.0, 1.0, 1.0),
        "scaled_uniform": (1 / math.sqrt(3), 1 / math.sqrt(3), 1 / math.sqrt(3)),
        "weird": (2.0, 3.0, -1.0),
        "negative": (1.0, -1.0, 1.0),
    }

    # Built-in instance name -> stress listed first in the document
    BUILTIN_K7 = {
        "k7_uniform": "uniform",
        "k7_weird": "weird",
        "k7_negative": "negative",
    }
    GRID_PREFIX = "grid_"

    # CLI exit codes
    EXIT_OK = 0
    EXIT_FAILURE = 1
    EXIT_IMPOSSIBLE = 2
