from enum import Enum

# Fully connected IPU size used throughout the experiments.
DEFAULT_CAPACITY = 1024
DEFAULT_MC_STEPS = 10_000
DEFAULT_NUM_REPLICAS = 8
DEFAULT_EXCHANGE_INTERVAL = 1
DEFAULT_MAX_ITERS = 30

# The exact oracle enumerates 2**n assignments.
BRUTE_FORCE_MAX_VARIABLES = 24

DEFAULT_SA_ITERATIONS = 10_000
M2SP_SA_ITERATIONS = 15_000
# Ratio per temperature step; the steps are spread over the move budget so
# the last one ends at SA_FINAL_TEMPERATURE_RATIO times the start.
DEFAULT_SA_COOLING = 0.995
SA_FINAL_TEMPERATURE_RATIO = 1e-3
SA_TEMPERATURE_SAMPLES = 100

# Dense eigendecomposition bound for the spectral ordering.
SPECTRAL_MAX_VERTICES = 4096

SUMMARY_FILE_NAME = "summary.csv"
METADATA_FILE_NAME = "metadata.json"


class Method(str, Enum):
    UQUBOLS = "uqubols"
    CQUBOLS = "cqubols"
    QLS = "qls"
    SA = "sa"


class InitPolicy(str, Enum):
    RANDOM = "random"
    SPECTRAL = "spectral"
    GIVEN = "given"


class SelectionPolicy(str, Enum):
    GREEDY = "greedy"
    RANDOM = "random"


class PenaltyMode(str, Enum):
    UNIFORM = "uniform"
    PER_CONSTRAINT = "per-constraint"


class Rounding(str, Enum):
    NONE = "none"
    NEAREST = "nearest"


class ProblemKind(str, Enum):
    QAP = "qap"
    M2SP = "m2sp"
    TSP = "tsp"
    GP = "gp"


class TspFormat(str, Enum):
    MATRIX = "matrix"
    COORDINATES = "coordinates"
