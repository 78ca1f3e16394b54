from enum import Enum


class Measure(Enum):
    TAU = "tau"
    TAU_X = "tau_x"
    TAU_X_HAT = "tau_x_hat"
    D_KS = "d_ks"
    D_PKS = "d_pks"
    D_NPKS = "d_npks"

    @classmethod
    def from_name(cls, name: str) -> "Measure":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(
                f"Unknown measure '{name}', expected one of "
                f"{', '.join(m.value for m in cls)}"
            )


# Measures the consensus problem can be solved for
AGGREGATION_MEASURES = (Measure.TAU_X, Measure.TAU_X_HAT)

# Mapping aggregation measure to its matrix and paired distance
MEASURE_CONFIGS = {
    Measure.TAU_X: {"matrix": "CR", "distance": Measure.D_PKS, "scaled": False},
    Measure.TAU_X_HAT: {"matrix": "SCR", "distance": Measure.D_NPKS, "scaled": True},
}

VERSION = "0.1.0"
FORMAT_VERSION = 1  # Rankings CSV/JSON, instance JSON and report manifests

# Measures
GAMMA = 4  # Minimum d_KS distance unit divisor; 4 gives ties a half flip

# Rankings
ENUMERATION_CAP = 8  # Largest n for exhaustive weak-order enumeration
NULL_TOKENS = ("", "NA")  # Unranked cell spellings accepted in CSV files
NULL_OUTPUT = "NA"  # Unranked cell spelling written to CSV files

# Aggregation
EXACT_DENOMINATOR_CAP = 2**40  # Larger SCR lcm denominators fall back to floats
TIE_TOLERANCE = 1e-9  # Only used when the matrix is not exact

# Branch and bound
NODE_LIMIT = None  # Interactive solves run to completion unless told otherwise
TIME_LIMIT = None  # Seconds
TIME_CHECK_INTERVAL = 1024  # Nodes between wall-clock checks
COMPLETION_BOUND = True  # Add minimum penalties of undecided pairs when pruning

# Sampling
SPAMMER_PHI_RANGE = (0.75, 1.0)  # Half-open (low, high]
MAX_EXACT_PMF_N = 8  # Largest n for enumerating all n! permutations

# Experiments
EXPERIMENT_N = 8
EXPERIMENT_K = 25
EXPERIMENT_SEEDS = 10
EXPERIMENT_BASE_SEED = 0
EXPERIMENT_SIZE_RANGE = (2, 6)
EXPERIMENT_PHI_GRID = (0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95)
EXPERIMENT_NODE_LIMIT = 5_000_000
EXPERIMENT_WORKERS = 1  # 1 solves inline, more uses a process pool

# Fairness experiment
FAIRNESS_K = 20
FAIRNESS_PHI_GRID = (0.05, 0.1, 0.15, 0.2, 0.25)  # Majority, and contrarians alongside it
FAIRNESS_ALPHAS = (0.05, 0.1, 0.15, 0.2)
FAIRNESS_MAJORITY_SIZE_RANGE = (2, 4)
FAIRNESS_MINORITY_SIZE_RANGES = ((2, 4), (5, 7))
FAIRNESS_SPAMMER_PHI_GRID = (0.8, 0.85, 0.9, 0.95, 1.0)  # Paired with FAIRNESS_PHI_GRID by index

# Logging
LOG = True
LOG_LEVEL = "warning"  # Possible values: debug, info, warning, error, critical
LOG_TO_FILE = False
LOG_FILE = "concordia.log"
LOG_TO_UI = True

# Output
FLOAT_FORMAT = ".12g"  # Numbers printed by the CLI
