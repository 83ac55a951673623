import os

ENV = os.getenv("RAINBOW_ENV", "production")
LOG_LEVEL = os.getenv("RAINBOW_LOG_LEVEL", "WARNING")

# Re-run the properness validator after every constructor / induced_subgraph call
DEBUG = os.getenv("RAINBOW_DEBUG", "").lower() in {"1", "true", "yes"} or ENV == "test"

DEFAULT_SEED = int(os.getenv("RAINBOW_DEFAULT_SEED", "0"))
DEFAULT_MAX_LEN = int(os.getenv("RAINBOW_MAX_LEN", "64"))
DEFAULT_RETRIES = int(os.getenv("RAINBOW_RETRIES", "8"))
DEFAULT_PAIR_RETRIES = int(os.getenv("RAINBOW_PAIR_RETRIES", "2"))

# Exhaustive oracles: a graph is in budget if it satisfies either bound
ORACLE_MAX_EDGES = int(os.getenv("RAINBOW_ORACLE_MAX_EDGES", "64"))
ORACLE_MAX_VERTICES = int(os.getenv("RAINBOW_ORACLE_MAX_VERTICES", "20"))
BRUTE_FORCE_MAX_VERTICES = int(os.getenv("RAINBOW_BRUTE_FORCE_MAX_VERTICES", "20"))

HYPERCUBE_MAX_DIM = int(os.getenv("RAINBOW_HYPERCUBE_MAX_DIM", "30"))

CELL_TIMEOUT_SECONDS = float(os.getenv("RAINBOW_CELL_TIMEOUT", "60"))
SCAN_WORKERS = int(os.getenv("RAINBOW_SCAN_WORKERS", "1"))
