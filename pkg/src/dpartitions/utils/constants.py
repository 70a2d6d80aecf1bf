# stdlib
import os


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"Invalid integer for {name}: {raw!r}")


DEFAULT_PRECISION = _env_int("DPARTITIONS_PRECISION", 256)
MIN_PRECISION = 64
if DEFAULT_PRECISION < MIN_PRECISION:
    raise ValueError(
        f"DPARTITIONS_PRECISION must be at least {MIN_PRECISION}, got {DEFAULT_PRECISION}"
    )

# exact layer
MAX_SERIES_LENGTH = _env_int("DPARTITIONS_MAX_SERIES", 200_000)
ORACLE_CAP = _env_int("DPARTITIONS_ORACLE_CAP", 60)

# quadrature: mpmath degree m uses on the order of 3 * 2**m nodes per subinterval
QUADRATURE_MAX_DEGREE = 10

# threshold search
STABILITY_WINDOW = 1000
SCAN_LIMIT = 1_000_000

DEFAULT_JOBS = _env_int("DPARTITIONS_JOBS", 1)

# |V_s - Bessel form| <= beta_s * sqrt(2) / (24n + 1) * exp(3pi/4 sqrt(n/3))
BESSEL_GAP_BETA = {1: 1, 2: 11, 4: 1349}

# Err_t numerators
ERR_MAJOR_COEFF = 14381
ERR_XI_COEFF = 945285959087
ERR_MINOR_COEFF = 9
