# curvefrob: singularity and Frobenius-structure invariants of f restricted to g = t

# .env first, so LOG_LEVEL from it is seen by the logging setup
from curvefrob import config as _config  # noqa: F401

# Initialize logging configuration on import
from curvefrob.logging_config import get_logger as _get_logger  # noqa: F401
