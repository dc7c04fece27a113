# Shared schemas package
from .curvefrob_schemas import *
