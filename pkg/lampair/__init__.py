"""lampair - exact λ-pairings of divergence-measure fields and BV functions"""

__version__ = "0.1.0"
__description__ = "Exact λ-pairing engine and identity checker"

from .bv import LambdaSelector, PiecewiseBV
from .checker import execute_checks, list_checks
from .config import Settings, load_settings
from .core import main
from .fields import DMField1D
from .logger import setup_logging
from .measures import BorelSet1D, Measure1D
from .pairing import pairing, pairing_by_decomposition, pairing_by_definition
from .parser import read_scenario
from .polynomials import PiecewisePoly
from .radial import RadialProfile
from .theorems import CheckReport

__all__ = [
    "main",
    "BorelSet1D",
    "Measure1D",
    "PiecewisePoly",
    "PiecewiseBV",
    "LambdaSelector",
    "DMField1D",
    "RadialProfile",
    "pairing",
    "pairing_by_definition",
    "pairing_by_decomposition",
    "CheckReport",
    "Settings",
    "load_settings",
    "read_scenario",
    "execute_checks",
    "list_checks",
    "setup_logging",
]
