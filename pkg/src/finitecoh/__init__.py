"""Exact cohomology of finite groups with coefficients in free Z/n-modules."""
from .exactlinalg import *  # noqa: F401,F403
from .groups import *  # noqa: F401,F403
from .gmodules import *  # noqa: F401,F403
from .cohomology import *  # noqa: F401,F403
from .sha import *  # noqa: F401,F403
from .harness import SweepConfig, VerificationReport, certify_propdata, selftest, verify_structure  # noqa: F401

__version__ = "0.1.0"
