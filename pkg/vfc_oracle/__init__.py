"""
vfc-oracle - vertex-failure connectivity oracles

Preprocess a graph once for a failure budget k, then answer connectivity queries after
batches of up to k vertex failures, plus component counts for k-vertex cuts.
"""

from vfc_oracle.core import *  # noqa: F403
from vfc_oracle.services import *  # noqa: F403

__version__ = "0.1.0"


__all__ = [
    "__version__",
]
