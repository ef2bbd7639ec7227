"""Transaction anomaly detection: autoencoder scoring, binary bat feature
selection, imbalance-aware sampling and evaluation metrics.

The heavy lifting lives in the compiled extension; this package re-exports it.
"""

from fraudpipe._core import *  # noqa: F401,F403
from fraudpipe._core import __doc__  # noqa: F401

__version__ = "0.1.0"
