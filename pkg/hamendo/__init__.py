"""Singular endomorphisms of generalized Hamming graphs"""

import logging

from hamendo._version import __version__

logging.getLogger("hamendo").addHandler(logging.NullHandler())
