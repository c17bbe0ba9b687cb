"""
sullivan

Combinatorial 1-Sullivan diagrams: cell enumeration for the four flavors,
exact integral homology, discrete Morse flows, and the named homology classes
with their Hochschild operations.
"""

import logging
from logging import NullHandler

from .chain import Chain
from .complex import ChainComplex, build_complex
from .controller import SullivanController
from .diagram import Diagram, GhostSurface, boundary, face
from .homology import HomologyGroup, homology
from .models import Flavor
from .morse import build_matching, morse_complex
from .permutation import Permutation

# silent unless the caller sets up logging; the CLI installs its own handler
logging.getLogger(__name__).addHandler(NullHandler())

__version__ = "0.1.0"

__all__ = [
    "Chain",
    "ChainComplex",
    "Diagram",
    "Flavor",
    "GhostSurface",
    "HomologyGroup",
    "Permutation",
    "SullivanController",
    "boundary",
    "build_complex",
    "build_matching",
    "face",
    "homology",
    "morse_complex",
    "__version__",
]
