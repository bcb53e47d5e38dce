"""Classical and quantum information toolkit.

Modules:

* ``states``   - density matrices, measurements, channels, purification
* ``entropy``  - Shannon entropy and the classical measure family
* ``qentropy`` - von Neumann entropy, Holevo bound, fidelities
* ``codes``    - GF(2) linear codes, syndrome decoding, CSS quantum codes
* ``typical``  - typical sets, block compression, quantum compression
* ``capacity`` - classical channel capacity and product-state estimates
* ``bb84``     - Monte-Carlo BB84 key distribution with CSS reconciliation
* ``cli``      - the ``qinfo`` command-line entry point
"""

from . import bb84, capacity, codes, entropy, formats, qentropy, rng, states, typical

__all__ = [
    "bb84",
    "capacity",
    "codes",
    "entropy",
    "formats",
    "qentropy",
    "rng",
    "states",
    "typical",
]

__version__ = "0.1.0"
