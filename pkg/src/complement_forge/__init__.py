"""complement-forge: additive complements of ternary block sets and what they build.

Library layout:

* ``ternary``  - exact base-3 integers/rationals, patterns, sumsets
* ``solver``   - greedy and exact-minimal complement search with certificates
* ``fractal``  - concatenation fractal specs, dimension ledgers, decompositions
* ``density``  - the floor-quotient density set A, its rational encoding, complements
* ``measure``  - box dimension, dyadic net measures, covering and mass-ratio checks
* ``catalog``  - persistent JSON catalog of codes and specs
* ``cli``      - the ``complement-forge`` command-line tool
"""

__version__ = "0.1.0"
