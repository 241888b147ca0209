"""Exact solution theory of the O(1)-Kepler problems, with numerical verification.

Submodules: ``specialfn``, ``spectrum``, ``radial``, ``reps``, ``fock``,
``twist``, ``micz2d``, ``eigensolver`` and the ``cli``.
"""

__version__ = "0.1.0"
