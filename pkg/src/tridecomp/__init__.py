"""Triple-decomposition key exchange and its conjugacy-search cryptanalysis.

Subpackages:

* :mod:`tridecomp.braids` - exact braid-group arithmetic (left-weighted
  normal forms, band subgroups, strand support);
* :mod:`tridecomp.groups` - the platform layer shared by braid and
  permutation realisations of the protocols;
* :mod:`tridecomp.linalg` - dense linear algebra over prime fields and the
  specialised Burau matrices;
* :mod:`tridecomp.protocol` - the key-exchange protocols, presets and
  transcript formats;
* :mod:`tridecomp.attack` - sample manufacturing, conjugacy-search solvers
  and the end-to-end attack flows;
* :mod:`tridecomp.identities` - the algebraic-identity verification suite;
* :mod:`tridecomp.experiment` and :mod:`tridecomp.cli` - batch experiments
  and the command-line front end.
"""

__version__ = "0.1.0"
