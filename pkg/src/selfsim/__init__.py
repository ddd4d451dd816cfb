"""Self-similar group actions on rooted trees, built from virtual
endomorphisms of finite-index subgroups, with exact symbolic arithmetic.

The package provides:

* ``ring`` -- exact arithmetic in F_p, F_p[x], localized rings inverting a
  fixed polynomial basis, and multivariate Laurent analogues;
* ``matrix`` -- triangular/polynomial matrices over those rings;
* ``engine`` -- the generic wreath-recursion machinery: decomposition of a
  group element into a level permutation and subtree states, word actions,
  portraits, state breadth-first search, Mealy automaton extraction;
* ``instances`` -- four concrete families realizing the instance contract;
* ``tame`` -- exact-rational tameness degrees of character sets and the
  finiteness reports they back;
* ``cli`` -- the ``selfsim`` command-line front end.
"""

__version__ = "0.1.0"
