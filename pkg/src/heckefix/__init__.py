"""Exact arithmetic and fixed-point search tools for the sextic field Q(2cos(pi/21)).

Subpackages cover: the exact field layer (field), the CM quadratic extension
and norm equation (cmfield), CM-type and sign-vector combinatorics (cmtypes),
Schwarz triangle maps and hypergeometric numerics (triangle), the Hecke
fixed-point sweep with certificates (hecke), and the command line front end
(cli) with its ledger formats (ledger).
"""

__version__ = "0.1.0"
