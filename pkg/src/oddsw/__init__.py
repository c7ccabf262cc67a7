"""Bulk-edge correspondence for rotating shallow water with odd viscosity on a half-plane."""
from .algebra import C2, HalfInt, OriginHit, UnderResolved, numeric_winding, open_arg_increment
from .boundary import (BoundaryData, DDParams, DNParams, Family, NDParams, NNParams, build, classify,
                       dirichlet, no_flux_bc, is_phs, is_self_adjoint, is_self_adjoint_full, kx_shift,
                       rank_failures, von_neumann_U)
from .bulk import BandLabel, PhysParams, band_rim, chern_numeric, hamiltonian, omega_plus
from .indices import (IndexVector, OnSurface, ParabolaCurve, Verdict, index_B, index_E, index_I,
                      index_P, index_vector, nd_from_reduced, nn_from_reduced, winding_N)
from .oracles import (count_mergers, levinson_estimate, levinson_total, numeric_B, numeric_W_infty,
                      trace_branches)
from .scattering import g_leading, jost_g, s_amplitude

__version__ = "0.1.0"

__all__ = [
    "C2", "HalfInt", "OriginHit", "UnderResolved", "numeric_winding", "open_arg_increment",
    "BoundaryData", "DDParams", "DNParams", "Family", "NDParams", "NNParams", "build", "classify",
    "dirichlet", "no_flux_bc", "is_phs", "is_self_adjoint", "is_self_adjoint_full", "kx_shift",
    "rank_failures", "von_neumann_U",
    "BandLabel", "PhysParams", "band_rim", "chern_numeric", "hamiltonian", "omega_plus",
    "IndexVector", "OnSurface", "ParabolaCurve", "Verdict", "index_B", "index_E", "index_I",
    "index_P", "index_vector", "nd_from_reduced", "nn_from_reduced", "winding_N",
    "count_mergers", "levinson_estimate", "levinson_total", "numeric_B", "numeric_W_infty",
    "trace_branches", "g_leading", "jost_g", "s_amplitude",
]
