"""Exact-rational chamber structure, inflation and strata for blown-up
irrational ruled surfaces M_g # n(-CP^2)."""

from .cone import (AreaVector, ChamberSignature, WallCrossing, area, chamber_interval,
                   cone_contains, exceptional_set, is_reduced, parse_vector, pd_class,
                   same_chamber, section_candidates, segment_walls, slice_arrangement)
from .errors import ConeCalcError
from .homlattice import (HomologyClass, ManifoldDescriptor, adjunction_genus, canonical_class,
                         codim, format_class, is_exceptional_class, is_reduction_class, pair,
                         parse_class, riemann_index)
from .inflation import (InflationPath, InflationStep, alternating_inflation, inflate_once,
                        normalize_vector, plan_path, section_descent)
from .strata import (Decomposition, JProfile, StratumLabel, admissible_codim,
                     classify_decomposition, classify_profile, cover_pairing,
                     enumerate_decompositions)

__version__ = "0.1.0"
