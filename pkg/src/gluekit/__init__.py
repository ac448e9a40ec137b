"""Gluing finite topological spaces, sheaves and ringed spaces as limits
over a gluing index category, with exhaustive verification of the
characterization laws on finite instances."""

from .abgroups import AbHom, FgAbGroup
from .fintop import ContinuousMap, FinSpace, make_map, make_space
from .indexcat import GluingIndexCategory, canonicalize, enumerate_category
from .presheaves import Presheaf, is_sheaf, make_presheaf
from .ringedglue import RingedGluingFunctor, glue_ringed, verify_ringed_glued
from .rings import FinCommRing, is_local_ring, make_ring
from .sheafglue import SheafGluingData, build_limit_sheaf, verify_sheaf_glued
from .topglue import (
    TopGluingData,
    TopGluingFunctor,
    cover_functor,
    standard_representative,
    verify_glued,
)

__version__ = "0.1.0"
