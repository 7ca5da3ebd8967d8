"""Exact intersection calculus for pseudo-isomorphisms of blowups of P^3.

The cohomology and birational layers are exact (``fractions.Fraction``
throughout); :mod:`pseudoiso.lab` holds the floating-point pluripotential
checks.
"""

from .birational import (
    BtcComponent,
    DefectCycle,
    LadderEntry,
    PseudoIsoData,
    btc_check,
    btc_classify,
    curve_blowup_correction,
    defect_cycle,
    eq1_correction,
    identity_map,
    make_jx,
    negativity_witness,
    nic_check,
    nic_space,
    pullback11,
    pullback22,
    pushforward11,
    pushforward22,
    weak_btc_obstruction,
)
from .cohomology import (
    CurveCycle,
    DimensionError,
    DivisorClass,
    VarietyDescriptor,
    cone_probe,
    default_curves,
    eta0,
    pair,
    triple,
    wedge11,
)

__version__ = "0.1.0"

__all__ = [
    "BtcComponent",
    "CurveCycle",
    "DefectCycle",
    "DimensionError",
    "DivisorClass",
    "LadderEntry",
    "PseudoIsoData",
    "VarietyDescriptor",
    "btc_check",
    "btc_classify",
    "cone_probe",
    "curve_blowup_correction",
    "default_curves",
    "defect_cycle",
    "eq1_correction",
    "eta0",
    "identity_map",
    "make_jx",
    "negativity_witness",
    "nic_check",
    "nic_space",
    "pair",
    "pullback11",
    "pullback22",
    "pushforward11",
    "pushforward22",
    "triple",
    "weak_btc_obstruction",
    "wedge11",
]
