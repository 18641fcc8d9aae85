"""Quench responses of the transverse-field XY chain as probes of quantum critical regions."""

__version__ = "0.1.0"

from .detector import Quantity, QuenchResponse, TimeSearchConfig, detect_tstar, map_qcr, map_qcr_all
from .lattice import ModelParams, QuenchProtocol, antiperiodic_grid, make_grid
from .modes import QuenchTrajectory, TwoSiteState, two_site_state
from .observables import energy_absorbed, log_negativity, mutual_information, negativity

__all__ = [
    "ModelParams", "QuenchProtocol", "Quantity", "QuenchResponse", "QuenchTrajectory",
    "TimeSearchConfig", "TwoSiteState", "antiperiodic_grid", "detect_tstar", "energy_absorbed",
    "log_negativity", "make_grid", "map_qcr", "map_qcr_all", "mutual_information", "negativity",
    "two_site_state",
]
