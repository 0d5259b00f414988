"""Four-group decodable distributed differential space-time codes for relay networks."""

from .algebra import AlgebraElement, left_regular_rep, sigma
from .codebook import Codebook, materialize
from .design import LinearDesign, build_design
from .harness import ExperimentSpec, build_code, sweep
from .relays import RelaySystem, build_relays
from .signalset import SignalSet, build_signalset

__all__ = [
    "AlgebraElement", "Codebook", "ExperimentSpec", "LinearDesign", "RelaySystem", "SignalSet",
    "build_code", "build_design", "build_relays", "build_signalset", "left_regular_rep",
    "materialize", "sigma", "sweep",
]
__version__ = "0.1.0"
