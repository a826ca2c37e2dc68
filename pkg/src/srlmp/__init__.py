"""List message-passing decoding and density evolution for non-binary LDPC codes on the QSC."""

from .gf import FieldSpec, field
from .ensembles import DegreeDistribution, parse_degree_distribution, qsc_capacity, shannon_limit
from .qsc import QscParams
from .schedule import ReliabilitySchedule
from .tanner import TannerGraph, load_qalist, peg_construct, save_qalist
from .decoder import DecoderConfig, SrlmpDecoder, decode

__all__ = [
    "FieldSpec", "field", "DegreeDistribution", "parse_degree_distribution", "qsc_capacity",
    "shannon_limit", "QscParams", "ReliabilitySchedule", "TannerGraph", "load_qalist",
    "peg_construct", "save_qalist", "DecoderConfig", "SrlmpDecoder", "decode",
]
