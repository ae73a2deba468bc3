"""KNN spectral clustering and AnchorNN, its anchor-based linear-time variant."""

from .cluster import ClusterConfig, anchornn_cluster, sample_anchors, spectral_cluster
from .errors import ConvergenceError, DataError, InputError
from .geometry import PointSet
from .metrics import adjusted_rand_index, rand_index
from .partition import Partition
from .synth import SynthSpec, generate
from .theory import ScalingConfig, recommended_K

__version__ = "0.1.0"

__all__ = [
    "ClusterConfig",
    "ConvergenceError",
    "DataError",
    "InputError",
    "Partition",
    "PointSet",
    "ScalingConfig",
    "SynthSpec",
    "adjusted_rand_index",
    "anchornn_cluster",
    "generate",
    "rand_index",
    "recommended_K",
    "sample_anchors",
    "spectral_cluster",
]
