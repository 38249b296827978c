"""fusionseed: exact F_p matrix-group engine for the simple-fusion-system
criterion at Sylow order p, with the S = A x| U structural toolkit."""

__all__ = [
    "CriterionReport", "DeltaSubgroup", "FpMatrix", "FpModule", "MatGroup",
    "Prime", "Subspace", "SylowData", "class_GG", "compute_gvee",
    "enumerate_admissible", "evaluate", "mu_image", "o_pprime",
]

from .criterion import ENGINE_VERSION as __version__  # noqa: F401
from .criterion import CriterionReport, enumerate_admissible, evaluate  # noqa: F401
from .gfp import FpMatrix, Prime, Subspace  # noqa: F401
from .grp import MatGroup, SylowData, class_GG, o_pprime  # noqa: F401
from .modrep import FpModule  # noqa: F401
from .mu import DeltaSubgroup, compute_gvee, mu_image  # noqa: F401
