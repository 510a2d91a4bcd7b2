"""Belief revision by relaxing sentences, over bounded satisfaction systems."""

from .core import (
    KnowledgeBase, ModelSet, SatisfactionSystem, cn_equal, entails, is_consistent, models_of,
)
from .errors import ParseError, RelaxrevError, RevisionFailed, SignatureError
from .revision import (
    COHERENT, MINIMAL, Relaxation, RelaxationVector, RevisionConfig, RevisionOperator,
    RevisionResult, revise,
)

__version__ = "0.1.0"

__all__ = [
    "KnowledgeBase", "ModelSet", "SatisfactionSystem", "cn_equal", "entails", "is_consistent",
    "models_of", "ParseError", "RelaxrevError", "RevisionFailed", "SignatureError", "COHERENT",
    "MINIMAL", "Relaxation", "RelaxationVector", "RevisionConfig", "RevisionOperator",
    "RevisionResult", "revise", "__version__",
]
