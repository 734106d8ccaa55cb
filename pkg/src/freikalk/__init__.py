"""Fox calculus, Magnus expansions and freedom tests for subgroups of one-relator quotients."""

__version__ = "0.1.0"

from .errors import FreikalkError, Inconclusive, InternalInconsistency, ParseError
from .words import FreeGroup, SubgroupBasis, Word, commutator, conjugate, left_normed
from .grammar import parse_ring, parse_word, parse_words
from .ring import GammaQuotient, QuotRingElement, RingElement
from .fox import derivative_vector, derive, fundamental_decomposition
from .magnus import INF, TruncSeries, basic_commutators, expand, ideal_valuation, lcs_class
from .schreier import SchreierSystem
from .filtration import FiltrationSignature, LevelIndex, LevelQuotient, in_level
from .jacobian import fox_jacobian, select_generators, triangularize
from .freiheit import Bounds, freiheit_check
from .oracle import SampleSpec, falsify_freedom

__all__ = [
    "__version__",
    "FreikalkError", "Inconclusive", "InternalInconsistency", "ParseError",
    "FreeGroup", "SubgroupBasis", "Word", "commutator", "conjugate", "left_normed",
    "parse_ring", "parse_word", "parse_words",
    "GammaQuotient", "QuotRingElement", "RingElement",
    "derivative_vector", "derive", "fundamental_decomposition",
    "INF", "TruncSeries", "basic_commutators", "expand", "ideal_valuation", "lcs_class",
    "SchreierSystem",
    "FiltrationSignature", "LevelIndex", "LevelQuotient", "in_level",
    "fox_jacobian", "select_generators", "triangularize",
    "Bounds", "freiheit_check",
    "SampleSpec", "falsify_freedom",
]
