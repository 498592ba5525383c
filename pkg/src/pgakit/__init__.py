"""Single-pass instruction sequences: parsing, thread extraction, services,
jump-free compilation, goto projections and bisimulation."""

from ._kernel import BACKEND
from .canonical import CanonicalSequence, canonicalize, seq_equal, to_term, unfold
from .extraction import check_table5, extract
from .goto import (
    collapse_jump_chains,
    metrics,
    project_bounded,
    project_unbounded,
    tgt,
)
from .jumpfree import (
    DEADLOCK_ONLY,
    STOP_ONLY,
    NormalFormSpec,
    compile,
    to_normal_form,
    verify_theorem1,
)
from .services import (
    RegisterBank,
    Reply,
    ServiceTable,
    apply_bank,
    apply_use,
    boolean_register,
    derive,
    reply,
)
from .syntax import PGA, BoundedPGAg, PGAg, parse, render, validate_dialect
from .thread import (
    ThreadSpec,
    bisimilar,
    format_spec,
    minimize,
    parse_spec,
    project,
    residuals,
    simulate,
)

__version__ = "0.1.0"
