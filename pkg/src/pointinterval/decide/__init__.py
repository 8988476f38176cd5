"""Validity of definability queries over classes of linear orders."""

from .pointlogic import (
    DISCRETE_UNBOUNDED, DLO_CLOSED, DLO_LEFT, DLO_OPEN, DLO_RIGHT, DLO_THEORIES, PF, Theory,
    eval_qf, finite_chain, show, theory_by_name,
)
from .policy import (
    INVALID, POLICIES, VALID, VALID_ON_REPRESENTATIVES, ClassPolicy, Verdict, check_theory,
    decide_in, decide_validity,
)
from .qe import decide_sentence, qe, qe_dense, qe_discrete
from .testpoints import eval_testpoints, random_sentence
from .translate import translate, translate_open

__all__ = [
    "DISCRETE_UNBOUNDED", "DLO_CLOSED", "DLO_LEFT", "DLO_OPEN", "DLO_RIGHT", "DLO_THEORIES",
    "PF", "Theory", "eval_qf", "finite_chain", "show", "theory_by_name",
    "INVALID", "POLICIES", "VALID", "VALID_ON_REPRESENTATIVES", "ClassPolicy", "Verdict",
    "check_theory", "decide_in", "decide_validity",
    "decide_sentence", "qe", "qe_dense", "qe_discrete",
    "eval_testpoints", "random_sentence", "translate", "translate_open",
]
