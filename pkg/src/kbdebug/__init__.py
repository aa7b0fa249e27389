"""Interactive knowledge-base debugging: localize minimal faulty axiom
sets in an inconsistent or incoherent KB and tell them apart by asking
oracle queries."""

from .bruteforce import (brute_force_minimal_conflicts,
                         brute_force_minimal_diagnoses, minimal_hitting_sets)
from .conflicts import quick_xplain
from .direct import InvHsTreeState, inv_hs_tree, inv_qx
from .hstree import HsTreeState, hs_tree_diagnoses
from .lang import Axiom, ParseError, parse_kb, parse_statement, serialize_statement
from .probability import (FaultModel, axiom_fault_prob, axiom_probabilities,
                          bayes_update, diagnosis_prior, normalize,
                          prior_belief)
from .queries import (Partition, Query, candidate_entailments,
                      ckk_query_search, classify_partition,
                      common_entailments, generate_query_pool, minimize_query)
from .reasoning import (Dpi, InadmissibleDpiError, TestCase, ValidityReport,
                        check_validity, dpi_from_dict, dump_dpi, entails,
                        is_coherent, is_consistent, load_dpi)
from .session import (RepairProposal, SessionConfig, SessionState,
                      next_query, non_interactive_debug, run_batch,
                      session_from_dict, session_to_dict, start_session,
                      stop_check, submit_answer)
from .store import SessionStore
from .strategies import (RioState, StrategyChoice, elimination_rate,
                         query_cautiousness, rio_update, score_entropy,
                         score_split, select_query)

__version__ = "0.1.0"

__all__ = [
    "Axiom", "Dpi", "FaultModel", "HsTreeState", "InadmissibleDpiError",
    "InvHsTreeState", "ParseError", "Partition", "Query", "RepairProposal",
    "RioState", "SessionConfig", "SessionState", "SessionStore",
    "StrategyChoice", "TestCase", "ValidityReport", "axiom_fault_prob",
    "axiom_probabilities", "bayes_update", "brute_force_minimal_conflicts",
    "brute_force_minimal_diagnoses", "candidate_entailments",
    "check_validity", "ckk_query_search", "classify_partition",
    "common_entailments", "diagnosis_prior", "dpi_from_dict", "dump_dpi",
    "elimination_rate", "entails", "generate_query_pool",
    "hs_tree_diagnoses", "inv_hs_tree", "inv_qx", "is_coherent",
    "is_consistent", "load_dpi", "minimal_hitting_sets", "minimize_query",
    "next_query", "non_interactive_debug", "normalize", "parse_kb",
    "parse_statement", "prior_belief", "query_cautiousness", "quick_xplain",
    "rio_update", "run_batch", "score_entropy", "score_split",
    "select_query", "serialize_statement", "session_from_dict",
    "session_to_dict", "start_session", "stop_check", "submit_answer",
]
