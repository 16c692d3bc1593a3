"""Deduction over taxonomic-probabilistic knowledge bases.

Answers interval-probability queries over conjunctive events two ways: a
local engine that saturates guarded inference rules to a fixpoint, and a
globally complete oracle that solves exact linear programs over the
taxonomy-consistent atomic events.  Running both surfaces the gap between
local and global deduction for any given knowledge base.
"""

from .chains import (ChainPremise, ConsistencyVerdict, build_chain,
                     check_consistency)
from .engine import (DeductionState, EngineConfig, TraceStep, local_query,
                     saturate, seed_state, survey_chains)
from .errors import (AtomSpaceError, CoherenceError,
                     ProbabilisticConflictError, TaxprobError,
                     UnknownEventError)
from .events import (BOTTOM, TOP, AtomicEvent, BasicEvent, ConjunctiveEvent,
                     Universe, atom_implies, conjoin, conjunction,
                     enumerate_atoms, normalize_event)
from .intervals import EMPTY_ANSWER, Interval, fmt_decimal
from .kb import (CoherenceViolation, KnowledgeBase, ProbabilisticFormula,
                 QueryAnswer, validate_coherence)
from .kbformat import (Diagnostic, KbFormatError, ParsedKb, parse_goal,
                       parse_kb, render_kb)
from .oracle import (AtomSystem, build_atom_system, entails_bruteforce,
                     kb_satisfiable, max_event_probability, tight_answer)
from .rules import (ALL_RULES, RuleConclusion, RuleOutput, apply_all,
                    chaining, combination, fusion, sharpening, swap_chain)
from .taxonomy import (ClosureResult, GuardFlags, TaxonomicFormula,
                       TaxonomyStore)

__version__ = "0.1.0"
