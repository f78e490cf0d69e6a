"""Defeasible conditional obligations over bi-preferential models.

Worlds are ordered twice: by normality (from defaults, ranked by
specificity and compared lexicographically) and by ideality (from
obligations, compared by violation sets with more specific norms
excusing the ones they override). A constrained input/output logic engine
is included for comparing the two readings of conditional obligation.
"""

__version__ = "0.1.0"

from .formula import (
    NORMALITY, OBLIGATION, TOP, BOTTOM, Atom, Not, And, Or, Implies, Iff, Box, Diamond,
    Formula, Rule, Query, FormulaSyntaxError, NestingError,
    parse_boolean, parse_alethic, parse_query, parse_rule, pretty_print, atoms_of, rename_atoms,
)
from .propkernel import (
    MAX_ATOMS, Valuation, VocabularyOverflow, truth_table, models_of,
    pl_satisfiable, pl_entails, s5_consistent, s5_entails,
)
from .norms import (
    Theory, DefeatGraph, IncoherentDefaultsError, DuplicateRuleWarning,
    defeats, defeat_graph, coherent, incoherent_subset, materialization, contained_in,
)
from .normality import lm_sequence, ranked_partition, rank, tuple_of, lex_geq, max_normal
from .ideality import violation_set, ideality_geq, lifted_geq, max_ideal
from .model import (
    REPLETE, ALL_MODELS, Model, EntailmentResult, ResourceLimit,
    build_model, entails, eval_query, eval_exists_forall,
)
from .iol import (
    IOPair, MaxFamily, InconsistentInput, FaithfulnessReport,
    out4plus_contains, maxfamily, fullmeet_contains, rewrite_defeaters, faithfulness_check,
)
from .theoryfile import TheoryFile, TheoryFileError, load_theory, parse_theory_text, dump_theory
