"""Token games on root systems deciding Schubert-class vanishing.

The package plays a combinatorial token game over the positive roots of
a reductive group (or of an inclusion of groups) whose outcomes certify
vanishing and nonvanishing of Schubert intersection numbers and
branching coefficients, and ships an independent exact cohomology
oracle plus sweep harnesses that verify the two against each other.
"""

from .roots import (GroupSpecError, IdealSubset, ResourceBudgetError, Root,
                    RootSystem, build_root_system, enumerate_order_ideals)
from .weyl import (WeylElement, WeylParseError, all_elements, bruhat_leq,
                   compose, format_element, identity, inverse, inversion_set,
                   long_element, parse_element, reduced_word, reflection,
                   simple_reflection)
from .embedding import (Embedding, EmbeddingSpecError, build_embedding,
                        raw_table_embedding)
from .game import (FREE, TOP, IllegalStepError, MergeStep, MoveStep, Position,
                   SplitStep, Status, apply_merge, apply_move, apply_step,
                   initial_position, is_splitting_subset, legal_merges,
                   legal_moves, qualifying_splits, split, split_maximally,
                   status)
from .solver import (ReplayError, SolverConfig, Verdict, replay,
                     replay_position, solve, solve_position)
from .oracle import (ExactPolynomial, OracleConsistencyError, SchubertVector,
                     branching_expand, chevalley_table, divided_difference,
                     intersection_bgg, intersection_number, ring_for)
from .sweeps import SUITES, SweepReport, run_suite

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
