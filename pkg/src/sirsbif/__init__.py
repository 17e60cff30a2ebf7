"""Numerical bifurcation analysis of a planar SIRS model with incidence
x (1 + p x^(k-1)): equilibria and their types, degeneracy loci and
normal-form coefficients, focal values and weak-focus order, limit-cycle
detection by return maps, parameter sweeps, and a scenario CLI."""

from .errors import (BlowUp, ConfigError, ConvergenceError, DomainError,
                     IllConditioned, Inconclusive, NoReturn, SirsbifError,
                     StepSizeUnderflow, UnknownFigure)
from .model import (ModelParams, OriginalParams, State,
                    basic_reproduction_number, reduce_original_params,
                    taylor_expand, validate_params, vector_field)
from .series import BivariateSeries
from .equilibria import (CriticalStructure, EquilibriumKind, EquilibriumReport,
                         classified_equilibria, classify_equilibrium,
                         critical_structure, evaluate_H,
                         find_endemic_equilibria, trace_det)
from .degeneracy import (BTLocus, CuspCoefficients, DegenerateKind,
                         NilpotentFocusCoefficients, SaddleNodeLocus,
                         bogdanov_takens_locus, classify_degenerate,
                         cusp_coefficients, nilpotent_focus_analysis,
                         saddle_node_locus, unfolding_probe)
from .hopf import (FocalValues, HopfFactorValues, HopfLocus, closed_form_L,
                   closed_form_f1, factor_values, focal_values, hopf_locus,
                   weak_focus_order)
from .dynamics import (CycleScanResult, LimitCycleRecord, SweepResult,
                       Trajectory, bifurcation_sweep, find_limit_cycles,
                       integrate, poincare_return)
from .registry import (REGISTRY, FigureRegistryEntry, get_entry, list_figures,
                       reproduce_figure)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
