"""Geometric-algebra Bell-test laboratory.

Sign, vector and bivector (Cl(3,0)) hidden-variable models, their correlation
functions and CHSH values, and an audit showing that every local +/-1 readout
of the bivector outcomes stays within |S| <= 2.
"""
from .chsh import (CLASSICAL_BOUND, TSIRELSON, ChshResult, ChshSettings, chsh_value,
                   correlation_scan, max_deterministic_S, optimal_planar_settings)
from .correlators import (EXACT, AlgebraicCorrelation, CorrelationEstimate, Exact, MonteCarlo,
                          algebraic_correlation, correlator, exact_correlation_formula, mc,
                          scalar_product_correlation, sign_correlation)
from .errors import BellGAError, ContractViolation, InvalidInputError, ResourceLimitError
from .extraction import (AuditReport, ExtractionMap, audit_bell_bound, axis_reference,
                         compare_correlators, component_parity, extract_sign, orientation_sign,
                         table_map)
from .ga import (I, BivectorOutcome, Direction, Multivector, Orientation, bivector_outcome, cross,
                 dot, geometric_product, grade_projection, outcome_product, wedge)
from .kernels import BACKEND
from .models import (ResponseTable, SignHidden, VectorOutcomePair, bivector_model_outcomes,
                     draw_sign, enumerate_strategies, sign_model_outcomes, sign_source,
                     vector_model_outcomes)

__version__ = "0.1.0"
