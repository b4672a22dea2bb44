"""Locality classification for tripartite binary behaviors.

Decides, with certificates, where a 3-party/2-input/2-output behavior sits
in the hierarchy of multipartite locality classes

    LOCAL < NS2 < T2 < S2 < NS      (K2 between T2 and S2)

using exact rational linear programming, evaluates and canonicalizes Bell
expressions against the bundled 185-family inequality catalog, and builds
quantum behaviors from 3-qubit states with a seesaw optimizer.
"""

from .behavior import (Behavior, BipartiteMarginal, CorrelatorForm,
                       InvalidCorrelators, SignallingInput, behavior_from_dict,
                       behavior_to_dict, bipartite_marginal, from_correlators,
                       is_no_signalling, load_behavior, marginal, mix,
                       normalize_check, save_behavior, to_correlators,
                       uniform_behavior)
from .fixtures import (HiddenBitModel, corr1_t2_model, corr1_target,
                       ghz_witness_s2_model, ghz_witness_scenario,
                       s2_mixture)
from .inequalities import (BellExpression, CanonicalForm, Catalog,
                           CatalogMissing, canonicalize, dump_catalog,
                           enumerate_relabelings, expr_ordered_witness,
                           expr_split, expr_split_first, expr_split_second,
                           load_catalog, load_expression, relabel_behavior,
                           relabel_expression, save_expression, verify_bound,
                           verify_facet)
from .membership import (CLASSES, ClassifyResult, DecompositionCertificate,
                         SeparatingFunctional, build_system, classify,
                         maximize, split_check, threshold, verify_certificate)
from .quantum import (Observable, PureStateParams, QuantumScenario,
                      QuantumState, born_behavior, ghz_state, load_angles,
                      optimize_threshold, save_angles, scan_pure_states,
                      seesaw_maximize, w_state)
from .rational import RATIONAL_BACKEND, format_rational, parse_rational, rat
from ._kernels import KERNEL_BACKEND
from .vertices import (enumerate_local, enumerate_ns2, enumerate_one_way,
                       enumerate_s2_generators)

__all__ = [
    "Behavior", "BipartiteMarginal", "CorrelatorForm", "InvalidCorrelators",
    "SignallingInput", "behavior_from_dict", "behavior_to_dict",
    "bipartite_marginal", "from_correlators", "is_no_signalling",
    "load_behavior", "marginal", "mix", "normalize_check", "save_behavior",
    "to_correlators", "uniform_behavior",
    "HiddenBitModel", "corr1_t2_model", "corr1_target",
    "ghz_witness_s2_model", "ghz_witness_scenario", "s2_mixture",
    "BellExpression", "CanonicalForm", "Catalog", "CatalogMissing",
    "canonicalize", "dump_catalog", "enumerate_relabelings",
    "expr_ordered_witness", "expr_split", "expr_split_first",
    "expr_split_second", "load_catalog", "load_expression",
    "relabel_behavior", "relabel_expression", "save_expression",
    "verify_bound", "verify_facet",
    "CLASSES", "ClassifyResult", "DecompositionCertificate",
    "SeparatingFunctional", "build_system", "classify", "maximize",
    "split_check", "threshold", "verify_certificate",
    "Observable", "PureStateParams", "QuantumScenario", "QuantumState",
    "born_behavior", "ghz_state", "load_angles", "optimize_threshold",
    "save_angles", "scan_pure_states", "seesaw_maximize", "w_state",
    "RATIONAL_BACKEND", "KERNEL_BACKEND", "format_rational",
    "parse_rational", "rat",
    "enumerate_local", "enumerate_ns2", "enumerate_one_way",
    "enumerate_s2_generators",
]

__version__ = "0.1.0"
