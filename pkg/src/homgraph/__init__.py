"""Homomorphism submodule graphs of finite modules.

Vertices are the proper submodules of a finite module M over one of four
supported commutative ring families; two vertices N1, N2 are adjacent
when Hom(N1, M/N2) or Hom(N2, M/N1) is nonzero.  The package builds the
graph exactly, analyzes it, and runs an executable registry of
structural claims over zoos of small modules.
"""
from .claims import (
    ClaimVerdict,
    ModuleZoo,
    SocleProbeReport,
    Witness,
    build_instance,
    claim_ids,
    enumerate_zoo,
    module_isomorphic,
    noniso_certificate,
    reconstruction_experiment,
    run_claim_suite,
    socle_probe,
    verdicts_to_csv,
    verdicts_to_json,
)
from .errors import (
    CapExceeded,
    HomgraphError,
    InternalInconsistency,
    LocalityRequired,
    NotApplicable,
    SpecError,
)
from .graphkit import (
    Graph,
    SpectrumReport,
    are_isomorphic,
    build_graph,
    export_graph,
    graph_properties,
    is_chordal,
    is_complete,
    is_connected,
    is_vertex_transitive,
    spectrum,
)
from .homcore import (
    HomStructure,
    adjacent,
    hom_oracle,
    hom_structure,
    present_quotient,
    present_submodule,
)
from .lattice import (
    Submodule,
    SubmoduleLattice,
    enumerate_submodules,
    is_uniserial,
    socle_node,
)
from .modcore import (
    Caps,
    DEFAULT_CAPS,
    ModulePresentation,
    RingSpec,
    composition_length,
    direct_sum,
    field_module,
    is_semisimple,
    kxy_module,
    kxy_preset,
    parse_module_spec,
    prod_module,
    socle,
    spec_string,
    zmod_module,
)

__version__ = "0.1.0"
