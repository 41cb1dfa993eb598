//! Finite chain complexes: `Δ(Z)`, the pattern quotient, the spine quotient
//! and the stabilization maps between spine quotients.

mod delta;
mod pattern;
mod simplicial;
mod spine;
mod stabilization;

pub use delta::{delta_cells, delta_construction, delta_homology_check, DeltaCheck};
pub use pattern::{check_semi_simplicial, pattern_cells, pattern_face, pattern_key, pattern_quotient};
pub use simplicial::SimplicialComplex;
pub use spine::{spine_query, spine_quotient, spine_quotient_from_graphs, SpineCell, SpineComplex, SpineOptions, DEFAULT_BUDGET};
pub use stabilization::{stabilization_chain_map, StabilizationKind};
