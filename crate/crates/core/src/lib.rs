pub mod canon;
pub mod complexes;
pub mod enumerate;
pub mod error;
pub mod gamma;
pub mod graph;
pub mod homology;
pub mod verify;

pub use canon::{canonical_form, canonicalize, CanonicalGraph};
pub use error::{Error, Result};
pub use graph::{Forest, ForestFlag, ThornedGraph};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/group.md")]
    mod group {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/stabilization.md")]
    mod stabilization {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
