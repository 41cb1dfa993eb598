//! The groups `Γ_{n,s}` through their homotopy-equivalence model, and the
//! stabilization homomorphisms between them.

mod automorphism;
mod element;
pub mod presentation;
mod word;

pub use automorphism::{is_inner, FreeAutomorphism};
pub use element::{nielsen_generators, random_element, ElementJson, Filled, GammaElement, OuterClass};
pub use word::Word;
