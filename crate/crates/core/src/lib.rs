//! Group distance magic labelings of the direct products `G x C4` and
//! `G x C8`.
//!
//! A labeling assigns the elements of a finite Abelian group bijectively to
//! the vertices of a graph; it is distance magic when the labels on every
//! open neighborhood sum to one common element. The crate provides
//!
//! * [`abelian`]: groups as products of cyclic factors, canonical forms and
//!   enumeration up to isomorphism;
//! * [`graphs`]: graphs, named generators and direct products with cycles;
//! * [`labeling`]: labelings, weights, the verifier and the JSON file format;
//! * [`constructions`]: explicit labelings and per-group dispatchers;
//! * [`feasibility`]: obstructions and necessary conditions;
//! * [`search`]: an exhaustive backtracking oracle for small instances;
//! * [`cli`]: the command-line front end.

pub mod abelian;
pub mod cli;
pub mod constructions;
pub mod feasibility;
pub mod graphs;
pub mod labeling;
pub mod search;

pub use abelian::{enumerate_groups, Element, GroupSpec};
pub use constructions::{ConstructReport, Construction, Outcome};
pub use graphs::{GeneratorSpec, Graph, ProductVertex};
pub use labeling::{GraphSource, Labeling, VerifyReport};
pub use search::{SearchConfig, SearchOutcome, SearchStatus};
