//! Toolkit for graph saturation numbers: exact sat(n, F) at desk scale,
//! verified constructions and closed-form values, structural checkers for
//! cycle-saturated graphs, and an executable discharging audit for even
//! cycles with exact rational weights.

pub mod canon;
pub mod constructions;
pub mod cycle_lemmas;
pub mod discharging;
pub mod dot;
pub mod error;
pub mod exact;
pub mod graph;
pub mod graph6;
pub mod multipartite;
pub mod pattern;
pub mod rat;
pub mod saturation;
pub mod upper_search;

pub use error::{Error, Result};
pub use graph::{degree_two_paths, is_starlike, Graph, Path, Starlike, VertexSet};
pub use pattern::{contains, count_copies, creates_on_edge, Embedding, Pattern};
pub use saturation::{greedy_saturate, is_free, verify_saturated, PairOrder, SaturationCertificate};
