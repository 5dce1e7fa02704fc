//! Exactly computable division-ring models (D, N), the graphs supported by
//! the quotients D^x/N, the ordered quotients Gamma_{y*} built from the sets
//! N(y), classification of the canonical maps phi_{y*} (leveled, strongly
//! leveled, valuation-like), and a small valuation laboratory (congruence
//! openness, generated subrings, basis searches, tame-symbol certificates).
//!
//! Entry points:
//! * [`models::ModelHandle`] — build a model from a [`models::ModelSpec`];
//! * [`graphs`] — commuting / Milnor / kappa / minimal centralizer graphs,
//!   V-graph axiom checks, metrics and DOT export;
//! * [`order`] — N(y), P_{y*}, the preorder, U_{y*}, Gamma_{y*}, phi_{y*};
//! * [`levels`] — (strongly) leveled and valuation-like classification,
//!   diameter theorems on instances, the path-breaking symmetry property;
//! * [`lab`] — valuations, congruence openness, generated rings, quotient
//!   decompositions, basis searches and tame symbols;
//! * [`report`] — deterministic JSON reports for the CLI.

pub mod error;
pub mod gf;
pub mod group;
pub mod poly;
pub mod qadic;

pub mod models;

pub mod graphs;
pub mod lab;
pub mod levels;
pub mod order;
pub mod report;

pub use error::{Error, Result};
