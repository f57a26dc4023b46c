//! Matching preclusion and fractional matching preclusion numbers of graphs,
//! computed exactly over the rationals by several independent routes.

pub mod error;
pub mod flows;
pub mod generators;
pub mod graph;
pub mod io;
pub mod lp;
pub mod matching;
pub mod preclusion;
pub mod rational;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{bipartition, cartesian_product, Bipartition, Graph};
pub use preclusion::{Limits, Method, PreclusionReport};
pub use rational::Rational;
