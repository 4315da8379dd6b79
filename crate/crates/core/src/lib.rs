//! Latin bitrades, their exact linear systems, triangle dissections,
//! trigon splitting and abelian group embeddings.

pub mod arith;
pub mod bitrade;
pub mod cli;
pub mod corpus;
pub mod dissection;
pub mod group;
pub mod homotopy;
pub mod io;
pub mod isotopy;
pub mod system;
pub mod trigon;

pub use bitrade::{build_bitrade, Bitrade, BitradeError, BitradeInput, Label, Metrics, Role, Triple};
