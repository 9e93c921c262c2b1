//! GHZ-diagonal four-qubit states, tripartite entanglement witnesses and the
//! separability criteria built on them.

pub mod cli;
pub mod construct;
pub mod criteria;
pub mod error;
pub mod family;
pub mod ghz;
pub mod numeric;
pub mod optimizer;
pub mod reference;
pub mod witness;

pub use error::{Error, Result};
