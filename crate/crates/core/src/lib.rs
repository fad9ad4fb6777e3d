pub mod cli;
pub mod error;
pub mod fock;
pub mod liouvillian;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod special;
pub mod wigner;

pub use error::{Error, Result};
