pub mod claims;
pub mod cli;
pub mod codes;
pub mod error;
pub mod field;
pub mod fixed;
pub mod lattice;
pub mod quad;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
