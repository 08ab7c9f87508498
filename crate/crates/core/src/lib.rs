pub mod cli;
pub mod error;
pub mod harmonics;
pub mod extract;
pub mod field;
pub mod retrieve;
pub mod specfun;

pub use error::{Error, Result};
