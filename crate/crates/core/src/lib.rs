pub mod berger;
pub mod cli;
pub mod bounds;
pub mod error;
pub mod hamilton;
pub mod input;
pub mod predicates;
pub mod report;
pub mod tensor;

pub use error::{Error, Result};
