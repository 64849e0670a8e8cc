//! Fair allocation of indivisible goods under matroid constraints.

pub mod algorithms;
pub mod bench;
pub mod constraints;
pub mod error;
pub mod fairness;
pub mod generate;
pub mod io;
pub mod matroid;
pub mod model;
pub mod optimize;
pub mod oracle;
pub mod report;
pub mod value;

pub use error::{Error, Result};
pub use matroid::{Matroid, MatroidSpec};
pub use model::{Agent, Allocation, Constraint, Instance, Item};
pub use value::Value;
