pub mod config;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod liouvillian;
pub mod models;
pub mod observables;
pub mod steadystate;

pub use error::{Error, Result};
