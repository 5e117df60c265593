pub mod catalog;
pub mod corpus;
pub mod error;
pub mod gpt;
pub mod io;
pub mod numerics;
pub mod postprocessing;
pub mod reproduce;
pub mod simulation;

pub use error::{Error, Result};
