pub mod convexity;
pub mod error;
pub mod harness;
pub mod integral;
pub mod lattice;
pub mod pixellation;
pub mod rational;
pub mod valuations;

pub use error::{Error, Result};
pub use rational::Rational;
