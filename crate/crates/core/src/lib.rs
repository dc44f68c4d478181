pub mod error;
pub mod examples;
pub mod groupring;
pub mod groups;
pub mod homotopy;
pub mod intlinalg;
pub mod isotopy;
pub mod manifold;
pub mod random;
pub mod report;
pub mod target;

pub use error::{Error, Result};
