pub mod cliquewidth;
pub mod ef;
pub mod error;
pub mod interpret;
pub mod interval;
pub mod kernel;
pub mod logic;
pub mod numerics;

pub use error::{Error, Result};
