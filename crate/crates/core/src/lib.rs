pub mod centered;
pub mod decomposition;
pub mod error;
pub mod generate;
pub mod good;
pub mod graph;
pub mod io;
pub mod layered;
pub mod partition;

pub use error::{Error, Result};
