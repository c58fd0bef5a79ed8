pub mod error;
pub mod codes;
pub mod cosetgraph;
pub mod erasuresim;
pub mod gf2;
pub mod graphbounds;
pub mod rate;

pub use error::{Error, Result};
