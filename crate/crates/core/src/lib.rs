//! Exact partial orders between polarization paths of polar codes.

pub mod bec;
pub mod beta;
pub mod bitmat;
pub mod bounds;
pub mod cli;
pub mod degradation;
pub mod error;
pub mod path;
pub mod podb;
pub mod poly;
pub mod rules;
pub mod scan;
pub mod sim;

pub use error::{Error, Result};
pub use path::{BitOrder, ChannelIndex, Convention, Path};
