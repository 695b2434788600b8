pub mod cli;
pub mod continuation;
pub mod error;
pub mod exact_algebra;
pub mod families;
pub mod fundamental;
pub mod layering;
pub mod network;
pub mod partial_graph;
pub mod planar;
pub mod verify;

pub use error::{Error, Result};
