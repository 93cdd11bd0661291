pub mod assemble;
pub mod cli;
pub mod error;
pub mod export;
pub mod families;
pub mod graph;
pub mod interp;
pub mod profile;
pub mod quadrature;
pub mod roots;
pub mod spaceform;
pub mod verify;
pub mod warp;

pub use error::{Error, Result};
