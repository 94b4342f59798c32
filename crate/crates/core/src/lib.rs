pub mod algebra;
pub mod charts;
pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod grid;
pub mod periods;
pub mod presets;
pub mod spinor;
pub mod verify;
pub mod weierstrass;

pub use error::{Error, Result};
