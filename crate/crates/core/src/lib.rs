pub mod analysis;
pub mod compiler;
pub mod ensemble;
pub mod error;
pub mod fss;
pub mod gf2;
pub mod rng;
pub mod simulator;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
