//! Exact free-field realization of the level-`k` Yangian double `DY(sl_2)_k`
//! on triple-boson Fock spaces, with machinery to verify its defining current
//! relations mode by mode.

pub mod algebra;
pub mod engine;
pub mod fock;
pub mod level;
pub mod scalar;
mod serde_rational;
pub mod series;
pub mod verify;
pub mod vop;

pub use level::Level;
