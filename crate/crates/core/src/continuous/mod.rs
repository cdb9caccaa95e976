//! Continuous simple games on `[0,1]^n` and their power indices.

mod density;
mod game;
mod indices;
mod structure;

pub use density::*;
pub use game::*;
pub use indices::*;
pub use structure::*;
