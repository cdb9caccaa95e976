//! Continuous nucleolus: excesses, excess curves and their ordering, and a
//! two-phase numeric search.

mod curve;
mod excess;
mod search;

pub use curve::*;
pub use excess::*;
pub use search::*;
