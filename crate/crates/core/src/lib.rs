//! Voting-power indices for binary simple games, (j,k) simple games and
//! continuous simple games on the unit cube.

pub mod binary;
pub mod cli;
pub mod coalition;
pub mod continuous;
pub mod error;
pub mod io;
pub mod jk;
pub mod lp;
pub mod nucleolus;
pub mod numerics;
pub mod profile;
pub mod rational;
pub mod report;
pub mod reproduce;

pub use coalition::Coalition;
pub use error::{Error, Result};
pub use profile::{Method, PowerProfile};
