#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod graph;
pub mod io;
pub mod lp;
pub mod mincut;
pub mod oracle;
pub mod pcst;
pub mod pctsp;
pub mod rounding;
pub mod schedule;
pub mod set_cover;
mod validate;
pub mod vertex_cover;

pub use error::{Error, Result};
