//! Finite metabelian representations of knot groups and the homology of the
//! covers they determine.

pub mod algebra;
pub mod bounds;
pub mod covers;
pub mod derham;
pub mod error;
pub mod fox;
pub mod knot;
pub mod knot_io;
pub mod lowindex;
pub mod report;
pub mod stratification;

pub use error::{Error, Result};
