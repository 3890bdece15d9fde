//! Knot diagrams, group presentations and the knot table.

pub mod diagram;
pub mod presentation;
pub mod table;

pub use diagram::{parse_pd, KnotDiagram};
pub use presentation::{longitude_word, simplify, tietze_reduce, wirtinger, working_presentation, GroupPresentation, Word};
pub use table::{builtin_knot, knot_names, knot_record, KnotRecord};
