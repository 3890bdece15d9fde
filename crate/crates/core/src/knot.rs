//! A knot together with the presentations and invariants derived from it.

use crate::algebra::laurent::LaurentPoly;
use crate::error::Result;
use crate::fox::alexander_poly;
use crate::knot_io::{knot_record, wirtinger, working_presentation, GroupPresentation, KnotDiagram};

#[derive(Clone, Debug)]
pub struct Knot {
    pub name: String,
    pub diagram: KnotDiagram,
    pub wirtinger: GroupPresentation,
    /// Deficiency-one reduction of the Wirtinger presentation, with the
    /// meridian and longitude carried along.
    pub working: GroupPresentation,
    pub delta: LaurentPoly,
    pub fibered: Option<bool>,
    pub genus: Option<u32>,
}

impl Knot {
    pub fn from_diagram(name: &str, diagram: KnotDiagram, fibered: Option<bool>, genus: Option<u32>) -> Result<Self> {
        let wirtinger = wirtinger(&diagram);
        let working = working_presentation(&wirtinger);
        let delta = alexander_poly(&wirtinger)?;
        Ok(Knot { name: name.to_string(), diagram, wirtinger, working, delta, fibered, genus })
    }

    /// Looks the knot up in the active knot table.
    pub fn builtin(name: &str) -> Result<Self> {
        let rec = knot_record(name)?;
        Self::from_diagram(name, rec.diagram, rec.fibered, rec.genus)
    }

    /// Crossing number of the stored diagram.
    pub fn c_k(&self) -> usize {
        self.diagram.crossing_count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_knots() {
        let k = Knot::builtin("7_7").unwrap();
        assert_eq!(k.c_k(), 7);
        assert_eq!(k.working.deficiency(), 1);
        assert_eq!(k.fibered, Some(true));
        assert!(k.working.longitude.is_some());
        assert!(Knot::builtin("9_99").is_err());
    }
}
