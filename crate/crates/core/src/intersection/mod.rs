//! Geometric intersection numbers, minimal-position realizations and
//! subsurface cutting.

pub mod linking;
pub mod realize;
pub mod regions;
pub mod subsurface;

use crate::curve::{decompose, Loop, NormalMultiCurve};
use crate::error::{Error, Result};
use crate::surface::Triangulation;

pub use linking::{algebraic_intersection, linked_stretches, loop_intersection, loop_self_intersection, LinkedStretch};

/// A multicurve split into traced components, ready for repeated pairing.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub parts: Vec<(Vec<u32>, Loop, u32)>,
}

impl Prepared {
    pub fn new(t: &Triangulation, u: &NormalMultiCurve) -> Result<Self> {
        u.check_on(t)?;
        let parts = decompose(t, u)
            .into_iter()
            .map(|(c, m)| {
                let l = Loop::from_curve(t, &c).expect("component is connected");
                (c.into_coords(), l, m)
            })
            .collect();
        Ok(Prepared { parts })
    }
}

pub fn prepared_intersection(t: &Triangulation, u: &Prepared, v: &Prepared) -> u64 {
    let mut total = 0;
    for (cu, lu, mu) in &u.parts {
        for (cv, lv, mv) in &v.parts {
            if cu == cv {
                continue;
            }
            total += (*mu as u64) * (*mv as u64) * loop_intersection(t, lu.darts(), lv.darts());
        }
    }
    total
}

/// Geometric intersection number of two multicurves, bilinear in their
/// components.
pub fn intersection_number(t: &Triangulation, u: &NormalMultiCurve, v: &NormalMultiCurve) -> Result<u64> {
    if u.triangulation_id() != v.triangulation_id() {
        return Err(Error::TriangulationMismatch);
    }
    let pu = Prepared::new(t, u)?;
    let pv = Prepared::new(t, v)?;
    Ok(prepared_intersection(t, &pu, &pv))
}

/// Sum of `intersection_number` over all ordered pairs drawn from the two
/// collections.
pub fn collection_intersection(t: &Triangulation, us: &[NormalMultiCurve], vs: &[NormalMultiCurve]) -> Result<u64> {
    let pu: Vec<Prepared> = us.iter().map(|u| Prepared::new(t, u)).collect::<Result<_>>()?;
    let pv: Vec<Prepared> = vs.iter().map(|v| Prepared::new(t, v)).collect::<Result<_>>()?;
    let mut total = 0;
    for a in &pu {
        for b in &pv {
            total += prepared_intersection(t, a, b);
        }
    }
    Ok(total)
}
