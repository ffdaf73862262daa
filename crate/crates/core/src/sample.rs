//! Random test inputs.

use rand::Rng;

use crate::curve::NormalMultiCurve;
use crate::surface::Triangulation;

/// Uniform rejection sample of a non-empty admissible vector with every
/// coordinate at most `max`.
pub fn random_admissible<R: Rng>(t: &Triangulation, rng: &mut R, max: u32) -> NormalMultiCurve {
    loop {
        let v: Vec<u32> = (0..t.edge_count()).map(|_| rng.gen_range(0..=max)).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        if let Ok(u) = NormalMultiCurve::new(t, v) {
            return u;
        }
    }
}
