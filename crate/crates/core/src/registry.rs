//! Named curves on the standard triangulations.
//!
//! On a surface of positive genus the standard triangulation is a fan in a
//! `4g`-gon whose sides are glued in the pattern `a1 b1 a1' b1' ...`. A
//! closed curve is described by the cyclic list of polygon sides it leaves
//! through; it re-enters through the partner side and runs inside the
//! polygon to the next side.
//!
//! Registered curves for genus `g`, handles numbered from 1:
//! - `alpha{k}` leaves through side `4k - 3` (a `b` side) once;
//! - `beta{k}` leaves through side `4k - 4` (an `a` side) once;
//! - `gamma{k}` meets `beta{k}` and `beta{k+1}` once each and misses every
//!   `alpha`, completing the chain `alpha1 beta1 gamma1 beta2 ...`;
//! - `delta{k}` bounds the first `k` handles (`k < g`, or `k <= g` when
//!   the surface has more than one end);
//! - `hole{k}` bounds handle `k` alone;
//! - `sigma{k}` (`k >= 3`) meets `beta{k}` once and runs once through the
//!   pants between `hole1`, `hole2` and `delta2`, missing both holes; it
//!   is a band sum of `alpha{k}` and `hole1`;
//! - `omega{k}` bounds a neighbourhood of `beta{k}` and `sigma{k}`.

use std::collections::{BTreeMap, VecDeque};

use crate::curve::{canonical_unoriented, inverse_path, Loop, NormalMultiCurve};
use crate::error::{Error, Result};
use crate::intersection::linking::{linked_stretches, loop_intersection};
use crate::intersection::subsurface::{subsurface_cut, SubsurfaceSpec};
use crate::surface::{dart_tri, polygon_side_darts, Dart, Triangulation};

/// Partner of a polygon side under the gluing.
pub fn partner(i: usize) -> usize {
    if i % 4 < 2 {
        i + 2
    } else {
        i - 2
    }
}

/// Shortest dual path from triangle `a` to triangle `b` that never crosses
/// a polygon side.
fn interior_route(t: &Triangulation, polygon_edges: usize, a: usize, b: usize) -> Vec<Dart> {
    let mut prev: Vec<Option<Dart>> = vec![None; t.triangle_count()];
    let mut seen = vec![false; t.triangle_count()];
    seen[a] = true;
    let mut q = VecDeque::from([a]);
    while let Some(x) = q.pop_front() {
        if x == b {
            break;
        }
        for k in 0..3 {
            let d = (3 * x + k) as Dart;
            if t.edge_of(d) < polygon_edges {
                continue;
            }
            let y = dart_tri(t.opp(d));
            if !seen[y] {
                seen[y] = true;
                prev[y] = Some(d);
                q.push_back(y);
            }
        }
    }
    let mut out = Vec::new();
    let mut x = b;
    while x != a {
        let d = prev[x].expect("polygon interior is connected");
        out.push(d);
        x = dart_tri(d);
    }
    out.reverse();
    out
}

/// The closed curve leaving the polygon through the listed sides in turn.
pub fn side_word_loop(t: &Triangulation, word: &[usize]) -> Result<Loop> {
    let sides = polygon_side_darts(t)?;
    let pe = 2 * t.surface().genus as usize;
    if word.is_empty() || word.iter().any(|&i| i >= sides.len()) {
        return Err(Error::Invalid(format!("bad side word {word:?}")));
    }
    let mut path = Vec::new();
    for (k, &i) in word.iter().enumerate() {
        let next = word[(k + 1) % word.len()];
        path.push(sides[i]);
        let from = dart_tri(t.opp(sides[i]));
        path.extend(interior_route(t, pe, from, dart_tri(sides[next])));
    }
    Ok(Loop::from_path(t, &path))
}

/// Boundary of a regular neighbourhood of two loops meeting once, as the
/// commutator based at their crossing.
pub fn commutator_boundary(t: &Triangulation, a: &Loop, b: &Loop) -> Result<Loop> {
    let st = linked_stretches(t, a.darts(), b.darts());
    if st.len() != 1 {
        return Err(Error::Invalid("loops must cross exactly once".into()));
    }
    let s = st[0];
    let rot = |p: &[Dart], i: usize| -> Vec<Dart> { p[i..].iter().chain(&p[..i]).copied().collect() };
    let a0 = rot(a.darts(), s.i);
    let bp = if s.reversed { inverse_path(t, b.darts()) } else { b.darts().to_vec() };
    let b0 = rot(&bp, s.j);
    let mut path = a0.clone();
    path.extend(b0.iter().copied());
    path.extend(inverse_path(t, &a0));
    path.extend(inverse_path(t, &b0));
    Ok(Loop::from_path(t, &path))
}

fn curve_of(t: &Triangulation, l: &Loop) -> NormalMultiCurve {
    l.to_curve(t).expect("closed dual path gives admissible coordinates")
}

/// Named curves of the standard triangulation, each with an oriented loop.
#[derive(Debug, Clone)]
pub struct CurveRegistry {
    pub triangulation_id: u64,
    pub curves: BTreeMap<String, (NormalMultiCurve, Loop)>,
}

impl CurveRegistry {
    pub fn get(&self, name: &str) -> Result<&NormalMultiCurve> {
        self.curves.get(name).map(|c| &c.0).ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn get_loop(&self, name: &str) -> Result<&Loop> {
        self.curves.get(name).map(|c| &c.1).ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.curves.keys()
    }

    fn insert(&mut self, t: &Triangulation, name: String, l: Loop) {
        let canon = Loop::from_path(t, &canonical_unoriented(t, l.darts()));
        self.curves.insert(name, (curve_of(t, &canon), canon));
    }
}

/// Side word of `gamma{k}` (handles `k` and `k + 1`, numbered from 1).
fn gamma_word(k: usize) -> Vec<usize> {
    let b = 4 * (k - 1);
    GAMMA_PATTERN.iter().map(|&x| b + x).collect()
}

const GAMMA_PATTERN: &[usize] = &[3, 4, 5, 6];

pub fn standard_registry(t: &Triangulation) -> Result<CurveRegistry> {
    let s = t.surface();
    let mut reg = CurveRegistry { triangulation_id: t.id(), curves: BTreeMap::new() };
    if s.genus == 0 {
        return Ok(reg);
    }
    let g = s.genus as usize;
    for k in 1..=g {
        reg.insert(t, format!("alpha{k}"), side_word_loop(t, &[4 * k - 3])?);
        reg.insert(t, format!("beta{k}"), side_word_loop(t, &[4 * k - 4])?);
    }
    for k in 1..=g {
        let h = commutator_boundary(t, reg.get_loop(&format!("alpha{k}"))?, reg.get_loop(&format!("beta{k}"))?)?;
        if !h.is_empty() && !h.is_peripheral(t) {
            reg.insert(t, format!("hole{k}"), h);
        }
    }
    if !GAMMA_PATTERN.is_empty() {
        for k in 1..g {
            reg.insert(t, format!("gamma{k}"), side_word_loop(t, &gamma_word(k))?);
        }
    }
    // delta1 = hole1; delta{k} is the band sum of delta{k-1} and hole{k}
    // along an arc of gamma{k-1} outside both.
    if let Ok(h1) = reg.get_loop("hole1").cloned() {
        reg.insert(t, "delta1".into(), h1);
    }
    for k in 2..=g {
        let (Ok(prev), Ok(hole), Ok(gamma)) = (
            reg.get(&format!("delta{}", k - 1)).cloned(),
            reg.get(&format!("hole{k}")).cloned(),
            reg.get(&format!("gamma{}", k - 1)).cloned(),
        ) else {
            break;
        };
        let a1 = reg.get("alpha1")?.clone();
        let ak = reg.get(&format!("alpha{k}"))?.clone();
        let inner = SubsurfaceSpec::containing(t, &[prev, hole], &[a1, ak])?;
        let outside = inner.complement(t)?;
        let cut = subsurface_cut(t, &[gamma], &outside)?;
        let Some(arc) = cut.arcs.first() else { break };
        if cut.arcs.len() != 1 || arc.len() != 1 {
            return Err(Error::Invalid(format!("unexpected band sum for delta{k}")));
        }
        let c = NormalMultiCurve::new(t, arc[0].clone())?;
        let l = Loop::from_curve(t, &c)?;
        reg.insert(t, format!("delta{k}"), l);
    }
    for k in 3..=g {
        let sigma = sigma_curve(t, &reg, k)?;
        let omega = commutator_boundary(t, reg.get_loop(&format!("beta{k}"))?, &sigma)?;
        reg.insert(t, format!("sigma{k}"), sigma);
        reg.insert(t, format!("omega{k}"), omega);
    }
    Ok(reg)
}

fn sigma_curve(t: &Triangulation, reg: &CurveRegistry, k: usize) -> Result<Loop> {
    let hole1 = reg.get("hole1")?.clone();
    let alpha = reg.get(&format!("alpha{k}"))?.clone();
    let w = SubsurfaceSpec::containing(t, &[hole1, alpha], &[reg.get("alpha2")?.clone()])?;
    let x = side_word_loop(t, &[0, 4 * (k - 1)])?.to_curve(t)?;
    let beta = reg.get_loop(&format!("beta{k}"))?;
    let h1 = reg.get_loop("hole1")?;
    let mut best: Option<Loop> = None;
    for arc in subsurface_cut(t, &[x], &w)?.arcs {
        for c in arc {
            let l = Loop::from_curve(t, &NormalMultiCurve::new(t, c)?)?;
            let ok =
                loop_intersection(t, l.darts(), beta.darts()) == 1 && loop_intersection(t, l.darts(), h1.darts()) == 0;
            if ok && best.as_ref().is_none_or(|b| (l.len(), l.darts()) < (b.len(), b.darts())) {
                best = Some(l);
            }
        }
    }
    best.ok_or_else(|| Error::Invalid(format!("no band sum for sigma{k}")))
}
