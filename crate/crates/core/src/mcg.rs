//! Mapping classes as words in Dehn twists acting on normal coordinates.

use std::collections::BTreeMap;

use crate::curve::{
    coords_of_path, decompose, inverse_path, is_peripheral_path, reduce_cyclic, trace, Loop, NormalMultiCurve,
};
use crate::error::{Error, Result};
use crate::intersection::linked_stretches;
use crate::surface::{Dart, Triangulation};

/// A twist curve with its traced strand, cached for repeated application.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistCurve {
    coords: Vec<u32>,
    path: Vec<Dart>,
    positions: Vec<u32>,
}

impl TwistCurve {
    pub fn new(t: &Triangulation, c: &NormalMultiCurve) -> Result<Self> {
        c.check_on(t)?;
        let mut comps = trace(t, c.coords());
        if comps.len() != 1 {
            return Err(Error::NotConnected);
        }
        let tc = comps.pop().unwrap();
        if is_peripheral_path(t, &tc.path) {
            return Err(Error::NotEssential);
        }
        Ok(TwistCurve { coords: c.coords().to_vec(), path: tc.path, positions: tc.positions })
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }
    pub fn path(&self) -> &[Dart] {
        &self.path
    }
}

/// One left (`sign > 0`) or right twist along `c` applied to a reduced
/// closed path. The result is reduced and keeps the orientation of `a`.
///
/// At every forced crossing the path takes a detour once around `c`,
/// turning left for a left twist. Detours are spliced in at the triangle
/// where the common stretch starts; several detours in one triangle are
/// ordered by how far their strand of `c` sits from `a`.
pub fn twist_path(t: &Triangulation, a: &[Dart], c: &TwistCurve, sign: i32) -> Vec<Dart> {
    let stretches = linked_stretches(t, a, &c.path);
    if stretches.is_empty() {
        return a.to_vec();
    }
    let m = c.path.len();
    let cinv = inverse_path(t, &c.path);
    let mut at: BTreeMap<usize, Vec<(i64, Vec<Dart>)>> = BTreeMap::new();
    for s in &stretches {
        let b: &[Dart] = if s.reversed { &cinv } else { &c.path };
        let cidx = if s.reversed { m - 1 - s.j } else { s.j };
        let d = a[s.i];
        let e = t.edge_of(d);
        let canon = c.positions[cidx] as i64;
        let along = if t.canonical_dart(e) == d { canon } else { c.coords[e] as i64 - 1 - canon };
        let key = if s.a_left_at_start { -along } else { along };
        let forward = s.a_left_at_start == (sign > 0);
        let detour: Vec<Dart> = if forward {
            (0..m).map(|k| b[(s.j + k) % m]).collect()
        } else {
            (1..=m).map(|k| t.opp(b[(s.j + m - k) % m])).collect()
        };
        at.entry(s.i).or_default().push((key, detour));
    }
    let mut out = Vec::with_capacity(a.len() + stretches.len() * m);
    for (i, &d) in a.iter().enumerate() {
        if let Some(list) = at.get_mut(&i) {
            list.sort_by_key(|(k, _)| *k);
            for (_, det) in list.iter() {
                out.extend_from_slice(det);
            }
        }
        out.push(d);
    }
    reduce_cyclic(t, &out)
}

/// Applies `T_c^exponent` to a multicurve.
pub fn twist_multicurve(
    t: &Triangulation,
    c: &TwistCurve,
    exponent: i32,
    u: &NormalMultiCurve,
) -> Result<NormalMultiCurve> {
    u.check_on(t)?;
    if exponent == 0 || u.is_empty() {
        return Ok(u.clone());
    }
    let mut total = vec![0u32; t.edge_count()];
    for (comp, mult) in decompose(t, u) {
        let mut path = Loop::from_curve(t, &comp)?.darts().to_vec();
        for _ in 0..exponent.unsigned_abs() {
            path = twist_path(t, &path, c, exponent.signum());
        }
        for (x, y) in total.iter_mut().zip(coords_of_path(t, &path)) {
            *x += y * mult;
        }
    }
    NormalMultiCurve::new(t, total)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistLetter {
    pub curve: TwistCurve,
    pub exponent: i32,
}

/// A product of twists. Letters act right to left: the last letter is
/// applied first, as for composition of functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MappingClass {
    triangulation_id: u64,
    word: Vec<TwistLetter>,
}

impl MappingClass {
    pub fn identity(t: &Triangulation) -> Self {
        MappingClass { triangulation_id: t.id(), word: Vec::new() }
    }

    pub fn word(&self) -> &[TwistLetter] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn triangulation_id(&self) -> u64 {
        self.triangulation_id
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MappingClass) -> Result<MappingClass> {
        if self.triangulation_id != other.triangulation_id {
            return Err(Error::SurfaceMismatch);
        }
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        Ok(MappingClass { triangulation_id: self.triangulation_id, word })
    }

    pub fn inverse(&self) -> MappingClass {
        let word =
            self.word.iter().rev().map(|l| TwistLetter { curve: l.curve.clone(), exponent: -l.exponent }).collect();
        MappingClass { triangulation_id: self.triangulation_id, word }
    }

    pub fn push(&mut self, letter: TwistLetter) {
        self.word.push(letter);
    }
}

pub fn dehn_twist(t: &Triangulation, c: &NormalMultiCurve, exponent: i32) -> Result<MappingClass> {
    if !crate::curve::is_connected(t, c) {
        return Err(Error::NotConnected);
    }
    let curve = TwistCurve::new(t, c)?;
    let mut f = MappingClass::identity(t);
    for _ in 0..exponent.unsigned_abs() {
        f.push(TwistLetter { curve: curve.clone(), exponent: exponent.signum() });
    }
    Ok(f)
}

pub fn apply(t: &Triangulation, f: &MappingClass, u: &NormalMultiCurve) -> Result<NormalMultiCurve> {
    if f.triangulation_id != t.id() || u.triangulation_id() != t.id() {
        return Err(Error::SurfaceMismatch);
    }
    let mut cur = u.clone();
    for l in f.word.iter().rev() {
        cur = twist_multicurve(t, &l.curve, l.exponent, &cur)?;
    }
    Ok(cur)
}

/// Applies `f` to an oriented loop, keeping track of orientation.
pub fn apply_loop(t: &Triangulation, f: &MappingClass, a: &Loop) -> Loop {
    let mut path = a.darts().to_vec();
    for l in f.word.iter().rev() {
        for _ in 0..l.exponent.unsigned_abs() {
            path = twist_path(t, &path, &l.curve, l.exponent.signum());
        }
    }
    Loop::from_path(t, &path)
}

/// Canonical multiset of components (with multiplicity) of a collection.
pub fn component_multiset(t: &Triangulation, mu: &[NormalMultiCurve]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for u in mu {
        for (c, m) in decompose(t, u) {
            for _ in 0..m {
                out.push(c.coords().to_vec());
            }
        }
    }
    out.sort();
    out
}

/// True when `f` maps the collection to itself up to isotopy.
pub fn stabilizes(t: &Triangulation, f: &MappingClass, mu: &[NormalMultiCurve]) -> Result<bool> {
    let before = component_multiset(t, mu);
    let image: Vec<NormalMultiCurve> = mu.iter().map(|u| apply(t, f, u)).collect::<Result<_>>()?;
    Ok(component_multiset(t, &image) == before)
}

/// The permutation `f` induces on the listed curves, if it permutes them.
pub fn induced_permutation(t: &Triangulation, f: &MappingClass, mu: &[NormalMultiCurve]) -> Result<Option<Vec<usize>>> {
    let mut perm = Vec::with_capacity(mu.len());
    for u in mu {
        let img = apply(t, f, u)?;
        match mu.iter().position(|v| *v == img) {
            Some(k) => perm.push(k),
            None => return Ok(None),
        }
    }
    let mut seen = perm.clone();
    seen.sort();
    seen.dedup();
    Ok((seen.len() == mu.len()).then_some(perm))
}

/// Alexander-method triviality test: `f` is trivial iff it fixes every
/// oriented curve of the stored system. Orientation is compared so that
/// symmetries reversing all curves (such as the hyperelliptic involution)
/// are not mistaken for the identity.
pub fn fixes_oriented_system(t: &Triangulation, f: &MappingClass, system: &[Loop]) -> bool {
    system.iter().all(|a| apply_loop(t, f, a).rotated_min() == a.rotated_min())
}

/// A filling system of oriented loops in pairwise minimal position. A
/// mapping class fixing every loop with its orientation is trivial.
#[derive(Debug, Clone)]
pub struct AlexanderSystem {
    triangulation_id: u64,
    loops: Vec<Loop>,
}

impl AlexanderSystem {
    pub fn new(t: &Triangulation, curves: &[NormalMultiCurve]) -> Result<Self> {
        if !crate::intersection::regions::is_filling_collection(t, curves) {
            return Err(Error::NotFilling("Alexander system must fill".into()));
        }
        let loops = curves.iter().map(|c| Loop::from_curve(t, c)).collect::<Result<_>>()?;
        Ok(AlexanderSystem { triangulation_id: t.id(), loops })
    }

    /// The chain `alpha1 beta1 gamma1 ... beta{g} alpha{g}` of the standard
    /// triangulation of a surface of positive genus.
    pub fn standard(t: &Triangulation) -> Result<Self> {
        let g = t.surface().genus;
        if g == 0 {
            return Err(Error::NoAlexanderSystem);
        }
        let reg = crate::registry::standard_registry(t)?;
        let mut names = vec!["alpha1".to_string(), "beta1".to_string()];
        for k in 2..=g {
            names.push(format!("gamma{}", k - 1));
            names.push(format!("beta{k}"));
        }
        names.push(format!("alpha{g}"));
        let curves: Vec<NormalMultiCurve> = names.iter().map(|n| reg.get(n).cloned()).collect::<Result<_>>()?;
        Self::new(t, &curves).map_err(|_| Error::NoAlexanderSystem)
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }
}

/// Triviality test by the Alexander method.
pub fn is_identity(t: &Triangulation, f: &MappingClass, a: &AlexanderSystem) -> Result<bool> {
    if f.triangulation_id != t.id() || a.triangulation_id != t.id() {
        return Err(Error::SurfaceMismatch);
    }
    if f.is_empty() {
        return Ok(true);
    }
    Ok(fixes_oriented_system(t, f, &a.loops))
}

/// A weighted twist generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub curve: NormalMultiCurve,
    pub twist: TwistCurve,
    pub weight: u64,
}

impl Generator {
    pub fn new(t: &Triangulation, name: &str, curve: &NormalMultiCurve, weight: u64) -> Result<Self> {
        if weight == 0 {
            return Err(Error::Invalid(format!("generator {name} has weight 0")));
        }
        Ok(Generator { name: name.to_string(), curve: curve.clone(), twist: TwistCurve::new(t, curve)?, weight })
    }

    pub fn mapping_class(&self, t: &Triangulation, exponent: i32) -> MappingClass {
        let mut f = MappingClass::identity(t);
        for _ in 0..exponent.unsigned_abs() {
            f.push(TwistLetter { curve: self.twist.clone(), exponent: exponent.signum() });
        }
        f
    }
}

/// The generators `Z` with their edge lengths, and the twists used to
/// approximate the stabilizer of the base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub generators: Vec<Generator>,
    pub stabilizer_generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn min_weight(&self) -> Option<u64> {
        self.generators.iter().map(|g| g.weight).min()
    }

    /// Every edge length set to 1.
    pub fn uniform(&self) -> GeneratorSet {
        let one = |g: &Generator| Generator { weight: 1, ..g.clone() };
        GeneratorSet {
            generators: self.generators.iter().map(one).collect(),
            stabilizer_generators: self.stabilizer_generators.iter().map(one).collect(),
        }
    }
}
