//! Subsurface projection on the genus-2 surface with one puncture, with the
//! first handle as the subsurface.

use arcmodel::curve::NormalMultiCurve;
use arcmodel::error::Error;
use arcmodel::intersection::intersection_number;
use arcmodel::intersection::regions::{is_filling, is_filling_collection};
use arcmodel::intersection::subsurface::{essential_intersection_check, is_filling_in, subsurface_cut, SubsurfaceSpec};
use arcmodel::mcg::{apply, dehn_twist, MappingClass};
use arcmodel::registry::{standard_registry, CurveRegistry};
use arcmodel::sample::random_admissible;
use arcmodel::surface::{build_standard_triangulation, SurfaceType, Triangulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn setup() -> (Triangulation, CurveRegistry, SubsurfaceSpec) {
    let t = build_standard_triangulation(SurfaceType::new(2, 1, 0)).unwrap();
    let r = standard_registry(&t).unwrap();
    let w = SubsurfaceSpec::containing(&t, &[r.get("delta1").unwrap().clone()], &[r.get("alpha1").unwrap().clone()])
        .unwrap();
    w.validate().unwrap();
    (t, r, w)
}

#[test]
fn curve_inside_projects_to_itself() {
    let (t, r, w) = setup();
    let a = r.get("alpha1").unwrap().clone();
    let p = subsurface_cut(&t, std::slice::from_ref(&a), &w).unwrap();
    assert_eq!(p.curves, vec![a.coords().to_vec()]);
    assert!(p.arcs.is_empty());
}

#[test]
fn boundary_and_outside_curves_are_not_in_the_domain() {
    let (t, r, w) = setup();
    for name in ["delta1", "alpha2", "beta2"] {
        let u = r.get(name).unwrap().clone();
        assert!(!essential_intersection_check(&t, std::slice::from_ref(&u), &w).unwrap());
        assert!(matches!(subsurface_cut(&t, &[u], &w), Err(Error::NotInProjectionDomain)));
    }
}

#[test]
fn crossing_curve_gives_one_arc() {
    let (t, r, w) = setup();
    let g = r.get("gamma1").unwrap().clone();
    assert_eq!(intersection_number(&t, &g, r.get("delta1").unwrap()).unwrap(), 2);
    assert!(essential_intersection_check(&t, std::slice::from_ref(&g), &w).unwrap());
    let p = subsurface_cut(&t, &[g], &w).unwrap();
    assert!(p.curves.is_empty());
    assert_eq!(p.arcs.len(), 1);
    // the arc misses alpha1 and crosses beta1 once, so closing it up along
    // the boundary gives alpha1
    assert_eq!(p.arcs[0], vec![r.get("alpha1").unwrap().coords().to_vec()]);
}

#[test]
fn filling_examples() {
    let (t, r, w) = setup();
    let c = |n: &str| r.get(n).unwrap().clone();
    assert!(!is_filling(&t, &c("alpha1")));
    assert!(!is_filling(&t, &NormalMultiCurve::empty(&t)));
    assert!(is_filling_in(&t, &[c("alpha1"), c("beta1")], &w).unwrap());
    assert!(!is_filling_in(&t, &[c("alpha1")], &w).unwrap());
    assert!(!is_filling_in(&t, &[c("alpha1"), c("alpha2")], &w).unwrap());
    assert!(!is_filling_collection(&t, &[c("alpha1"), c("beta1"), c("delta1")]));
    let chain: Vec<NormalMultiCurve> = ["alpha1", "beta1", "gamma1", "beta2", "alpha2"].iter().map(|n| c(n)).collect();
    assert!(is_filling_collection(&t, &chain));
}

fn random_word(t: &Triangulation, gens: &[NormalMultiCurve], rng: &mut ChaCha8Rng, len: usize) -> MappingClass {
    let mut f = MappingClass::identity(t);
    for _ in 0..len {
        let c = &gens[rng.gen_range(0..gens.len())];
        let e = if rng.gen_bool(0.5) { 1 } else { -1 };
        f = f.compose(&dehn_twist(t, c, e).unwrap()).unwrap();
    }
    f
}

#[test]
fn projection_is_equivariant_under_twists_in_the_subsurface() {
    let (t, r, w) = setup();
    let gens = vec![r.get("alpha1").unwrap().clone(), r.get("beta1").unwrap().clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 50 {
        let u = random_admissible(&t, &mut rng, 4);
        if !essential_intersection_check(&t, std::slice::from_ref(&u), &w).unwrap() {
            continue;
        }
        let len = rng.gen_range(1..=4);
        let f = random_word(&t, &gens, &mut rng, len);
        let fu = apply(&t, &f, &u).unwrap();
        let lhs = subsurface_cut(&t, &[fu], &w).unwrap();
        let rhs = subsurface_cut(&t, &[u], &w).unwrap().mapped(&t, &f).unwrap();
        assert_eq!(lhs, rhs);
        done += 1;
    }
}
