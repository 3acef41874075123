use super::*;
use crate::linalg::Matrix;
use crate::poly::{GradedDegree, MonomialOrder, Ring};
use crate::scalar::Field;

fn opts() -> GbOptions {
    GbOptions::default()
}

fn polys(ring: &RingRef, src: &[&str]) -> Vec<MultiPoly> {
    src.iter().map(|s| ring.parse(s).unwrap()).collect()
}

fn strings(ps: &[MultiPoly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

#[test]
fn single_variable_is_its_own_basis() {
    let r = Ring::rational(&["x", "y"]);
    let gb = IdealBasis::parse(&r, &["x"]).unwrap().groebner().unwrap();
    assert_eq!(strings(gb.generators()), vec!["x"]);
}

#[test]
fn grevlex_basis_of_x2_xy_plus_y2() {
    let r = Ring::rational(&["x", "y"]);
    let gb = IdealBasis::parse(&r, &["x^2", "x*y + y^2"]).unwrap().groebner().unwrap();
    let mut lts: Vec<String> = gb
        .generators()
        .iter()
        .map(|g| MultiPoly::term(&r, g.leading().unwrap().0.clone(), r.field().one()).to_string())
        .collect();
    lts.sort();
    assert_eq!(lts, vec!["x*y", "x^2", "y^3"]);
    // auto-reduced: no leading term divides another, tails irreducible
    for g in gb.generators() {
        for h in gb.generators() {
            if g != h {
                assert!(!g.leading().unwrap().0.divides(&h.leading().unwrap().0));
            }
        }
    }
}

#[test]
fn lex_basis_of_twisted_cubic_parametrization() {
    let r = Ring::rational(&["x", "y", "z"]).with_order(MonomialOrder::Lex).unwrap();
    let gb = IdealBasis::parse(&r, &["y - x^2", "z - x^3"]).unwrap().groebner().unwrap();
    let cubic = r.parse("y^3 - z^2").unwrap();
    assert!(gb.generators().contains(&cubic));
    assert!(gb.contains(&cubic).unwrap());
}

#[test]
fn normal_form_requires_groebner_flag() {
    let r = Ring::rational(&["x", "y"]);
    let ideal = IdealBasis::parse(&r, &["x"]).unwrap();
    assert_eq!(ideal.normal_form(&r.parse("x").unwrap()), Err(Error::NotGroebner));
    let gb = ideal.groebner().unwrap();
    assert!(gb.normal_form(&r.parse("x^2").unwrap()).unwrap().is_zero());
    assert_eq!(gb.normal_form(&r.parse("x + y").unwrap()).unwrap().to_string(), "y");
}

#[test]
fn normal_form_consistent_with_substitution() {
    let r = Ring::rational(&["x", "y", "z"]).with_order(MonomialOrder::Lex).unwrap();
    let t = Ring::rational(&["t"]);
    let images = polys(&t, &["t", "t^2", "t^3"]);
    let gb = IdealBasis::parse(&r, &["y - x^2", "z - x^3"]).unwrap().groebner().unwrap();
    for src in ["y^3", "x*y*z + y^2", "x^5 - z"] {
        let f = r.parse(src).unwrap();
        let nf = gb.normal_form(&f).unwrap();
        assert!((&f - &nf).compose(&t, &images).is_zero(), "{src}");
    }
    assert_eq!(gb.normal_form(&r.parse("y^3").unwrap()).unwrap().to_string(), "z^2");
}

#[test]
fn elimination_recovers_the_cuspidal_cubic() {
    let r = Ring::rational(&["x", "y", "z"]);
    let ideal = IdealBasis::parse(&r, &["y - x^2", "z - x^3"]).unwrap();
    let elim = ideal.eliminate(&[1, 2]).unwrap();
    assert_eq!(elim.generators().len(), 1);
    let g = &elim.generators()[0];
    // parametrization oracle: (t^2, t^3) satisfies the generator, and it is a cubic
    let t = Ring::rational(&["t"]);
    let images = polys(&t, &["0", "t^2", "t^3"]);
    assert!(g.compose(&t, &images).is_zero());
    assert_eq!(g.max_degree(), 3);
    assert_eq!(g.monic(), r.parse("y^3 - z^2").unwrap().monic());
}

#[test]
fn elimination_to_zero() {
    let r = Ring::rational(&["x", "y"]);
    assert!(IdealBasis::parse(&r, &["x"]).unwrap().eliminate(&[1]).unwrap().is_zero());
    assert!(IdealBasis::parse(&r, &["x - y"]).unwrap().eliminate(&[1]).unwrap().is_zero());
}

#[test]
fn intersections() {
    let r = Ring::rational(&["x", "y"]);
    let a = IdealBasis::parse(&r, &["x"]).unwrap();
    let b = IdealBasis::parse(&r, &["y"]).unwrap();
    let i = intersect_ideals(&[a.clone(), b], &opts()).unwrap();
    assert_eq!(strings(i.generators()), vec!["x*y"]);

    let p = IdealBasis::parse(&r, &["x", "y"]).unwrap();
    let q = IdealBasis::parse(&r, &["x - 1", "y"]).unwrap();
    let i = intersect_ideals(&[p, q], &opts()).unwrap();
    let mut got = strings(i.generators());
    got.sort();
    assert_eq!(got, vec!["x^2 - x", "y"]);

    let single = intersect_ideals(&[a.clone()], &opts()).unwrap();
    assert_eq!(single.generators(), a.groebner().unwrap().generators());
    assert_eq!(intersect_ideals(&[], &opts()), Err(Error::Empty("intersection of no ideals")));
}

#[test]
fn intersection_of_two_points_is_their_vanishing_ideal() {
    // oracle: a polynomial vanishes at (0,0) and (1,0) iff it lies in (y, x^2 - x)
    let r = Ring::rational(&["x", "y"]);
    let p = IdealBasis::parse(&r, &["x", "y"]).unwrap();
    let q = IdealBasis::parse(&r, &["x - 1", "y"]).unwrap();
    let i = intersect_ideals(&[p, q], &opts()).unwrap();
    let f = r.field();
    for g in i.generators() {
        assert!(g.evaluate(&[f.from_i64(0), f.from_i64(0)]).is_zero());
        assert!(g.evaluate(&[f.from_i64(1), f.from_i64(0)]).is_zero());
    }
    let probe = r.parse("x^3 - x^2 + 7*y*x").unwrap();
    assert!(i.contains(&probe).unwrap());
    assert!(!i.contains(&r.parse("x - 1").unwrap()).unwrap());
}

fn row_module(ring: &RingRef, entries: &[&str]) -> ModuleBasis {
    // the 1 x m matrix (entries) as m elements of R^1
    let shifts = vec![0];
    let fm = FreeModule::new(ring, shifts, ModuleOrder::Top);
    ModuleBasis::new(fm, entries.iter().map(|s| vec![ring.parse(s).unwrap()]).collect()).unwrap()
}

#[test]
fn koszul_syzygy_of_regular_sequence() {
    let r = Ring::rational(&["x", "y"]);
    let syz = syzygies(&row_module(&r, &["x", "y"]), &opts()).unwrap();
    assert_eq!(syz.len(), 1);
    let v = &syz.elements()[0];
    let expected = [-&r.parse("y").unwrap(), r.parse("x").unwrap()];
    let ratio = v[1].leading().unwrap().1.clone();
    assert_eq!(v[0].scale(&ratio.inv()), expected[0]);
    assert_eq!(v[1].scale(&ratio.inv()), expected[1]);
}

#[test]
fn lone_generator_has_no_syzygies() {
    let r = Ring::rational(&["x", "y"]);
    assert!(syzygies(&row_module(&r, &["x"]), &opts()).unwrap().is_empty());
}

#[test]
fn inhomogeneous_syzygies_rejected() {
    let r = Ring::rational(&["x", "y"]);
    assert!(matches!(
        syzygies(&row_module(&r, &["x", "y^2 + x"]), &opts()),
        Err(Error::Inhomogeneous(_))
    ));
}

const TWISTED_CUBIC: [&str; 3] = ["x*z - y^2", "x*w - y*z", "y*w - z^2"];

#[test]
fn twisted_cubic_has_two_linear_syzygies() {
    let r = Ring::rational(&["x", "y", "z", "w"]);
    let syz = syzygies(&row_module(&r, &TWISTED_CUBIC), &opts()).unwrap();
    assert_eq!(syz.len(), 2);
    for v in syz.elements() {
        assert!(v.iter().all(|p| matches!(p.graded_degree(), GradedDegree::Homogeneous(1) | GradedDegree::NegInfinity)));
    }
    // linear-algebra oracle: kernel of S_1^3 -> S_3, (a_i) -> sum a_i q_i
    let field = Field::Rationals;
    let qs = polys(&r, &TWISTED_CUBIC);
    let s1 = r.monomials_of_degree(1);
    let s3 = r.monomials_of_degree(3);
    let mut m = Matrix::zeros(s3.len(), 3 * s1.len(), field);
    for (k, q) in qs.iter().enumerate() {
        for (j, mono) in s1.iter().enumerate() {
            let prod = q.mul_term(mono, &field.one());
            for (pm, c) in prod.terms() {
                let row = s3.iter().position(|x| x == pm).unwrap();
                m.set(row, k * s1.len() + j, c.clone());
            }
        }
    }
    assert_eq!(m.kernel().len(), 2);
}

#[test]
fn lifting_expresses_members() {
    let r = Ring::rational(&["x", "y", "z", "w"]);
    let gens = row_module(&r, &TWISTED_CUBIC);
    let lb = LiftingBasis::new(&gens, &opts()).unwrap();
    let fm = gens.ambient().clone();
    // x*y^2 does not vanish on (s^3, s^2 t, s t^2, t^3)
    let target = r.parse("x*y^2").unwrap();
    let v = ModuleVector::from_polys(&fm, &[target]).unwrap();
    assert!(lb.lift(&v).is_none());
    let member = r.parse("x^2*w - x*y*z - x*y*z + y^3").unwrap();
    let v = ModuleVector::from_polys(&fm, &[member.clone()]).unwrap();
    let coeffs = lb.lift(&v).unwrap();
    let qs = polys(&r, &TWISTED_CUBIC);
    let recombined = coeffs.iter().zip(&qs).fold(MultiPoly::zero(&r), |acc, (c, q)| &acc + &(c * q));
    assert_eq!(recombined, member);
}

#[test]
fn basis_guard_trips() {
    let r = Ring::rational(&["x", "y", "z"]);
    let ideal = IdealBasis::parse(&r, &["x^3 - y*z^2", "y^3 - x*z^2", "z^3 - x^2*y"]).unwrap();
    let err = ideal.groebner_with(&GbOptions { max_basis: 3 });
    assert_eq!(err, Err(Error::BasisLimit(3)));
}

#[test]
fn minimal_generators_drop_redundant_ones() {
    let r = Ring::rational(&["x", "y"]);
    let m = row_module(&r, &["x", "y", "x^2 + x*y", "y^3"]);
    let min = m.minimal_generators(&opts()).unwrap();
    assert_eq!(min.len(), 2);
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> RingRef {
        Ring::rational(&["x", "y", "z"])
    }

    fn arb_poly(max_terms: usize, max_deg: u16) -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0..=max_deg, 0..=max_deg, 0..=max_deg), -3i64..=3), 1..=max_terms).prop_map(
            move |ts| {
                let r = ring();
                let terms = ts
                    .into_iter()
                    .map(|((a, b, c), k)| (r.monomial([a, b, c].into_iter().collect()), r.field().from_i64(k)))
                    .collect();
                MultiPoly::from_terms(&r, terms)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn members_reduce_to_zero(f in arb_poly(3, 2), g in arb_poly(3, 2), a in arb_poly(2, 1), b in arb_poly(2, 1)) {
            let r = ring();
            let gb = IdealBasis::new(&r, vec![f.clone(), g.clone()]).unwrap().groebner().unwrap();
            let member = &(&a * &f) + &(&b * &g);
            prop_assert!(gb.normal_form(&member).unwrap().is_zero());
        }

        #[test]
        fn normal_form_ignores_generator_order(f in arb_poly(3, 2), g in arb_poly(3, 2), h in arb_poly(4, 3)) {
            let r = ring();
            let gb1 = IdealBasis::new(&r, vec![f.clone(), g.clone()]).unwrap().groebner().unwrap();
            let gb2 = IdealBasis::new(&r, vec![g, f]).unwrap().groebner().unwrap();
            prop_assert_eq!(gb1.generators(), gb2.generators());
            prop_assert_eq!(gb1.normal_form(&h).unwrap(), gb2.normal_form(&h).unwrap());
        }

        #[test]
        fn intersection_membership(f in arb_poly(2, 2), g in arb_poly(2, 2)) {
            let r = ring();
            let i = IdealBasis::new(&r, vec![f.clone()]).unwrap();
            let j = IdealBasis::new(&r, vec![g.clone()]).unwrap();
            let both = intersect_ideals(&[i.clone(), j.clone()], &GbOptions::default()).unwrap();
            let gi = i.groebner().unwrap();
            let gj = j.groebner().unwrap();
            for h in both.generators() {
                prop_assert!(gi.contains(h).unwrap());
                prop_assert!(gj.contains(h).unwrap());
            }
            prop_assert!(both.contains(&(&f * &g)).unwrap());
        }

        #[test]
        fn syzygies_compose_to_zero(a in arb_poly(3, 2), b in arb_poly(3, 2), c in arb_poly(3, 2)) {
            // homogenize by taking the top-degree parts
            let r = ring();
            let top = |p: &MultiPoly| {
                let d = p.max_degree();
                MultiPoly::from_terms(&r, p.terms().iter().filter(|(m, _)| m.degree() == d).cloned().collect())
            };
            let gens = [top(&a), top(&b), top(&c)];
            let fm = FreeModule::new(&r, vec![0], ModuleOrder::Top);
            let mb = ModuleBasis::new(fm, gens.iter().map(|g| vec![g.clone()]).collect()).unwrap();
            let syz = syzygies(&mb, &GbOptions::default()).unwrap();
            for s in syz.elements() {
                let total = s.iter().zip(&gens).fold(MultiPoly::zero(&r), |acc, (x, g)| &acc + &(x * g));
                prop_assert!(total.is_zero());
            }
        }
    }
}
