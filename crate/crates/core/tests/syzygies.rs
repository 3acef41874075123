use proptest::prelude::*;
use syzcalc::gradedmod::{GradedFreeModule, GradedModule};
use syzcalc::groebner::GbOptions;
use syzcalc::koszul::{koszul_table, ModuleAction};
use syzcalc::{Field, MultiPoly, Ring};

/// Variables, generator shifts, and per relation a degree and a stream of
/// small coefficients.
fn module_strategy() -> impl Strategy<Value = (usize, Vec<i64>, Vec<(i64, Vec<i8>)>)> {
    (1usize..=3, prop::collection::vec(0i64..=1, 1..=3), prop::collection::vec((1i64..=3, prop::collection::vec(-2i8..=2, 40)), 0..=3))
}

fn build(field: Field, nvars: usize, shifts: &[i64], rels: &[(i64, Vec<i8>)]) -> GradedModule {
    let ring = Ring::standard(&["x", "y", "z"][..nvars], field).unwrap();
    let low = *shifts.iter().min().unwrap();
    let relations = rels
        .iter()
        .map(|(offset, coeffs)| {
            let e = low + offset;
            let mut c = coeffs.iter().cycle();
            shifts
                .iter()
                .map(|&a| {
                    if e < a {
                        return MultiPoly::zero(&ring);
                    }
                    let terms = ring
                        .monomials_of_degree((e - a) as u32)
                        .into_iter()
                        .map(|m| (m, field.from_i64(*c.next().unwrap() as i64)))
                        .collect();
                    MultiPoly::from_terms(&ring, terms)
                })
                .collect()
        })
        .collect();
    GradedModule::new(GradedFreeModule::new(&ring, shifts.to_vec()), relations).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn koszul_cohomology_equals_betti_numbers((nvars, shifts, rels) in module_strategy()) {
        let m = build(Field::Rationals, nvars, &shifts, &rels);
        let opts = GbOptions::default();
        let betti = m.betti_table(&opts).unwrap();
        let act = ModuleAction::standard(&m).unwrap();
        let lo = shifts.iter().min().unwrap() - 1;
        let hi = betti.entries().keys().map(|k| k.1).max().unwrap_or(lo) + 1;
        let koszul = koszul_table(&act, nvars, lo, hi);
        for p in 0..=nvars {
            for q in lo..=hi {
                prop_assert_eq!(koszul.get(p, q), betti.get(p, q), "p={} q={}", p, q);
            }
        }
    }

    #[test]
    fn resolutions_are_minimal_and_exact((nvars, shifts, rels) in module_strategy()) {
        let m = build(Field::Rationals, nvars, &shifts, &rels);
        let res = m.minimal_free_resolution(nvars + 1, &GbOptions::default()).unwrap();
        prop_assert!(res.is_complex());
        prop_assert!(res.is_minimal());
        prop_assert!(res.length() <= nvars);
        for q in -1..=7 {
            prop_assert_eq!(res.euler_characteristic(q), m.hilbert_function(q) as i64, "q={}", q);
        }
    }
}
