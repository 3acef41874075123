use syzcalc::geometry::curves::{binomial, chi_discrepancy, h0_is_possible};
use syzcalc::geometry::*;
use syzcalc::Field;

#[test]
fn syzygies_detect_very_ampleness_on_the_line() {
    for p in 0..=2usize {
        for b in -1..=p as i64 + 1 {
            let amp = very_ampleness_order(&AmplenessTarget::line_bundle(b, Field::Rationals), p, Strategy::Exhaustive).unwrap();
            for d in p as i64 + 2..=p as i64 + 4 {
                let vanishes = koszul_of_sections(b, d, p, 1).unwrap() == 0;
                assert_eq!(vanishes, b >= p as i64, "p={p} b={b} d={d}");
                assert_eq!(amp.is_p_very_ample(p), vanishes, "p={p} b={b}");
            }
        }
    }
}

#[test]
fn canonical_duality_on_the_line() {
    for d in 3..=5i64 {
        for p in 0..d as usize {
            assert_eq!(
                koszul_of_sections(-2, d, p, 1).unwrap(),
                koszul_of_sections(0, d, d as usize - 1 - p, 1).unwrap(),
                "d={d} p={p}"
            );
        }
    }
}

#[test]
fn rational_normal_curve_syzygies() {
    // K_{p,1}(ℙ¹, 𝒪, 𝒪(d)) = p·C(d, p+1), the Eagon–Northcott numbers
    for d in 2..=5i64 {
        for p in 1..d as usize {
            let expected = binomial(d, p as i64 + 1) * p;
            assert_eq!(num_bigint::BigInt::from(koszul_of_sections(0, d, p, 1).unwrap()), expected, "d={d} p={p}");
        }
    }
}

#[test]
fn line_bundle_orders() {
    for m in 0..=5 {
        let r = very_ampleness_order(&AmplenessTarget::line_bundle(m, Field::Rationals), m as usize + 1, Strategy::Exhaustive).unwrap();
        assert_eq!(r.order, Some(m as usize));
        assert_eq!(r.evidence, Evidence::Proved);
        assert!(!r.checks.last().unwrap().passed);
    }
}

#[test]
fn numerical_criterion_sweep() {
    for g in 0..=3i64 {
        for p in 0..=4i64 {
            let floor = 2 * g + p + 1;
            for d in floor..=floor + 3 {
                for b in floor - d..=floor + 3 {
                    for h in (0..=p).filter(|&h| h0_is_possible(g, b, h)) {
                        let c = CurveNumerics::new(g, d, b, p, h).unwrap();
                        let crit = curve_nonvanishing_criterion(&c).unwrap();
                        assert_eq!(crit.verdict, CriterionVerdict::Certified, "{c:?}");
                        let diff = chi_discrepancy(&c).unwrap();
                        assert_eq!(diff, (binomial(d - g, p) * (1 - g)).into(), "{c:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn certified_cases_on_the_line_are_nonzero() {
    for p in 1..=3i64 {
        for b in 0..p {
            for d in p + 1..=p + 3 {
                let c = CurveNumerics::new(0, d, b, p, b + 1).unwrap();
                if curve_nonvanishing_criterion(&c).unwrap().verdict == CriterionVerdict::Certified {
                    assert!(koszul_of_sections(b, d, p as usize, 1).unwrap() > 0, "{c:?}");
                }
            }
        }
    }
}
