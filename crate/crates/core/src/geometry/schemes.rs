//! Finite subschemes of projective space and evaluation of sections on them.
//!
//! Sections are homogeneous forms of one degree in `ℚ[z_0, …, z_r]`. A
//! length-`ℓ` scheme is described so that `H⁰(𝒪_ξ)` has an explicit basis:
//! values at reduced points, Taylor coefficients along a curve germ, or
//! remainders modulo a binary form on the line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{fraction_field_rank, Matrix};
use crate::poly::{MultiPoly, Ring, RingRef};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeIdeal {
    /// Distinct points, by homogeneous coordinates.
    Points(Vec<Vec<Scalar>>),
    /// The zero scheme of a binary form `Σ c_i s^{ℓ−i} t^i` on the line.
    LineDivisor(Vec<Scalar>),
    /// The curvilinear scheme cut on the germ `ε ↦ Σ_m series[i][m] ε^m` by
    /// `ε^length`; `series[i][0]` are the coordinates of the point.
    Jet { series: Vec<Vec<Scalar>>, length: usize },
}

impl SchemeIdeal {
    pub fn length(&self) -> usize {
        match self {
            SchemeIdeal::Points(p) => p.len(),
            SchemeIdeal::LineDivisor(c) => c.len().saturating_sub(1),
            SchemeIdeal::Jet { length, .. } => *length,
        }
    }

    /// Jet of `length` at `point` along the line through it in direction `dir`.
    pub fn linear_jet(point: &[Scalar], dir: &[Scalar], length: usize) -> Self {
        SchemeIdeal::Jet {
            series: point.iter().zip(dir).map(|(p, v)| vec![p.clone(), v.clone()]).collect(),
            length,
        }
    }

    fn ambient_dim(&self) -> Option<usize> {
        match self {
            SchemeIdeal::Points(p) => p.first().map(|x| x.len()),
            SchemeIdeal::LineDivisor(_) => Some(2),
            SchemeIdeal::Jet { series, .. } => Some(series.len()),
        }
    }
}

/// `W → H⁰(𝒪_ξ)` in the scheme's own basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationMap {
    pub matrix: Matrix,
    pub rank: usize,
    pub length: usize,
    pub surjective: bool,
}

fn check_sections(sections: &[MultiPoly]) -> Result<Option<(RingRef, u32)>> {
    let Some(first) = sections.first() else { return Ok(None) };
    let ring = first.ring().clone();
    let mut degree = None;
    for (i, w) in sections.iter().enumerate() {
        if w.ring() != &ring {
            return Err(crate::error::AlgebraError::RingMismatch.into());
        }
        if w.is_zero() {
            continue;
        }
        if !w.is_homogeneous() || degree.is_some_and(|d| d != w.max_degree()) {
            return Err(Error::Inhomogeneous(format!("section {i}")));
        }
        degree = Some(w.max_degree());
    }
    Ok(Some((ring.clone(), degree.unwrap_or(0))))
}

/// Coefficients of `ε^0, …, ε^{ℓ−1}` in `w(germ(ε))`, with `germ` over `target`
/// whose last variable is `ε`.
fn jet_rows(w: &MultiPoly, target: &RingRef, germ: &[MultiPoly], length: usize) -> Vec<MultiPoly> {
    let eps = target.nvars() - 1;
    let composed = w.compose(target, germ);
    let mut rows = vec![Vec::new(); length];
    for (m, c) in composed.terms() {
        let k = m.exponents()[eps] as usize;
        if k < length {
            let mut exps = m.exponents().iter().copied().collect::<crate::poly::Exponents>();
            exps[eps] = 0;
            rows[k].push((target.monomial(exps), c.clone()));
        }
    }
    rows.into_iter().map(|t| MultiPoly::from_terms(target, t)).collect()
}

/// Remainder of `f` modulo monic-able `g`, both as coefficient lists in
/// increasing degree.
fn poly_rem(f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
    let mut r = f.to_vec();
    let lead_inv = g.last().expect("nonconstant divisor").inv();
    let dg = g.len() - 1;
    while r.len() > dg {
        let top = r.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let factor = &top * &lead_inv;
        let shift = r.len() - dg;
        for (i, gi) in g[..dg].iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&factor * gi);
        }
    }
    r
}

pub fn evaluation_map(sections: &[MultiPoly], xi: &SchemeIdeal) -> Result<EvaluationMap> {
    let length = xi.length();
    let Some((ring, degree)) = check_sections(sections)? else {
        return Err(Error::Empty("space of sections"));
    };
    let field = ring.field();
    if xi.ambient_dim().is_some_and(|n| n != ring.nvars()) {
        return Err(Error::SchemeMismatch(format!(
            "scheme lives in {} coordinates, sections in {}",
            xi.ambient_dim().unwrap(),
            ring.nvars()
        )));
    }
    let mut matrix = Matrix::zeros(length, sections.len(), field);
    match xi {
        SchemeIdeal::Points(points) => {
            for (r, pt) in points.iter().enumerate() {
                if pt.iter().all(|c| c.is_zero()) {
                    return Err(Error::SchemeMismatch(format!("point {r} has all coordinates zero")));
                }
                for (c, w) in sections.iter().enumerate() {
                    matrix.set(r, c, w.evaluate(pt));
                }
            }
        }
        SchemeIdeal::Jet { series, length } => {
            if series.iter().all(|s| s.first().is_none_or(|c| c.is_zero())) {
                return Err(Error::SchemeMismatch("jet is based at the origin of affine space".into()));
            }
            let eps = Ring::standard(&["eps"], field)?;
            let germ: Vec<MultiPoly> = series
                .iter()
                .map(|coeffs| {
                    MultiPoly::from_terms(
                        &eps,
                        coeffs.iter().enumerate().map(|(m, c)| (eps.monomial([m as u16].into_iter().collect()), c.clone())).collect(),
                    )
                })
                .collect();
            for (c, w) in sections.iter().enumerate() {
                for (r, e) in jet_rows(w, &eps, &germ, *length).into_iter().enumerate() {
                    matrix.set(r, c, e.constant_term());
                }
            }
        }
        SchemeIdeal::LineDivisor(coeffs) => {
            if coeffs.iter().all(|c| c.is_zero()) {
                return Err(Error::SchemeMismatch("the zero form defines no divisor".into()));
            }
            // F = s^a F'; F' lives in the chart s = 1, the factor s^a at [0:1].
            let a = coeffs.iter().rev().take_while(|c| c.is_zero()).count();
            let f_local: Vec<Scalar> = coeffs[..coeffs.len() - a].to_vec();
            let local_len = f_local.len() - 1;
            let m = degree as usize;
            for (c, w) in sections.iter().enumerate() {
                // coefficient of s^{m−j} t^j
                let mut by_t = vec![field.zero(); m + 1];
                for (mono, x) in w.terms() {
                    by_t[mono.exponents()[1] as usize] = x.clone();
                }
                if local_len > 0 {
                    for (r, x) in poly_rem(&by_t, &f_local).into_iter().enumerate().take(local_len) {
                        matrix.set(r, c, x);
                    }
                }
                // w(v, 1) = Σ_k coeff(s^k t^{m−k}) v^k, taken mod v^a
                for k in 0..a.min(m + 1) {
                    matrix.set(local_len + k, c, by_t[m - k].clone());
                }
            }
        }
    }
    let rank = matrix.rank();
    Ok(EvaluationMap { matrix, rank, length, surjective: rank == length })
}

/// A fat point on the line, `[1 : u]` or a coordinate point, of multiplicity `mult`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinePoint {
    /// `[1 : u_k]` for a parameter `u_k`.
    Generic(usize),
    /// `[1 : 0]`.
    Zero,
    /// `[0 : 1]`.
    Infinity,
}

/// Rank over `ℚ(u_1, …)` of evaluating binary forms on `Σ mult · point`.
/// A specialization reaching full rank settles the question; otherwise the
/// rank is computed symbolically.
pub fn generic_line_rank(sections: &[MultiPoly], profile: &[(LinePoint, usize)]) -> Result<usize> {
    let Some((ring, _)) = check_sections(sections)? else { return Ok(0) };
    if ring.nvars() != 2 {
        return Err(Error::SchemeMismatch("profiles need sections on the line".into()));
    }
    let field = ring.field();
    let params = profile.iter().filter(|(p, _)| matches!(p, LinePoint::Generic(_))).count();
    let mut names: Vec<String> = (1..=params).map(|i| format!("u{i}")).collect();
    names.push("eps".into());
    let target = Ring::standard(&names, field)?;
    let eps = MultiPoly::var(&target, params);
    let one = MultiPoly::one(&target);
    let mut rows: Vec<Vec<MultiPoly>> = Vec::new();
    let mut next_param = 0;
    for &(point, mult) in profile {
        let germ = match point {
            LinePoint::Generic(_) => {
                let u = MultiPoly::var(&target, next_param);
                next_param += 1;
                vec![one.clone(), &u + &eps]
            }
            LinePoint::Zero => vec![one.clone(), eps.clone()],
            LinePoint::Infinity => vec![eps.clone(), one.clone()],
        };
        let per_section: Vec<Vec<MultiPoly>> = sections.iter().map(|w| jet_rows(w, &target, &germ, mult)).collect();
        for k in 0..mult {
            rows.push(per_section.iter().map(|col| col[k].clone()).collect());
        }
    }
    let full = rows.len().min(sections.len());
    // distinct values for the parameters
    let special: Vec<Scalar> = (0..params).map(|i| field.from_i64(2 + 3 * i as i64)).chain([field.zero()]).collect();
    let dense: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|e| e.evaluate(&special)).collect()).collect();
    let specialized = Matrix::from_rows(dense, sections.len(), field).rank();
    if specialized == full {
        return Ok(full);
    }
    Ok(fraction_field_rank(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sections::{binary_forms, binary_ring};
    use crate::scalar::Field;

    fn q(v: i64) -> Scalar {
        Field::Rationals.from_i64(v)
    }

    fn forms(m: i64) -> Vec<MultiPoly> {
        binary_forms(&binary_ring(Field::Rationals), m)
    }

    #[test]
    fn two_points_on_the_line() {
        let ev = evaluation_map(&forms(1), &SchemeIdeal::Points(vec![vec![q(1), q(0)], vec![q(1), q(1)]])).unwrap();
        assert!(ev.surjective);
        assert_eq!(ev.rank, 2);
    }

    #[test]
    fn length_three_divisor_is_too_long_for_linear_forms() {
        // s t (s − t)
        let ev = evaluation_map(&forms(1), &SchemeIdeal::LineDivisor(vec![q(0), q(1), q(-1), q(0)])).unwrap();
        assert_eq!(ev.length, 3);
        assert!(!ev.surjective);
        assert_eq!(ev.rank, 2);
    }

    #[test]
    fn triple_point_jet_for_conics() {
        // t³ at [1:0]: the germ ε ↦ [1 : ε]
        let xi = SchemeIdeal::linear_jet(&[q(1), q(0)], &[q(0), q(1)], 3);
        let ev = evaluation_map(&forms(2), &xi).unwrap();
        // s², st, t² give the jets 1, ε, ε²
        let id = Matrix::identity(3, Field::Rationals);
        assert_eq!(ev.matrix, id);
        assert!(ev.surjective);
        // same scheme as the divisor t³
        let div = evaluation_map(&forms(2), &SchemeIdeal::LineDivisor(vec![q(0), q(0), q(0), q(1)])).unwrap();
        assert_eq!(div.rank, 3);
    }

    #[test]
    fn divisors_through_infinity() {
        // s² t: double point at [0:1] and a point at [1:0]
        let div = SchemeIdeal::LineDivisor(vec![q(0), q(1), q(0), q(0)]);
        assert_eq!(evaluation_map(&forms(2), &div).unwrap().rank, 3);
        // conics vanishing at [1:0]: only st, t²; the image misses the value there
        let sub = vec![binary_ring(Field::Rationals).parse("s*t").unwrap(), binary_ring(Field::Rationals).parse("t^2").unwrap()];
        let ev = evaluation_map(&sub, &div).unwrap();
        assert_eq!(ev.rank, 2);
        assert!(!ev.surjective);
    }

    #[test]
    fn four_points_impose_independent_conditions_on_conics() {
        let r = Ring::rational(&["x", "y", "z"]);
        let conics: Vec<MultiPoly> = r.monomials_of_degree(2).into_iter().map(|m| MultiPoly::term(&r, m, q(1))).collect();
        let pts = vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)], vec![q(1), q(1), q(1)]];
        let ev = evaluation_map(&conics, &SchemeIdeal::Points(pts)).unwrap();
        assert_eq!((ev.matrix.rows(), ev.matrix.cols()), (4, 6));
        assert!(ev.surjective);
    }

    #[test]
    fn mismatches_are_reported() {
        let err = evaluation_map(&forms(1), &SchemeIdeal::Points(vec![vec![q(1), q(0), q(0)]]));
        assert!(matches!(err, Err(Error::SchemeMismatch(_))));
        let err = evaluation_map(&forms(1), &SchemeIdeal::Points(vec![vec![q(0), q(0)]]));
        assert!(matches!(err, Err(Error::SchemeMismatch(_))));
        assert!(matches!(evaluation_map(&[], &SchemeIdeal::Points(vec![])), Err(Error::Empty(_))));
    }

    #[test]
    fn generic_profiles() {
        use LinePoint::*;
        // cubics separate any 4 points with multiplicity
        for profile in [vec![(Generic(0), 4)], vec![(Generic(0), 2), (Generic(1), 2)], vec![(Zero, 1), (Infinity, 3)]] {
            assert_eq!(generic_line_rank(&forms(3), &profile).unwrap(), 4);
        }
        assert_eq!(generic_line_rank(&forms(3), &[(Generic(0), 5)]).unwrap(), 4);
        // the pencil <s², t²> fails on a generic double point only symbolically
        let r = binary_ring(Field::Rationals);
        let pencil = vec![r.parse("s^2").unwrap(), r.parse("t^2").unwrap()];
        assert_eq!(generic_line_rank(&pencil, &[(Generic(0), 2)]).unwrap(), 2);
        assert_eq!(generic_line_rank(&pencil, &[(Zero, 2)]).unwrap(), 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(40))]

            #[test]
            fn rank_is_bounded(m in 0i64..=4, pts in proptest::collection::vec((-3i64..=3, -3i64..=3), 1..=6)) {
                let pts: Vec<Vec<Scalar>> = pts.into_iter().filter(|(a, b)| *a != 0 || *b != 0).map(|(a, b)| vec![q(a), q(b)]).collect();
                prop_assume!(!pts.is_empty());
                let w = forms(m);
                let ev = evaluation_map(&w, &SchemeIdeal::Points(pts.clone())).unwrap();
                prop_assert!(ev.rank <= w.len().min(pts.len()));
            }
        }
    }
}
