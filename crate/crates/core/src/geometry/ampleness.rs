//! Higher-order ampleness: whether a space of sections surjects onto
//! `H⁰(𝒪_ξ)` for every length-`(p+1)` subscheme `ξ` of a family.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::schemes::{evaluation_map, generic_line_rank, LinePoint, SchemeIdeal};
use super::sections::{binary_forms, binary_ring};
use crate::error::{Error, Result};
use crate::koszul::subsets;
use crate::poly::MultiPoly;
use crate::scalar::{Field, Scalar};
use crate::symgrp::partitions;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every multiplicity profile on the line at generic and coordinate
    /// points, or every subset of a finite point set.
    Exhaustive,
    Sampled { seed: u64, trials: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmplenessTarget {
    /// Binary forms of one degree on the projective line.
    Line { sections: Vec<MultiPoly> },
    /// A finite reduced set of points with a space of forms on it.
    PointSet { points: Vec<Vec<Scalar>>, sections: Vec<MultiPoly> },
    /// Projective space with a space of forms; only sampling applies.
    Projective { sections: Vec<MultiPoly> },
}

impl AmplenessTarget {
    /// The complete linear system of `𝒪(m)` on the line.
    pub fn line_bundle(m: i64, field: Field) -> Self {
        AmplenessTarget::Line { sections: binary_forms(&binary_ring(field), m) }
    }

    fn sections(&self) -> &[MultiPoly] {
        match self {
            AmplenessTarget::Line { sections }
            | AmplenessTarget::PointSet { sections, .. }
            | AmplenessTarget::Projective { sections } => sections,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    Proved,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCheck {
    pub p: usize,
    pub passed: bool,
    pub schemes_checked: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmplenessReport {
    pub evidence: Evidence,
    pub checks: Vec<OrderCheck>,
    /// Largest `p` such that every check up to `p` passed.
    pub order: Option<usize>,
}

impl AmplenessReport {
    pub fn is_p_very_ample(&self, p: usize) -> bool {
        self.order.is_some_and(|o| o >= p)
    }
}

/// A profile up to renaming the generic points.
fn profile_shape(profile: &[(LinePoint, usize)]) -> Vec<(u8, usize)> {
    let mut shape: Vec<(u8, usize)> = profile
        .iter()
        .map(|&(pt, m)| {
            let kind = match pt {
                LinePoint::Generic(_) => 0,
                LinePoint::Zero => 1,
                LinePoint::Infinity => 2,
            };
            (kind, m)
        })
        .collect();
    shape.sort_unstable();
    shape
}

/// Multiplicity profiles of total length `len`: generic points, possibly
/// with one part moved to `[1:0]` and one to `[0:1]`.
pub fn line_profiles(len: usize) -> Vec<Vec<(LinePoint, usize)>> {
    let mut out: Vec<Vec<(LinePoint, usize)>> = Vec::new();
    let mut seen: BTreeSet<Vec<(u8, usize)>> = BTreeSet::new();
    for lambda in partitions(len) {
        let s = lambda.len();
        let mut choices: Vec<(Option<usize>, Option<usize>)> = vec![(None, None)];
        for i in 0..s {
            choices.push((Some(i), None));
            choices.push((None, Some(i)));
            for j in (0..s).filter(|&j| j != i) {
                choices.push((Some(i), Some(j)));
            }
        }
        for (zero, inf) in choices {
            let mut generic = 0;
            let mut profile: Vec<(LinePoint, usize)> = lambda
                .iter()
                .enumerate()
                .map(|(i, &m)| {
                    let point = if zero == Some(i) {
                        LinePoint::Zero
                    } else if inf == Some(i) {
                        LinePoint::Infinity
                    } else {
                        generic += 1;
                        LinePoint::Generic(generic - 1)
                    };
                    (point, m)
                })
                .collect();
            profile.sort_by_key(|&(pt, m)| (std::cmp::Reverse(m), pt));
            if seen.insert(profile_shape(&profile)) {
                out.push(profile);
            }
        }
    }
    out
}

fn describe_profile(profile: &[(LinePoint, usize)]) -> String {
    profile
        .iter()
        .map(|&(pt, m)| {
            let p = match pt {
                LinePoint::Generic(k) => format!("[1:u{}]", k + 1),
                LinePoint::Zero => "[1:0]".into(),
                LinePoint::Infinity => "[0:1]".into(),
            };
            format!("{m}·{p}")
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn describe_points(points: &[Vec<Scalar>]) -> String {
    points
        .iter()
        .map(|p| format!("[{}]", p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":")))
        .collect::<Vec<_>>()
        .join(", ")
}

fn check_line_exhaustive(sections: &[MultiPoly], p: usize) -> Result<OrderCheck> {
    let len = p + 1;
    if sections.len() < len {
        return Ok(OrderCheck {
            p,
            passed: false,
            schemes_checked: 0,
            witness: Some(format!("only {} sections for length {len}", sections.len())),
        });
    }
    let profiles = line_profiles(len);
    for (i, profile) in profiles.iter().enumerate() {
        if generic_line_rank(sections, profile)? < len {
            return Ok(OrderCheck { p, passed: false, schemes_checked: i + 1, witness: Some(describe_profile(profile)) });
        }
    }
    Ok(OrderCheck { p, passed: true, schemes_checked: profiles.len(), witness: None })
}

fn check_point_subsets(points: &[Vec<Scalar>], sections: &[MultiPoly], subsets_of: Vec<Vec<usize>>, p: usize) -> Result<OrderCheck> {
    let count = subsets_of.len();
    for (i, subset) in subsets_of.into_iter().enumerate() {
        let pts: Vec<Vec<Scalar>> = subset.iter().map(|&k| points[k].clone()).collect();
        if !evaluation_map(sections, &SchemeIdeal::Points(pts.clone()))?.surjective {
            return Ok(OrderCheck { p, passed: false, schemes_checked: i + 1, witness: Some(describe_points(&pts)) });
        }
    }
    Ok(OrderCheck { p, passed: true, schemes_checked: count, witness: None })
}

fn proportional(a: &[Scalar], b: &[Scalar]) -> bool {
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| (&a[i] * &b[j]) == (&a[j] * &b[i])))
        && a.iter().zip(b).all(|(x, y)| x.is_zero() == y.is_zero())
}

fn random_point(rng: &mut ChaCha8Rng, field: Field, dim: usize) -> Vec<Scalar> {
    loop {
        let p: Vec<Scalar> = (0..dim).map(|_| field.from_i64(rng.gen_range(-6..=6))).collect();
        if p.iter().any(|c| !c.is_zero()) {
            return p;
        }
    }
}

fn check_sampled(sections: &[MultiPoly], p: usize, seed: u64, trials: usize) -> Result<OrderCheck> {
    let Some(first) = sections.first() else {
        return Ok(OrderCheck { p, passed: false, schemes_checked: 0, witness: Some("no sections".into()) });
    };
    let ring = first.ring().clone();
    let (field, dim) = (ring.field(), ring.nvars());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let len = p + 1;
    let mut checked = 0;
    for trial in 0..trials {
        let xi = if trial % 2 == 0 {
            let mut pts: Vec<Vec<Scalar>> = Vec::new();
            while pts.len() < len {
                let c = random_point(&mut rng, field, dim);
                if !pts.iter().any(|q| proportional(q, &c)) {
                    pts.push(c);
                }
            }
            SchemeIdeal::Points(pts)
        } else {
            let point = random_point(&mut rng, field, dim);
            let series = point
                .iter()
                .map(|c| {
                    let mut s = vec![c.clone()];
                    s.extend((1..len).map(|_| field.from_i64(rng.gen_range(-4..=4))));
                    s
                })
                .collect();
            SchemeIdeal::Jet { series, length: len }
        };
        checked += 1;
        if !evaluation_map(sections, &xi)?.surjective {
            let witness = match &xi {
                SchemeIdeal::Points(pts) => describe_points(pts),
                SchemeIdeal::Jet { series, .. } => format!("jet at {}", describe_points(&[series.iter().map(|s| s[0].clone()).collect()])),
                SchemeIdeal::LineDivisor(_) => unreachable!(),
            };
            return Ok(OrderCheck { p, passed: false, schemes_checked: checked, witness: Some(witness) });
        }
    }
    Ok(OrderCheck { p, passed: true, schemes_checked: checked, witness: None })
}

/// Checks `p = 0..=p_max` and reports the largest order reached.
pub fn very_ampleness_order(target: &AmplenessTarget, p_max: usize, strategy: Strategy) -> Result<AmplenessReport> {
    let sections = target.sections();
    let evidence = match (target, strategy) {
        (AmplenessTarget::Projective { .. }, Strategy::Exhaustive) => {
            return Err(Error::Precondition(
                "exhaustive checks need the projective line or a finite point set".into(),
            ))
        }
        (_, Strategy::Exhaustive) => Evidence::Proved,
        (_, Strategy::Sampled { .. }) => Evidence::Sampled,
    };
    let mut checks = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let check = if sections.is_empty() {
            OrderCheck { p, passed: false, schemes_checked: 0, witness: Some("no sections".into()) }
        } else {
            match (target, strategy) {
                (AmplenessTarget::Line { sections }, Strategy::Exhaustive) => check_line_exhaustive(sections, p)?,
                (AmplenessTarget::PointSet { points, sections }, Strategy::Exhaustive) => {
                    check_point_subsets(points, sections, subsets(points.len(), p + 1), p)?
                }
                (AmplenessTarget::PointSet { points, sections }, Strategy::Sampled { seed, trials }) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p as u64);
                    let picks = if p + 1 > points.len() {
                        Vec::new()
                    } else {
                        (0..trials)
                            .map(|_| {
                                let mut s = sample(&mut rng, points.len(), p + 1).into_vec();
                                s.sort_unstable();
                                s
                            })
                            .collect()
                    };
                    check_point_subsets(points, sections, picks, p)?
                }
                (_, Strategy::Sampled { seed, trials }) => check_sampled(sections, p, seed, trials)?,
                (AmplenessTarget::Projective { .. }, Strategy::Exhaustive) => unreachable!(),
            }
        };
        checks.push(check);
    }
    let order = checks.iter().take_while(|c| c.passed).last().map(|c| c.p);
    Ok(AmplenessReport { evidence, checks, order })
}
