//! Numerical criteria for line bundles on curves, and effective bounds for
//! higher-dimensional varieties that are restated rather than checked.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// `g`, `d = deg L`, `b = deg B`, `p` and `h⁰(B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveNumerics {
    pub g: i64,
    pub d: i64,
    pub b: i64,
    pub p: i64,
    pub h0b: i64,
}

impl CurveNumerics {
    pub fn new(g: i64, d: i64, b: i64, p: i64, h0b: i64) -> Result<Self> {
        if g < 0 || p < 0 || h0b < 0 {
            return Err(Error::Precondition("genus, p and h⁰(B) are nonnegative".into()));
        }
        Ok(CurveNumerics { g, d, b, p, h0b })
    }
}

/// `n(n−1)⋯(n−k+1)/k!` for any integer `n`, zero for `k < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= BigRational::new(BigInt::from(n - i), BigInt::from(i + 1));
    }
    acc.to_integer()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `C(d−g, p)·(−p·d/(d−g) + d + b)`.
pub fn curve_chi_closed_form(c: &CurveNumerics) -> Result<BigRational> {
    if c.d <= c.g {
        return Err(Error::Precondition(format!("needs d > g, got d = {}, g = {}", c.d, c.g)));
    }
    let factor = -BigRational::new(BigInt::from(c.p * c.d), BigInt::from(c.d - c.g)) + rat(c.d + c.b);
    Ok(BigRational::from_integer(binomial(c.d - c.g, c.p)) * factor)
}

/// `χ(∧^p M_L ⊗ L ⊗ B)` by Riemann–Roch: `M_L` has rank `d − g` and degree `−d`
/// when `L` is nonspecial, so `∧^p M_L` has rank `C(d−g, p)` and degree
/// `−d·C(d−g−1, p−1)`.
pub fn curve_chi_rr(c: &CurveNumerics) -> Result<BigRational> {
    if c.d < 2 * c.g + 1 {
        return Err(Error::Precondition(format!("needs d ≥ 2g+1, got d = {}, g = {}", c.d, c.g)));
    }
    let degree = -BigInt::from(c.d) * binomial(c.d - c.g - 1, c.p - 1);
    let rank = binomial(c.d - c.g, c.p);
    Ok(BigRational::from_integer(degree + rank * BigInt::from(c.d + c.b + 1 - c.g)))
}

/// Rank and degree of the kernel bundle `M_L` for nonspecial `L`.
pub fn kernel_bundle_numerics(g: i64, d: i64) -> Result<(i64, i64)> {
    if d < 2 * g + 1 {
        return Err(Error::Precondition("L must be nonspecial".into()));
    }
    Ok((d - g, -d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CriterionVerdict {
    Certified,
    NotCertified { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveCriterion {
    pub numerics: CurveNumerics,
    pub verdict: CriterionVerdict,
    /// `C(d+1−g, p+1)·h⁰(B)`.
    pub lhs: Option<String>,
    pub chi_rr: Option<String>,
    pub chi_closed_form: Option<String>,
}

/// Certifies `K_{p,1}(C; B, L) ≠ 0` when `d, d+b ≥ 2g+p+1` and
/// `C(d+1−g, p+1)·h⁰(B) < χ(∧^p M_L ⊗ L ⊗ B)`.
pub fn curve_nonvanishing_criterion(c: &CurveNumerics) -> Result<CurveCriterion> {
    if c.h0b > c.p {
        return Err(Error::Precondition(format!(
            "h⁰(B) = {} > p = {} has no numerical certificate",
            c.h0b, c.p
        )));
    }
    let bound = 2 * c.g + c.p + 1;
    let mut out = CurveCriterion { numerics: *c, verdict: CriterionVerdict::Certified, lhs: None, chi_rr: None, chi_closed_form: None };
    if c.d < bound || c.d + c.b < bound {
        out.verdict = CriterionVerdict::NotCertified { reason: format!("needs d ≥ {bound} and d + b ≥ {bound}") };
        return Ok(out);
    }
    let lhs = BigRational::from_integer(binomial(c.d + 1 - c.g, c.p + 1) * BigInt::from(c.h0b));
    let chi = curve_chi_rr(c)?;
    out.chi_closed_form = curve_chi_closed_form(c).ok().map(|x| x.to_string());
    out.lhs = Some(lhs.to_string());
    out.chi_rr = Some(chi.to_string());
    if lhs >= chi {
        out.verdict = CriterionVerdict::NotCertified { reason: "the Euler characteristic does not exceed the bound".into() };
    }
    Ok(out)
}

/// `chi_rr − chi_closed_form`, which equals `C(d−g, p)·(1−g)`.
pub fn chi_discrepancy(c: &CurveNumerics) -> Result<BigRational> {
    Ok(curve_chi_rr(c)? - curve_chi_closed_form(c)?)
}

/// Least `d` for which the effective nonvanishing statement applies.
pub fn effective_bound(n: u64, p: u64) -> u64 {
    (n - 1) * (p + 1) + p + 3
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectiveBound {
    pub n: u64,
    pub p: u64,
    pub d: u64,
    pub hypotheses: String,
}

pub fn effective_bound_report(n: u64, p: u64) -> Result<EffectiveBound> {
    if n == 0 {
        return Err(Error::Precondition("dimension n ≥ 1".into()));
    }
    let d = effective_bound(n, p);
    let hypotheses = format!(
        "X smooth irreducible projective of dimension {n}; L = ω_X ⊗ A^⊗d ⊗ P^⊗{} ⊗ N with d ≥ {d}, A very ample, \
         P globally generated with P ⊗ B^∨ nef, N nef with N ⊗ B nef; if K_{{{p},1}}(X, B, L) = 0 then B is \
         {p}-spanned (the nefness conditions are not checked here)",
        n - 1
    );
    Ok(EffectiveBound { n, p, d, hypotheses })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GonalityReport {
    pub n: u64,
    pub p: u64,
    pub covering_gonality_at_least: Option<u64>,
    pub degree_of_irrationality_at_least: Option<u64>,
    pub statement: String,
}

/// Lower bounds `p + 2` on covering gonality and degree of irrationality,
/// given the vanishing of `K_{h⁰−1−n−p, n}(X; 𝒪_X, L)`.
pub fn gonality_bound_report(n: u64, p: u64, vanishing: bool) -> GonalityReport {
    if !vanishing {
        return GonalityReport {
            n,
            p,
            covering_gonality_at_least: None,
            degree_of_irrationality_at_least: None,
            statement: "no bound certified".into(),
        };
    }
    let bound = p + 2;
    GonalityReport {
        n,
        p,
        covering_gonality_at_least: Some(bound),
        degree_of_irrationality_at_least: Some(bound),
        statement: format!("covering gonality ≥ {bound} and degree of irrationality ≥ {bound}"),
    }
}

/// Whether `b` and `h⁰(B)` can occur together on a curve of genus `g`:
/// zero below degree 0, at least `b+1−g`, at most `b/2+1` in the special
/// range by Clifford, exactly `b+1−g` beyond `2g−2`.
pub fn h0_is_possible(g: i64, b: i64, h0b: i64) -> bool {
    if b < 0 {
        return h0b == 0;
    }
    if b > 2 * g - 2 {
        return h0b == b + 1 - g;
    }
    h0b >= (b + 1 - g).max(0) && 2 * (h0b - 1) <= b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(g: i64, d: i64, b: i64, p: i64, h0b: i64) -> CurveNumerics {
        CurveNumerics::new(g, d, b, p, h0b).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 0), BigInt::from(1));
        assert_eq!(binomial(2, 3), BigInt::from(0));
        assert_eq!(binomial(4, -1), BigInt::from(0));
        assert_eq!(binomial(-1, 2), BigInt::from(1));
    }

    #[test]
    fn displayed_formula_values() {
        // p = 0 gives d + b
        assert_eq!(curve_chi_closed_form(&num(1, 4, 0, 0, 0)).unwrap(), rat(4));
        assert_eq!(curve_chi_closed_form(&num(3, 9, -2, 0, 0)).unwrap(), rat(7));
        assert_eq!(curve_chi_closed_form(&num(0, 3, 0, 1, 1)).unwrap(), rat(6));
        assert!(curve_chi_closed_form(&num(2, 2, 0, 1, 0)).is_err());
    }

    #[test]
    fn riemann_roch_values() {
        assert_eq!(curve_chi_rr(&num(0, 3, 0, 1, 1)).unwrap(), rat(9));
        assert_eq!(curve_chi_rr(&num(2, 7, 1, 0, 0)).unwrap(), rat(7));
        assert!(curve_chi_rr(&num(2, 4, 0, 0, 0)).is_err());
    }

    #[test]
    fn formulas_agree_in_genus_one() {
        for d in 3..12 {
            for b in -3..6 {
                for p in 0..5 {
                    let c = num(1, d, b, p, 0);
                    assert_eq!(curve_chi_closed_form(&c).unwrap(), curve_chi_rr(&c).unwrap(), "{c:?}");
                }
            }
        }
    }

    #[test]
    fn discrepancy_identity() {
        for g in 0..5 {
            for p in 0..5 {
                for d in 2 * g + 1..2 * g + 8 {
                    let c = num(g, d, 1, p, 0);
                    let expected = BigRational::from_integer(binomial(d - g, p) * BigInt::from(1 - g));
                    assert_eq!(chi_discrepancy(&c).unwrap(), expected, "{c:?}");
                }
            }
        }
    }

    #[test]
    fn criterion_cases() {
        assert_eq!(curve_nonvanishing_criterion(&num(0, 3, 0, 1, 1)).unwrap().verdict, CriterionVerdict::Certified);
        let tight = curve_nonvanishing_criterion(&num(1, 3, 0, 1, 0)).unwrap();
        assert!(matches!(tight.verdict, CriterionVerdict::NotCertified { .. }));
        assert_eq!(curve_nonvanishing_criterion(&num(2, 9, -2, 2, 0)).unwrap().verdict, CriterionVerdict::Certified);
        assert!(curve_nonvanishing_criterion(&num(0, 5, 2, 1, 2)).is_err());
    }

    #[test]
    fn effective_bounds() {
        assert_eq!(effective_bound(1, 0), 3);
        assert_eq!(effective_bound(2, 3), 10);
        assert_eq!(effective_bound(3, 3), 14);
        assert_eq!(effective_bound(3, 1), 8);
        assert!(effective_bound_report(0, 1).is_err());
        assert!(effective_bound_report(2, 1).unwrap().hypotheses.contains("very ample"));
    }

    #[test]
    fn gonality() {
        let r = gonality_bound_report(2, 1, true);
        assert_eq!((r.covering_gonality_at_least, r.degree_of_irrationality_at_least), (Some(3), Some(3)));
        assert_eq!(gonality_bound_report(2, 0, true).covering_gonality_at_least, Some(2));
        let none = gonality_bound_report(2, 1, false);
        assert_eq!(none.statement, "no bound certified");
        assert_eq!(none.covering_gonality_at_least, None);
    }

    #[test]
    fn possible_h0() {
        assert!(h0_is_possible(0, 2, 3));
        assert!(!h0_is_possible(0, 2, 2));
        assert!(h0_is_possible(2, 2, 1) && h0_is_possible(2, 2, 2) && !h0_is_possible(2, 2, 3));
        assert!(h0_is_possible(3, -1, 0));
    }
}
