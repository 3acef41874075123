//! Elements of graded free modules `R^r`, stored as sorted term lists.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::poly::{fmt_monomial, Monomial, MultiPoly, RingRef};
use crate::scalar::Scalar;

/// Term order on a free module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleOrder {
    /// Term over position: monomials first, lower component index breaks ties.
    Top,
    /// Position over term.
    Pot,
    /// Components below `split` dominate every component at or above it;
    /// term over position inside each block.
    Elimination { split: usize },
}

/// Ambient free module: ring, generator degrees and term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    pub ring: RingRef,
    pub shifts: Vec<i64>,
    pub order: ModuleOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mono: Monomial,
    pub comp: u32,
    pub coef: Scalar,
}

impl FreeModule {
    pub fn new(ring: &RingRef, shifts: Vec<i64>, order: ModuleOrder) -> Self {
        FreeModule { ring: ring.clone(), shifts, order }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn cmp_terms(&self, a: (&Monomial, u32), b: (&Monomial, u32)) -> Ordering {
        let ring = &self.ring;
        let top = || ring.cmp(a.0, b.0).then_with(|| b.1.cmp(&a.1));
        match self.order {
            ModuleOrder::Top => top(),
            ModuleOrder::Pot => b.1.cmp(&a.1).then_with(|| ring.cmp(a.0, b.0)),
            ModuleOrder::Elimination { split } => {
                let ua = (a.1 as usize) < split;
                let ub = (b.1 as usize) < split;
                ua.cmp(&ub).then_with(top)
            }
        }
    }

    pub fn term_degree(&self, m: &Monomial, comp: u32) -> i64 {
        m.degree() as i64 + self.shifts[comp as usize]
    }
}

/// A module element; terms strictly descending in the ambient order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ModuleVector {
    terms: Vec<Term>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        ModuleVector { terms: Vec::new() }
    }

    pub fn from_terms(fm: &FreeModule, mut terms: Vec<Term>) -> Self {
        terms.retain(|t| !t.coef.is_zero());
        terms.sort_by(|a, b| fm.cmp_terms((&b.mono, b.comp), (&a.mono, a.comp)));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(l) if l.mono == t.mono && l.comp == t.comp => l.coef = &l.coef + &t.coef,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coef.is_zero());
        ModuleVector { terms: out }
    }

    pub fn from_polys(fm: &FreeModule, entries: &[MultiPoly]) -> Result<Self, AlgebraError> {
        assert_eq!(entries.len(), fm.rank(), "vector length must equal the module rank");
        let mut terms = Vec::new();
        for (c, p) in entries.iter().enumerate() {
            if p.ring() != &fm.ring {
                return Err(AlgebraError::RingMismatch);
            }
            terms.extend(p.terms().iter().map(|(m, k)| Term {
                mono: m.clone(),
                comp: c as u32,
                coef: k.clone(),
            }));
        }
        Ok(Self::from_terms(fm, terms))
    }

    /// Unit vector `e_i`.
    pub fn unit(fm: &FreeModule, i: usize) -> Self {
        ModuleVector {
            terms: vec![Term {
                mono: fm.ring.one_monomial(),
                comp: i as u32,
                coef: fm.ring.field().one(),
            }],
        }
    }

    pub fn to_polys(&self, fm: &FreeModule) -> Vec<MultiPoly> {
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); fm.rank()];
        for t in &self.terms {
            buckets[t.comp as usize].push((t.mono.clone(), t.coef.clone()));
        }
        buckets
            .into_iter()
            .map(|ts| MultiPoly::from_terms(&fm.ring, ts))
            .collect()
    }

    pub(crate) fn from_sorted_terms(terms: Vec<Term>) -> Self {
        ModuleVector { terms }
    }

    pub(crate) fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub(crate) fn pop_leading(&mut self) -> Term {
        self.terms.remove(0)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Degree if every term has the same shifted degree.
    pub fn homogeneous_degree(&self, fm: &FreeModule) -> Option<i64> {
        let mut it = self.terms.iter().map(|t| fm.term_degree(&t.mono, t.comp));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self, fm: &FreeModule) -> bool {
        self.is_zero() || self.homogeneous_degree(fm).is_some()
    }

    /// Largest shifted degree of a term.
    pub fn sugar(&self, fm: &FreeModule) -> i64 {
        self.terms
            .iter()
            .map(|t| fm.term_degree(&t.mono, t.comp))
            .max()
            .unwrap_or(i64::MIN / 4)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ModuleVector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { mono: t.mono.clone(), comp: t.comp, coef: &t.coef * c })
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ModuleVector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { mono: t.mono.mul(m), comp: t.comp, coef: &t.coef * c })
                .collect(),
        }
    }

    pub fn mul_poly(&self, fm: &FreeModule, p: &MultiPoly) -> Self {
        let mut acc = Self::zero();
        for (m, c) in p.terms() {
            acc = acc.add(fm, &self.mul_term(m, c));
        }
        acc
    }

    pub fn add(&self, fm: &FreeModule, other: &Self) -> Self {
        self.axpy(fm, other, None, None)
    }

    pub fn sub(&self, fm: &FreeModule, other: &Self) -> Self {
        let minus = fm.ring.field().from_i64(-1);
        self.axpy(fm, other, None, Some(&minus))
    }

    /// `self + c * m * other` in one merge pass.
    pub fn axpy(
        &self,
        fm: &FreeModule,
        other: &Self,
        m: Option<&Monomial>,
        c: Option<&Scalar>,
    ) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let shifted = |t: &Term| Term {
            mono: match m {
                Some(m) => t.mono.mul(m),
                None => t.mono.clone(),
            },
            comp: t.comp,
            coef: match c {
                Some(c) => &t.coef * c,
                None => t.coef.clone(),
            },
        };
        let (mut i, mut j) = (0, 0);
        let mut pending: Option<Term> = other.terms.first().map(shifted);
        while i < self.terms.len() || pending.is_some() {
            let Some(b) = pending.as_ref() else {
                out.extend(self.terms[i..].iter().cloned());
                break;
            };
            if i == self.terms.len() {
                out.push(pending.take().unwrap());
                j += 1;
                pending = other.terms.get(j).map(shifted);
                continue;
            }
            let a = &self.terms[i];
            match fm.cmp_terms((&a.mono, a.comp), (&b.mono, b.comp)) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(pending.take().unwrap());
                    j += 1;
                    pending = other.terms.get(j).map(shifted);
                }
                Ordering::Equal => {
                    let s = &a.coef + &b.coef;
                    if !s.is_zero() {
                        out.push(Term { mono: a.mono.clone(), comp: a.comp, coef: s });
                    }
                    i += 1;
                    j += 1;
                    pending = other.terms.get(j).map(shifted);
                }
            }
        }
        ModuleVector { terms: out }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(t) if !t.coef.is_one() => self.scale(&t.coef.inv()),
            _ => self.clone(),
        }
    }

    /// Re-sorts the vector for a different ambient order (same ring and rank).
    pub fn reorder(&self, fm: &FreeModule) -> Self {
        Self::from_terms(fm, self.terms.clone())
    }

    /// Moves component `i` to component `map[i]`, keeping only mapped ones.
    pub fn remap_components(&self, fm: &FreeModule, map: &[Option<usize>]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                map[t.comp as usize].map(|c| Term { mono: t.mono.clone(), comp: c as u32, coef: t.coef.clone() })
            })
            .collect();
        Self::from_terms(fm, terms)
    }

    pub fn display<'a>(&'a self, fm: &'a FreeModule) -> impl fmt::Display + 'a {
        VectorDisplay { v: self, fm }
    }
}

struct VectorDisplay<'a> {
    v: &'a ModuleVector,
    fm: &'a FreeModule,
}

impl fmt::Display for VectorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            return write!(f, "0");
        }
        for (k, t) in self.v.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", t.coef)?;
            if !t.mono.is_one() {
                write!(f, "*")?;
                fmt_monomial(f, &self.fm.ring, &t.mono)?;
            }
            write!(f, "*e{}", t.comp)?;
        }
        Ok(())
    }
}
