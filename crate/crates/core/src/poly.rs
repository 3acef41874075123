//! Sparse multivariate polynomials with exact coefficients.
//!
//! Every polynomial carries a shared [`Ring`] describing its variables, their
//! integer weights, the coefficient field and the monomial order. Terms are
//! kept strictly descending in that order with no zero coefficients, so two
//! polynomials are equal exactly when their term lists are.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::AlgebraError;
use crate::scalar::{parse_rational, Field, Scalar};

pub type Exponents = SmallVec<[u16; 12]>;

/// Monomial order on a ring's variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    /// The first `split` variables form an eliminating block, each block
    /// compared by graded reverse lexicographic order.
    Block { split: usize },
}

impl MonomialOrder {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "grevlex" => Some(MonomialOrder::Grevlex),
            "lex" => Some(MonomialOrder::Lex),
            _ => s
                .strip_prefix("block:")
                .and_then(|n| n.parse().ok())
                .map(|split| MonomialOrder::Block { split }),
        }
    }
}

/// A monomial: exponent vector plus its cached weighted degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Exponents,
}

impl Monomial {
    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    /// Weighted total degree.
    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: self.deg + other.deg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial {
            deg: self.deg - other.deg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial, ring: &Ring) -> Monomial {
        ring.monomial(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i` set iff variable `i mod 64` occurs.
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1 << (i % 64)))
    }
}

/// Variables, weights, coefficient field and monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    names: Vec<String>,
    weights: Vec<u32>,
    order: MonomialOrder,
    field: Field,
}

pub type RingRef = Arc<Ring>;

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new(
        names: Vec<String>,
        weights: Vec<u32>,
        order: MonomialOrder,
        field: Field,
    ) -> Result<RingRef, AlgebraError> {
        if names.len() != weights.len() {
            return Err(AlgebraError::InvalidRing("one weight per variable".into()));
        }
        if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
            return Err(AlgebraError::InvalidRing(format!("bad variable name `{bad}`")));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(AlgebraError::InvalidRing(format!("duplicate variable `{n}`")));
            }
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(AlgebraError::InvalidRing("weights must be positive".into()));
        }
        if let MonomialOrder::Block { split } = order {
            if split == 0 || split >= names.len() {
                return Err(AlgebraError::InvalidRing(
                    "block order needs two nonempty blocks".into(),
                ));
            }
        }
        Ok(Arc::new(Ring { names, weights, order, field }))
    }

    /// Standard-graded ring over `field` with grevlex order.
    pub fn standard<S: AsRef<str>>(names: &[S], field: Field) -> Result<RingRef, AlgebraError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let weights = vec![1; names.len()];
        Ring::new(names, weights, MonomialOrder::Grevlex, field)
    }

    /// Standard-graded grevlex ring over the rationals.
    pub fn rational<S: AsRef<str>>(names: &[S]) -> RingRef {
        Ring::standard(names, Field::Rationals).expect("valid variable names")
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn with_order(&self, order: MonomialOrder) -> Result<RingRef, AlgebraError> {
        Ring::new(self.names.clone(), self.weights.clone(), order, self.field)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn monomial(&self, exps: Exponents) -> Monomial {
        debug_assert_eq!(exps.len(), self.nvars());
        let deg = exps.iter().zip(&self.weights).map(|(&e, &w)| e as u32 * w).sum();
        Monomial { deg, exps }
    }

    pub fn one_monomial(&self) -> Monomial {
        self.monomial(SmallVec::from_elem(0, self.nvars()))
    }

    pub fn var_monomial(&self, i: usize) -> Monomial {
        let mut e: Exponents = SmallVec::from_elem(0, self.nvars());
        e[i] = 1;
        self.monomial(e)
    }

    /// Compares two monomials in this ring's order.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.order {
            MonomialOrder::Grevlex => a.deg.cmp(&b.deg).then_with(|| revlex(&a.exps, &b.exps)),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Block { split } => {
                let da = self.partial_degree(&a.exps[..split], 0);
                let db = self.partial_degree(&b.exps[..split], 0);
                da.cmp(&db)
                    .then_with(|| revlex(&a.exps[..split], &b.exps[..split]))
                    .then_with(|| {
                        let ea = self.partial_degree(&a.exps[split..], split);
                        let eb = self.partial_degree(&b.exps[split..], split);
                        ea.cmp(&eb)
                            .then_with(|| revlex(&a.exps[split..], &b.exps[split..]))
                    })
            }
        }
    }

    fn partial_degree(&self, exps: &[u16], offset: usize) -> u32 {
        exps.iter()
            .zip(&self.weights[offset..])
            .map(|(&e, &w)| e as u32 * w)
            .sum()
    }

    /// All monomials of weighted degree `deg`, descending in the ring order.
    pub fn monomials_of_degree(&self, deg: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur: Exponents = SmallVec::from_elem(0, self.nvars());
        self.enumerate(0, deg, &mut cur, &mut out);
        out.sort_by(|a, b| self.cmp(b, a));
        out
    }

    fn enumerate(&self, i: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Monomial>) {
        if i == self.nvars() {
            if left == 0 {
                out.push(self.monomial(cur.clone()));
            }
            return;
        }
        let w = self.weights[i];
        let mut e = 0;
        while e * w <= left {
            cur[i] = e as u16;
            self.enumerate(i + 1, left - e * w, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }

    /// Parses a polynomial in the text syntax `3*x^2*y - 1/2*z`.
    pub fn parse(self: &Arc<Self>, s: &str) -> Result<MultiPoly, AlgebraError> {
        Parser { src: s.as_bytes(), pos: 0, ring: self }.parse_all()
    }
}

fn revlex(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            // smaller exponent in the last differing variable wins
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Weighted degree of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradedDegree {
    /// The zero polynomial, of degree −∞.
    NegInfinity,
    Homogeneous(u32),
    Inhomogeneous,
}

/// Sparse polynomial; terms strictly descending, coefficients nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ring: RingRef,
    terms: Vec<(Monomial, Scalar)>,
}

fn check_ring(a: &RingRef, b: &RingRef) -> Result<(), AlgebraError> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(AlgebraError::RingMismatch)
    }
}

impl MultiPoly {
    pub fn zero(ring: &RingRef) -> Self {
        MultiPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingRef, c: Scalar) -> Self {
        Self::term(ring, ring.one_monomial(), c)
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &RingRef, c: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(c))
    }

    pub fn var(ring: &RingRef, i: usize) -> Self {
        Self::term(ring, ring.var_monomial(i), ring.field().one())
    }

    pub fn term(ring: &RingRef, m: Monomial, c: Scalar) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        MultiPoly { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(ring: &RingRef, mut terms: Vec<(Monomial, Scalar)>) -> Self {
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = &*lc + &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        MultiPoly { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
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

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> Scalar {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.ring.field().zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn graded_degree(&self) -> GradedDegree {
        let mut degs = self.terms.iter().map(|(m, _)| m.degree());
        match degs.next() {
            None => GradedDegree::NegInfinity,
            Some(d) if degs.all(|e| e == d) => GradedDegree::Homogeneous(d),
            Some(_) => GradedDegree::Inhomogeneous,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        !matches!(self.graded_degree(), GradedDegree::Inhomogeneous)
    }

    /// Largest weighted degree of a term (0 for the zero polynomial).
    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.combine(other, None))
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.combine(other, Some(&self.ring.field().from_i64(-1))))
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        check_ring(&self.ring, &other.ring)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self + factor * other`, sorted merge.
    fn combine(&self, other: &MultiPoly, factor: Option<&Scalar>) -> MultiPoly {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let scaled = |c: &Scalar| match factor {
            Some(f) => f * c,
            None => c.clone(),
        };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match ring.cmp(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0.clone(), scaled(&b.1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a.1 + &scaled(&b.1);
                    if !c.is_zero() {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), scaled(c))));
        MultiPoly { ring: ring.clone(), terms: out }
    }

    fn mul_unchecked(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = MultiPoly::zero(&self.ring);
        for (m, c) in &small.terms {
            acc = acc.combine(&large.mul_term(m, c), None);
        }
        acc
    }

    /// Multiplies by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        self.mul_term(&self.ring.one_monomial(), c)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }

    /// Exact quotient `self / divisor`; fails when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        check_ring(&self.ring, &divisor.ring)?;
        let (lm, lc) = divisor.leading().ok_or(AlgebraError::InexactDivision)?.clone();
        let lc_inv = lc.inv();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            if !lm.divides(&m) {
                return Err(AlgebraError::InexactDivision);
            }
            let qm = m.div(&lm);
            let qc = &c * &lc_inv;
            rem = rem.combine(&divisor.mul_term(&qm, &qc), Some(&self.ring.field().from_i64(-1)));
            quot.push((qm, qc));
        }
        Ok(MultiPoly { ring: self.ring.clone(), terms: quot })
    }

    /// Substitutes `images[i]` for variable `i`; images live in the target ring.
    pub fn compose(&self, target: &RingRef, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.ring.nvars());
        let mut acc = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul_unchecked(&images[i].pow(e as u32));
                }
            }
            acc = acc.combine(&t, None);
        }
        acc
    }

    /// Renames variables: variable `i` becomes variable `perm[i]` of `target`.
    pub fn map_variables(&self, target: &RingRef, perm: &[usize]) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e: Exponents = SmallVec::from_elem(0, target.nvars());
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[perm[i]] += x;
                }
                (target.monomial(e), c.clone())
            })
            .collect();
        MultiPoly::from_terms(target, terms)
    }

    /// Moves the polynomial into an identical ring with a different order.
    pub fn reorder(&self, target: &RingRef) -> MultiPoly {
        MultiPoly::from_terms(target, self.terms.clone())
    }

    /// Evaluates at a point given by field elements.
    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        let field = self.ring.field();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = &t * &point[i];
                }
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("ring mismatch")
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("ring mismatch")
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("ring mismatch")
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

pub(crate) fn fmt_monomial(f: &mut fmt::Formatter<'_>, ring: &Ring, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", ring.names[i])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                fmt_monomial(f, &self.ring, m)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a RingRef,
}

impl Parser<'_> {
    fn parse_all(mut self) -> Result<MultiPoly, AlgebraError> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(AlgebraError::parse(self.pos, "unexpected trailing input"));
        }
        Ok(p)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = MultiPoly::zero(self.ring);
        let mut sign = 1;
        match self.peek() {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<MultiPoly, AlgebraError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.take_while(|c| c.is_ascii_digit());
            let e: u32 = digits
                .parse()
                .map_err(|_| AlgebraError::parse(start, "expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && f(self.src[self.pos]) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<MultiPoly, AlgebraError> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(AlgebraError::parse(self.pos, "expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut lit = self.take_while(|c| c.is_ascii_digit());
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.take_while(|c| c.is_ascii_digit());
                    if den.is_empty() {
                        return Err(AlgebraError::parse(self.pos, "expected denominator"));
                    }
                    lit = format!("{lit}/{den}");
                }
                let q = parse_rational(&lit)
                    .filter(|q| !q.denom().is_zero())
                    .ok_or_else(|| AlgebraError::parse(start, "bad number"))?;
                Ok(MultiPoly::constant(self.ring, self.ring.field().from_rational(&q)?))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == b'_');
                let i = self
                    .ring
                    .var_index(&name)
                    .ok_or(AlgebraError::UnknownVariable(name))?;
                Ok(MultiPoly::var(self.ring, i))
            }
            _ => Err(AlgebraError::parse(self.pos, "expected number, variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> RingRef {
        Ring::rational(&["x", "y", "z"])
    }

    #[test]
    fn add_cancels() {
        let r = ring();
        let f = r.parse("x + y").unwrap();
        let g = r.parse("-x").unwrap();
        assert_eq!((&f + &g).to_string(), "y");
    }

    #[test]
    fn difference_of_squares() {
        let r = ring();
        let f = &r.parse("x+y").unwrap() * &r.parse("x-y").unwrap();
        assert_eq!(f.to_string(), "x^2 - y^2");
    }

    #[test]
    fn scale_by_zero_is_empty() {
        let r = ring();
        let f = r.parse("x").unwrap().scale(&r.field().zero());
        assert!(f.terms().is_empty());
    }

    #[test]
    fn graded_degrees() {
        let r = ring();
        assert_eq!(r.parse("x^2*y").unwrap().graded_degree(), GradedDegree::Homogeneous(3));
        assert_eq!(r.parse("x^2 + y").unwrap().graded_degree(), GradedDegree::Inhomogeneous);
        assert_eq!(MultiPoly::zero(&r).graded_degree(), GradedDegree::NegInfinity);
    }

    #[test]
    fn weighted_degree() {
        let r = Ring::new(
            vec!["a".into(), "b".into()],
            vec![1, 3],
            MonomialOrder::Grevlex,
            Field::Rationals,
        )
        .unwrap();
        assert_eq!(r.parse("a^3 + b").unwrap().graded_degree(), GradedDegree::Homogeneous(3));
        assert_eq!(r.monomials_of_degree(3).len(), 2);
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = ring();
        let b = Ring::rational(&["u"]);
        assert_eq!(
            a.parse("x").unwrap().try_add(&b.parse("u").unwrap()),
            Err(AlgebraError::RingMismatch)
        );
    }

    #[test]
    fn parse_print_canonical() {
        let r = ring();
        let f = r.parse("3*x^2*y - 1/2*z").unwrap();
        assert_eq!(f.to_string(), "3*x^2*y - 1/2*z");
        let g = r.parse("(x - 2*y)^2 + 4/8").unwrap();
        assert_eq!(g.to_string(), "x^2 - 4*x*y + 4*y^2 + 1/2");
    }

    #[test]
    fn parse_errors() {
        let r = ring();
        assert!(matches!(r.parse("x +"), Err(AlgebraError::Parse { .. })));
        assert!(matches!(r.parse("w"), Err(AlgebraError::UnknownVariable(_))));
        assert!(r.parse("1/0").is_err());
    }

    #[test]
    fn orders() {
        let r = ring();
        let x2 = r.parse("x^2").unwrap().leading().unwrap().0.clone();
        let yz2 = r.parse("y*z^2").unwrap().leading().unwrap().0.clone();
        assert_eq!(r.cmp(&yz2, &x2), Ordering::Greater);
        let lex = r.with_order(MonomialOrder::Lex).unwrap();
        assert_eq!(lex.cmp(&yz2, &x2), Ordering::Less);
        let xy = r.parse("x*y").unwrap().leading().unwrap().0.clone();
        let z2 = r.parse("z^2").unwrap().leading().unwrap().0.clone();
        assert_eq!(r.cmp(&xy, &z2), Ordering::Greater);
        let blk = r.with_order(MonomialOrder::Block { split: 1 }).unwrap();
        let x = r.var_monomial(0);
        assert_eq!(blk.cmp(&x, &yz2), Ordering::Greater);
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let f = r.parse("x^2 - y^2").unwrap();
        let q = f.div_exact(&r.parse("x + y").unwrap()).unwrap();
        assert_eq!(q.to_string(), "x - y");
        assert!(f.div_exact(&r.parse("x + z").unwrap()).is_err());
    }

    #[test]
    fn compose_substitutes() {
        let src = Ring::rational(&["x", "y"]);
        let tgt = Ring::rational(&["t"]);
        let f = src.parse("y^2 - x^3").unwrap();
        let images = [tgt.parse("t^2").unwrap(), tgt.parse("t^3").unwrap()];
        assert!(f.compose(&tgt, &images).is_zero());
    }
}
