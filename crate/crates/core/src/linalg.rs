//! Exact linear algebra over the coefficient fields.
//!
//! Dense reduced row echelon forms over [`Scalar`] for small systems, and
//! incremental sparse rank computations: fraction-free over the integers for
//! rational input, and word-sized arithmetic modulo a prime.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{inv_mod, mul_mod, Field, Scalar};

/// Dense row-major matrix over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize, field: Field) -> Self {
        let r = rows.len();
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * cols);
        Matrix { rows: r, cols, field, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { rows: self.rows, cols: self.cols, field: self.field, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).inv();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f);
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b` for one solution, if any.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    /// Sparse column view.
    pub fn to_columns(&self) -> SparseColumns {
        let cols = (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .filter(|&r| !self.get(r, c).is_zero())
                    .map(|r| (r, self.get(r, c).clone()))
                    .collect()
            })
            .collect();
        SparseColumns { nrows: self.rows, cols }
    }
}

/// A matrix stored as sparse columns sorted by row index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseColumns {
    pub nrows: usize,
    pub cols: Vec<Vec<(usize, Scalar)>>,
}

impl SparseColumns {
    pub fn new(nrows: usize) -> Self {
        SparseColumns { nrows, cols: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().flatten().all(|(_, s)| s.is_zero())
    }

    /// `self * other`, where `other` has one row per column of `self`.
    pub fn mul(&self, other: &SparseColumns) -> SparseColumns {
        assert_eq!(other.nrows, self.ncols());
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, c) in col {
                    for (r, a) in &self.cols[*k] {
                        let e = acc.entry(*r).or_insert_with(|| c.field().zero());
                        *e = &*e + &(a * c);
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseColumns { nrows: self.nrows, cols }
    }

    pub fn to_dense(&self, field: Field) -> Matrix {
        let mut m = Matrix::zeros(self.nrows, self.ncols(), field);
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                m.set(*r, c, v.clone());
            }
        }
        m
    }

    /// Rank over the rationals by fraction-free elimination, or directly
    /// modulo `p` for prime-field entries.
    pub fn rank(&self) -> usize {
        match self.field() {
            Some(Field::Prime(p)) => self.rank_mod(p).expect("prime field entries"),
            _ => self.rank_fraction_free(),
        }
    }

    fn field(&self) -> Option<Field> {
        self.cols.iter().flatten().next().map(|(_, s)| s.field())
    }

    /// Exact rank of a rational matrix. Each column is scaled to a primitive
    /// integer vector; elimination uses cross-multiplication followed by
    /// content removal, so no fractions appear.
    pub fn rank_fraction_free(&self) -> usize {
        let mut vecs: Vec<Vec<(usize, BigInt)>> =
            self.cols.iter().filter_map(|c| integer_primitive(c)).collect();
        vecs.sort_by_key(|v| v.len());
        let mut pivots: BTreeMap<usize, Vec<(usize, BigInt)>> = BTreeMap::new();
        for mut v in vecs {
            while let Some(&(lead, _)) = v.first() {
                match pivots.get(&lead) {
                    Some(u) => {
                        v = cross_eliminate(&v, u);
                    }
                    None => {
                        pivots.insert(lead, v);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }

    /// Rank modulo a prime. Returns `None` when some rational entry has a
    /// denominator divisible by `p`.
    pub fn rank_mod(&self, p: u64) -> Option<usize> {
        let mut pivots: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
        for col in &self.cols {
            let mut v = Vec::with_capacity(col.len());
            for (r, s) in col {
                let x = reduce_mod(s, p)?;
                if x != 0 {
                    v.push((*r, x));
                }
            }
            while let Some(&(lead, a)) = v.first() {
                match pivots.get(&lead) {
                    Some(u) => v = axpy_mod(&v, u, p - a, p),
                    None => {
                        let inv = inv_mod(a, p);
                        v.iter_mut().for_each(|(_, x)| *x = mul_mod(*x, inv, p));
                        pivots.insert(lead, v);
                        break;
                    }
                }
            }
        }
        Some(pivots.len())
    }
}

fn reduce_mod(s: &Scalar, p: u64) -> Option<u64> {
    match s {
        Scalar::Modular { value, modulus } if *modulus == p => Some(*value),
        Scalar::Modular { .. } => None,
        Scalar::Rational(q) => {
            let m = BigInt::from(p);
            let den = q.denom().mod_floor(&m).to_u64()?;
            if den == 0 {
                return None;
            }
            let num = q.numer().mod_floor(&m).to_u64()?;
            Some(mul_mod(num, inv_mod(den, p), p))
        }
    }
}

/// `v + c * u` modulo p, both sorted by row.
fn axpy_mod(v: &[(usize, u64)], u: &[(usize, u64)], c: u64, p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(v.len() + u.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < u.len() {
        let take_v = j == u.len() || (i < v.len() && v[i].0 < u[j].0);
        let take_u = i == v.len() || (j < u.len() && u[j].0 < v[i].0);
        if take_v {
            out.push(v[i]);
            i += 1;
        } else if take_u {
            out.push((u[j].0, mul_mod(c, u[j].1, p)));
            j += 1;
        } else {
            let x = (v[i].1 + mul_mod(c, u[j].1, p)) % p;
            if x != 0 {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn integer_primitive(col: &[(usize, Scalar)]) -> Option<Vec<(usize, BigInt)>> {
    let entries: Vec<_> = col.iter().filter(|(_, s)| !s.is_zero()).collect();
    if entries.is_empty() {
        return None;
    }
    let mut lcm = BigInt::one();
    for (_, s) in &entries {
        let q = s.as_rational().expect("rational entries");
        lcm = lcm.lcm(q.denom());
    }
    let v: Vec<(usize, BigInt)> = entries
        .iter()
        .map(|(r, s)| {
            let q = s.as_rational().unwrap();
            (*r, q.numer() * (&lcm / q.denom()))
        })
        .collect();
    Some(make_primitive(v))
}

fn make_primitive(mut v: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    let g = v.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_one() && !g.is_zero() {
        v.iter_mut().for_each(|(_, x)| *x = &*x / &g);
    }
    v
}

/// `u_lead * v - v_lead * u`, made primitive; kills the shared leading row.
fn cross_eliminate(v: &[(usize, BigInt)], u: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let a = &u[0].1;
    let b = &v[0].1;
    let g = a.gcd(b);
    let (a, b) = (a / &g, b / &g);
    let mut out = Vec::with_capacity(v.len() + u.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < u.len() {
        let take_v = j == u.len() || (i < v.len() && v[i].0 < u[j].0);
        let take_u = i == v.len() || (j < u.len() && u[j].0 < v[i].0);
        if take_v {
            out.push((v[i].0, &a * &v[i].1));
            i += 1;
        } else if take_u {
            out.push((u[j].0, -(&b * &u[j].1)));
            j += 1;
        } else {
            let x = &a * &v[i].1 - &b * &u[j].1;
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    if out.first().is_some_and(|(_, x)| x.is_negative()) {
        out.iter_mut().for_each(|(_, x)| *x = -&*x);
    }
    make_primitive(out)
}

/// Rank over the fraction field of the polynomial ring the entries live in,
/// by fraction-free (Bareiss) elimination.
pub fn fraction_field_rank(rows: &[Vec<crate::poly::MultiPoly>]) -> usize {
    let Some(ring) = rows.iter().flatten().next().map(|e| e.ring().clone()) else {
        return 0;
    };
    let mut m = rows.to_vec();
    let (nr, nc) = (m.len(), m[0].len());
    let mut prev = crate::poly::MultiPoly::one(&ring);
    let mut rank = 0;
    for col in 0..nc {
        if rank == nr {
            break;
        }
        let Some(piv) = (rank..nr).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..nr {
            for c in col + 1..nc {
                let v = &(&m[rank][col] * &m[r][c]) - &(&m[r][col] * &m[rank][c]);
                m[r][c] = v.div_exact(&prev).expect("Bareiss quotients are exact");
            }
            m[r][col] = crate::poly::MultiPoly::zero(&ring);
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Field::Rationals.from_i64(v)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(),
            cols,
            Field::Rationals,
        )
    }

    #[test]
    fn rank_agrees_across_methods() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1], &[0, 2, 2]]);
        assert_eq!(m.rank(), 2);
        let s = m.to_columns();
        assert_eq!(s.rank_fraction_free(), 2);
        assert_eq!(s.rank_mod(65521), Some(2));
    }

    #[test]
    fn modular_rank_can_drop() {
        let m = mat(&[&[1, 1], &[1, 3]]);
        assert_eq!(m.to_columns().rank_fraction_free(), 2);
        assert_eq!(m.to_columns().rank_mod(2), Some(1));
    }

    #[test]
    fn kernel_and_solve() {
        let m = mat(&[&[1, 2, 3], &[0, 1, 1]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        let col = Matrix::from_rows(k[0].iter().map(|v| vec![v.clone()]).collect(), 1, Field::Rationals);
        assert!(m.mul(&col).is_zero());
        let x = m.solve(&[q(6), q(2)]).unwrap();
        let xc = Matrix::from_rows(x.into_iter().map(|v| vec![v]).collect(), 1, Field::Rationals);
        assert_eq!(m.mul(&xc).column(0), vec![q(6), q(2)]);
        let singular = mat(&[&[1, 1], &[1, 1]]);
        assert!(singular.solve(&[q(1), q(2)]).is_none());
    }

    #[test]
    fn bareiss_rank_over_function_field() {
        let r = crate::poly::Ring::rational(&["u", "v"]);
        let p = |s: &str| r.parse(s).unwrap();
        // Vandermonde in u, v has full rank generically
        let vander = vec![vec![p("1"), p("u"), p("u^2")], vec![p("1"), p("v"), p("v^2")]];
        assert_eq!(fraction_field_rank(&vander), 2);
        let dependent = vec![vec![p("u"), p("u*v")], vec![p("u^2"), p("u^2*v")], vec![p("1"), p("v")]];
        assert_eq!(fraction_field_rank(&dependent), 1);
        let zero_col = vec![vec![p("0"), p("u")], vec![p("0"), p("v")]];
        assert_eq!(fraction_field_rank(&zero_col), 1);
        assert_eq!(fraction_field_rank(&[]), 0);
    }
}
