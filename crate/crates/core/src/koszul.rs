//! Koszul cohomology `K_{p,q}(M;V)` as the middle cohomology of
//! `∧^{p+1}V ⊗ M_{q−1} → ∧^pV ⊗ M_q → ∧^{p−1}V ⊗ M_{q+1}`, computed from
//! explicit graded pieces.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gradedmod::{BettiTable, GradedModule};
use crate::groebner::ModuleVector;
use crate::linalg::{Matrix, SparseColumns};
use crate::poly::{GradedDegree, MultiPoly};
use crate::scalar::{Field, Scalar};

/// A graded vector space with an action of a fixed basis `v_0, …, v_r` of
/// `V` raising degree by one.
pub trait GradedAction: Sync {
    fn field(&self) -> Field;

    /// `dim V`.
    fn v_dim(&self) -> usize;

    fn piece_dim(&self, q: i64) -> usize;

    /// Multiplication by each `v_i` as a map `M_q → M_{q+1}`.
    fn action(&self, q: i64) -> Vec<SparseColumns>;

    /// A degree below which every piece vanishes.
    fn support_start(&self) -> i64;

    /// Optional torus weights of the `v_i` and of the basis of `M_q`; the
    /// action must add weights. Used only to split rank computations.
    fn weights(&self, _q: i64) -> Option<(Vec<i64>, Vec<i64>)> {
        None
    }
}

/// `∧^p V ⊗ M_q` with basis `v_I ⊗ m_j`, `I` increasing, ordered by `(I, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulSpace {
    pub p: usize,
    pub q: i64,
    pub wedge: Vec<Vec<usize>>,
    pub piece_dim: usize,
}

impl KoszulSpace {
    pub fn new(v_dim: usize, p: usize, q: i64, piece_dim: usize) -> Self {
        KoszulSpace { p, q, wedge: subsets(v_dim, p), piece_dim }
    }

    pub fn dimension(&self) -> usize {
        self.wedge.len() * self.piece_dim
    }
}

/// Matrix of `d_{p,q}`, one sparse column per source basis element.
#[derive(Clone, Debug)]
pub struct KoszulMatrix {
    pub source: KoszulSpace,
    pub target: KoszulSpace,
    pub columns: SparseColumns,
}

impl KoszulMatrix {
    pub fn to_dense(&self, field: Field) -> Matrix {
        self.columns.to_dense(field)
    }
}

/// Increasing `p`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - left {
            cur.push(i);
            go(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        go(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

/// `d_{p,q}(v_I ⊗ m) = Σ_i (−1)^{i+1} v_{I∖i_i} ⊗ v_{i_i}·m`, positions counted from 1.
pub fn koszul_differential<A: GradedAction + ?Sized>(m: &A, p: usize, q: i64) -> KoszulMatrix {
    let n = m.v_dim();
    let source = KoszulSpace::new(n, p, q, m.piece_dim(q));
    let target = KoszulSpace::new(n, p.saturating_sub(1), q + 1, m.piece_dim(q + 1));
    let mut columns = SparseColumns::new(if p == 0 { 0 } else { target.dimension() });
    if p == 0 || source.dimension() == 0 {
        columns.cols = vec![Vec::new(); source.dimension()];
        return KoszulMatrix { source, target, columns };
    }
    let action = m.action(q);
    let index: HashMap<&[usize], usize> =
        target.wedge.iter().enumerate().map(|(k, s)| (s.as_slice(), k)).collect();
    let field = m.field();
    let minus = field.from_i64(-1);
    let dq1 = target.piece_dim;
    for set in &source.wedge {
        let faces: Vec<(usize, bool)> = (0..p)
            .map(|pos| {
                let mut rest = set.clone();
                rest.remove(pos);
                (index[rest.as_slice()], pos % 2 == 1)
            })
            .collect();
        for j in 0..source.piece_dim {
            let mut col = Vec::new();
            for (pos, &(face, negate)) in faces.iter().enumerate() {
                for (r, c) in &action[set[pos]].cols[j] {
                    let v = if negate { c * &minus } else { c.clone() };
                    col.push((face * dq1 + r, v));
                }
            }
            col.sort_by_key(|e| e.0);
            columns.cols.push(col);
        }
    }
    KoszulMatrix { source, target, columns }
}

const CHECK_PRIME: u64 = 1_000_000_007;

fn column_weights<A: GradedAction + ?Sized>(m: &A, space: &KoszulSpace) -> Option<Vec<i64>> {
    let (wv, wm) = m.weights(space.q)?;
    let mut out = Vec::with_capacity(space.dimension());
    for set in &space.wedge {
        let base: i64 = set.iter().map(|&i| wv[i]).sum();
        out.extend(wm.iter().map(|w| base + w));
    }
    Some(out)
}

/// Columns grouped into blocks with pairwise disjoint row supports.
fn blocks<A: GradedAction + ?Sized>(m: &A, d: &KoszulMatrix) -> Vec<SparseColumns> {
    match column_weights(m, &d.source) {
        None => vec![d.columns.clone()],
        Some(w) => {
            let mut map: BTreeMap<i64, SparseColumns> = BTreeMap::new();
            for (c, col) in d.columns.cols.iter().enumerate() {
                if !col.is_empty() {
                    map.entry(w[c]).or_insert_with(|| SparseColumns::new(d.columns.nrows)).cols.push(col.clone());
                }
            }
            map.into_values().collect()
        }
    }
}

fn exact_rank(field: Field, bs: &[SparseColumns]) -> usize {
    match field {
        Field::Prime(p) => bs.par_iter().map(|b| b.rank_mod(p).expect("prime field entries")).sum(),
        Field::Rationals => bs.par_iter().map(|b| b.rank_fraction_free()).sum(),
    }
}

fn modular_rank(bs: &[SparseColumns]) -> Option<usize> {
    bs.par_iter().map(|b| b.rank_mod(CHECK_PRIME)).sum()
}

/// `dim K_{p,q}(M;V) = dim ∧^pV⊗M_q − rank d_{p,q} − rank d_{p+1,q−1}`.
pub fn koszul_cohomology_dim<A: GradedAction + ?Sized>(m: &A, p: usize, q: i64) -> usize {
    let n = m.v_dim();
    if p > n {
        return 0;
    }
    let dim = subsets(n, p).len() * m.piece_dim(q);
    if dim == 0 {
        return 0;
    }
    let out = blocks(m, &koszul_differential(m, p, q));
    let inc = if p < n { blocks(m, &koszul_differential(m, p + 1, q - 1)) } else { Vec::new() };
    // Over Q, ranks mod a prime can only drop, so a zero here is already exact.
    if m.field() == Field::Rationals {
        if let (Some(a), Some(b)) = (modular_rank(&out), modular_rank(&inc)) {
            if a + b == dim {
                return 0;
            }
        }
    }
    dim - exact_rank(m.field(), &out) - exact_rank(m.field(), &inc)
}

/// Whether `d_{p−1,q+1} ∘ d_{p,q} = 0`.
pub fn is_complex_at<A: GradedAction + ?Sized>(m: &A, p: usize, q: i64) -> bool {
    if p < 2 {
        return true;
    }
    let d1 = koszul_differential(m, p, q);
    let d0 = koszul_differential(m, p - 1, q + 1);
    d0.columns.mul(&d1.columns).is_zero()
}

/// Koszul table over `p ∈ 0..=p_max`, `q ∈ q_range`, computed cell-parallel.
pub fn koszul_table<A: GradedAction + ?Sized>(m: &A, p_max: usize, q_lo: i64, q_hi: i64) -> BettiTable {
    let cells: Vec<(usize, i64)> =
        (0..=p_max).flat_map(|p| (q_lo..=q_hi).map(move |q| (p, q))).collect();
    let dims: Vec<((usize, i64), usize)> =
        cells.par_iter().map(|&(p, q)| ((p, q), koszul_cohomology_dim(m, p, q))).collect();
    BettiTable::from_entries(dims)
}

/// A presented module with `V` spanned by given linear forms of its ring.
pub struct ModuleAction<'a> {
    module: &'a GradedModule,
    v: Vec<MultiPoly>,
}

impl<'a> ModuleAction<'a> {
    pub fn new(module: &'a GradedModule, v: Vec<MultiPoly>) -> Result<Self> {
        for f in &v {
            if f.ring() != module.ring() {
                return Err(crate::error::AlgebraError::RingMismatch.into());
            }
            if f.graded_degree() != GradedDegree::Homogeneous(1) {
                return Err(Error::NotLinear(f.to_string()));
            }
        }
        Ok(ModuleAction { module, v })
    }

    /// `V` = span of the ring variables (which must all have degree one).
    pub fn standard(module: &'a GradedModule) -> Result<Self> {
        let ring = module.ring();
        Self::new(module, (0..ring.nvars()).map(|i| MultiPoly::var(ring, i)).collect())
    }

    pub fn module(&self) -> &GradedModule {
        self.module
    }

    pub fn basis(&self) -> &[MultiPoly] {
        &self.v
    }
}

impl GradedAction for ModuleAction<'_> {
    fn field(&self) -> Field {
        self.module.field()
    }

    fn v_dim(&self) -> usize {
        self.v.len()
    }

    fn piece_dim(&self, q: i64) -> usize {
        self.module.hilbert_function(q)
    }

    fn action(&self, q: i64) -> Vec<SparseColumns> {
        let (src, dst) = (self.module.graded_piece(q), self.module.graded_piece(q + 1));
        self.v
            .iter()
            .map(|f| self.module.multiplication_matrix(f, &src, &dst).to_columns())
            .collect()
    }

    fn support_start(&self) -> i64 {
        self.module.generators().shifts().iter().copied().min().unwrap_or(0)
    }
}

/// The submodule of an action generated (over `Sym V`) by homogeneous
/// elements, each given as a degree and coordinates in that piece.
pub struct SubmoduleAction<'a, A: GradedAction + ?Sized> {
    base: &'a A,
    gens: Vec<(i64, Vec<Scalar>)>,
    cache: Mutex<BTreeMap<i64, Subspace>>,
}

#[derive(Clone)]
struct Subspace {
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn coordinates(&self, w: &[Scalar]) -> SparseVec {
        let mut out: Vec<(usize, Scalar)> =
            self.pivots.iter().enumerate().map(|(k, &p)| (k, w[p].clone())).collect();
        out.retain(|(_, s)| !s.is_zero());
        out
    }
}

type SparseVec = Vec<(usize, Scalar)>;

impl<'a, A: GradedAction + ?Sized> SubmoduleAction<'a, A> {
    pub fn new(base: &'a A, gens: Vec<(i64, Vec<Scalar>)>) -> Result<Self> {
        for (i, (q, c)) in gens.iter().enumerate() {
            if c.len() != base.piece_dim(*q) {
                return Err(Error::NotSubmodule {
                    index: i,
                    reason: format!("{} coordinates for a piece of dimension {}", c.len(), base.piece_dim(*q)),
                });
            }
        }
        Ok(SubmoduleAction { base, gens, cache: Mutex::new(BTreeMap::new()) })
    }

    fn start(&self) -> i64 {
        self.gens.iter().map(|g| g.0).min().unwrap_or(i64::MAX)
    }

    fn subspace(&self, q: i64) -> Subspace {
        if let Some(s) = self.cache.lock().unwrap().get(&q) {
            return s.clone();
        }
        let field = self.base.field();
        let width = self.base.piece_dim(q);
        let mut span: Vec<Vec<Scalar>> =
            self.gens.iter().filter(|g| g.0 == q).map(|g| g.1.clone()).collect();
        if q > self.start() {
            let below = self.subspace(q - 1);
            for a in self.base.action(q - 1) {
                for row in &below.rows {
                    span.push(apply(&a, row, width, field));
                }
            }
        }
        let sub = if span.is_empty() {
            Subspace { rows: Vec::new(), pivots: Vec::new() }
        } else {
            let (r, pivots) = Matrix::from_rows(span, width, field).rref();
            let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
            Subspace { rows, pivots }
        };
        self.cache.lock().unwrap().insert(q, sub.clone());
        sub
    }
}

fn apply(a: &SparseColumns, x: &[Scalar], nrows: usize, field: Field) -> Vec<Scalar> {
    let mut out = vec![field.zero(); nrows];
    for (c, xc) in x.iter().enumerate() {
        if xc.is_zero() {
            continue;
        }
        for (r, v) in &a.cols[c] {
            out[*r] = &out[*r] + &(v * xc);
        }
    }
    out
}

impl<A: GradedAction + ?Sized> GradedAction for SubmoduleAction<'_, A> {
    fn field(&self) -> Field {
        self.base.field()
    }

    fn v_dim(&self) -> usize {
        self.base.v_dim()
    }

    fn piece_dim(&self, q: i64) -> usize {
        if q < self.start() {
            return 0;
        }
        self.subspace(q).rows.len()
    }

    fn action(&self, q: i64) -> Vec<SparseColumns> {
        let src = if q < self.start() { Subspace { rows: Vec::new(), pivots: Vec::new() } } else { self.subspace(q) };
        let dst = if q + 1 < self.start() { src.clone() } else { self.subspace(q + 1) };
        let width = self.base.piece_dim(q + 1);
        self.base
            .action(q)
            .iter()
            .map(|a| SparseColumns {
                nrows: dst.rows.len(),
                cols: src.rows.iter().map(|row| dst.coordinates(&apply(a, row, width, self.field()))).collect(),
            })
            .collect()
    }

    fn support_start(&self) -> i64 {
        self.start().max(self.base.support_start())
    }
}

/// Outcome of the nonvanishing test for `K_{r,1}(M;V)`, `r = dim V − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// All hypotheses hold and `dim K_{r,1}(M;V)` was computed.
    Nonzero { r: usize, dimension: usize },
    HypothesesFail(String),
}

/// For `N = ⊕_{q≥0} N_q` with `(0:_{N_0} V) = 0` and a submodule `M` with
/// `M_0 ⊊ N_0`, `M_1 = N_1`, the group `K_{r,1}(M;V)` is nonzero. Checks the
/// hypotheses exactly and, when they hold, computes the group; a zero
/// answer is reported as an internal error.
pub fn nonvanishing_certificate<A: GradedAction + ?Sized>(
    n: &A,
    gens: Vec<(i64, Vec<Scalar>)>,
) -> Result<Certificate> {
    if n.support_start() < 0 && (n.support_start()..0).any(|q| n.piece_dim(q) > 0) {
        return Err(Error::Precondition("N must live in nonnegative degrees".into()));
    }
    let m = SubmoduleAction::new(n, gens)?;
    let n0 = n.piece_dim(0);
    let stacked: usize = {
        let mut cols = SparseColumns::new(0);
        let acts = n.action(0);
        let d1 = n.piece_dim(1);
        cols.nrows = d1 * acts.len();
        for j in 0..n0 {
            let mut col = Vec::new();
            for (k, a) in acts.iter().enumerate() {
                col.extend(a.cols[j].iter().map(|(r, v)| (k * d1 + r, v.clone())));
            }
            cols.cols.push(col);
        }
        cols.rank()
    };
    if stacked < n0 {
        return Ok(Certificate::HypothesesFail("(0 :_{N_0} V) is nonzero".into()));
    }
    if m.piece_dim(0) >= n0 {
        return Ok(Certificate::HypothesesFail("M_0 = N_0".into()));
    }
    if m.piece_dim(1) != n.piece_dim(1) {
        return Ok(Certificate::HypothesesFail("M_1 is a proper subspace of N_1".into()));
    }
    let r = n.v_dim() - 1;
    let dimension = koszul_cohomology_dim(&m, r, 1);
    if dimension == 0 {
        return Err(Error::Internal(format!("K_{{{r},1}}(M;V) vanished although the hypotheses hold")));
    }
    Ok(Certificate::Nonzero { r, dimension })
}

/// Converts homogeneous elements of a presented module into degree and
/// coordinates, as accepted by [`SubmoduleAction`].
pub fn module_elements(module: &GradedModule, elems: &[Vec<MultiPoly>]) -> Result<Vec<(i64, Vec<Scalar>)>> {
    let fm = module.ambient();
    let mut out = Vec::with_capacity(elems.len());
    for (index, e) in elems.iter().enumerate() {
        if e.len() != fm.rank() || e.iter().any(|p| p.ring() != module.ring()) {
            return Err(Error::NotSubmodule { index, reason: "wrong length or ring".into() });
        }
        let v = ModuleVector::from_polys(fm, e)?;
        if v.is_zero() {
            continue;
        }
        let q = v
            .homogeneous_degree(fm)
            .ok_or_else(|| Error::NotSubmodule { index, reason: "not homogeneous".into() })?;
        let piece = module.graded_piece(q);
        out.push((q, module.coordinates(&piece, &v)));
    }
    Ok(out)
}
