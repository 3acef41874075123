//! Finitely presented graded modules `coker(F_1 → F_0)`, their graded pieces
//! as explicit vector spaces, Hilbert functions, minimal free resolutions and
//! Betti tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Error, Result};
use crate::groebner::{
    syzygies, FreeModule, GbOptions, IdealBasis, LiftingBasis, ModuleBasis, ModuleOrder, ModuleVector,
    Reducer, Term,
};
use crate::linalg::Matrix;
use crate::poly::{Monomial, MultiPoly, Ring, RingRef};
use crate::scalar::{Field, Scalar};

/// `⊕ S(−a_i)`: a free module with generator degrees `a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFreeModule {
    ring: RingRef,
    shifts: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(ring: &RingRef, shifts: Vec<i64>) -> Self {
        GradedFreeModule { ring: ring.clone(), shifts }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub(crate) fn ambient(&self) -> FreeModule {
        FreeModule::new(&self.ring, self.shifts.clone(), ModuleOrder::Top)
    }

    /// Dimension of the degree-`q` piece.
    pub fn hilbert_function(&self, q: i64) -> usize {
        self.shifts
            .iter()
            .filter(|&&a| q >= a)
            .map(|&a| self.ring.monomials_of_degree((q - a) as u32).len())
            .sum()
    }
}

/// A basis of `M_q`: standard monomials times generators, i.e. the terms of
/// degree `q` that no leading term of the relation basis divides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    degree: i64,
    basis: Vec<(Monomial, usize)>,
    index: HashMap<(Monomial, u32), usize>,
}

impl GradedPiece {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn basis(&self) -> &[(Monomial, usize)] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Position of a standard term in the basis.
    pub fn position(&self, m: &Monomial, comp: usize) -> Option<usize> {
        self.index.get(&(m.clone(), comp as u32)).copied()
    }
}

/// A graded module given by generator degrees and homogeneous relations.
#[derive(Clone, Debug)]
pub struct GradedModule {
    generators: GradedFreeModule,
    ambient: FreeModule,
    relations: Vec<ModuleVector>,
    gb: Vec<ModuleVector>,
}

impl PartialEq for GradedModule {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.gb == other.gb
    }
}

impl GradedModule {
    /// Module with the given relation columns; each column has one entry per
    /// generator and must be homogeneous for the shifts.
    pub fn new(generators: GradedFreeModule, relations: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let ambient = generators.ambient();
        let mut vs = Vec::with_capacity(relations.len());
        for (i, col) in relations.iter().enumerate() {
            if col.len() != generators.rank() {
                return Err(Error::Shape(format!(
                    "relation {i} has {} entries for {} generators",
                    col.len(),
                    generators.rank()
                )));
            }
            vs.push(ModuleVector::from_polys(&ambient, col)?);
        }
        Self::from_vectors(generators, vs)
    }

    pub fn from_vectors(generators: GradedFreeModule, relations: Vec<ModuleVector>) -> Result<Self> {
        Self::from_vectors_with(generators, relations, &GbOptions::default())
    }

    pub fn from_vectors_with(
        generators: GradedFreeModule,
        relations: Vec<ModuleVector>,
        opts: &GbOptions,
    ) -> Result<Self> {
        let ambient = generators.ambient();
        let relations: Vec<ModuleVector> = relations.into_iter().filter(|v| !v.is_zero()).collect();
        if let Some(i) = relations.iter().position(|v| !v.is_homogeneous(&ambient)) {
            return Err(Error::Inhomogeneous(format!("relation {i}")));
        }
        let gb = ModuleBasis::from_vectors(ambient.clone(), relations.clone()).groebner_with(opts)?;
        Ok(GradedModule { generators, ambient, relations, gb: gb.vectors().to_vec() })
    }

    /// The free module itself.
    pub fn free(generators: GradedFreeModule) -> Self {
        let ambient = generators.ambient();
        GradedModule { generators, ambient, relations: Vec::new(), gb: Vec::new() }
    }

    /// `S/I` for a homogeneous ideal.
    pub fn quotient(ideal: &IdealBasis) -> Result<Self> {
        let ring = ideal.ring();
        let rels = ideal.generators().iter().map(|g| vec![g.clone()]).collect();
        Self::new(GradedFreeModule::new(ring, vec![0]), rels)
    }

    /// The ideal `I` itself, presented by its generators and their syzygies.
    pub fn ideal(ideal: &IdealBasis, opts: &GbOptions) -> Result<Self> {
        let ring = ideal.ring();
        let gens = ModuleBasis::new(
            FreeModule::new(ring, vec![0], ModuleOrder::Top),
            ideal.generators().iter().map(|g| vec![g.clone()]).collect(),
        )?;
        let gens = gens.minimal_generators(opts)?;
        let shifts = gens.degrees()?;
        let syz = syzygies(&gens, opts)?;
        Self::from_vectors_with(GradedFreeModule::new(ring, shifts), syz.vectors().to_vec(), opts)
    }

    pub fn ring(&self) -> &RingRef {
        &self.generators.ring
    }

    pub fn field(&self) -> Field {
        self.generators.ring.field()
    }

    pub fn generators(&self) -> &GradedFreeModule {
        &self.generators
    }

    pub fn ambient(&self) -> &FreeModule {
        &self.ambient
    }

    pub fn relations(&self) -> &[ModuleVector] {
        &self.relations
    }

    /// Relation columns as polynomial lists.
    pub fn relation_columns(&self) -> Vec<Vec<MultiPoly>> {
        self.relations.iter().map(|v| v.to_polys(&self.ambient)).collect()
    }

    pub fn relation_gb(&self) -> &[ModuleVector] {
        &self.gb
    }

    /// Appends relations and recomputes the relation basis.
    pub fn add_relations(&mut self, more: Vec<ModuleVector>, opts: &GbOptions) -> Result<()> {
        let mut rels = self.relations.clone();
        rels.extend(more);
        *self = Self::from_vectors_with(self.generators.clone(), rels, opts)?;
        Ok(())
    }

    pub(crate) fn reducer(&self) -> Reducer<'_> {
        Reducer::new(&self.ambient, &self.gb)
    }

    pub fn normal_form(&self, v: &ModuleVector) -> ModuleVector {
        self.reducer().reduce(v)
    }

    /// Whether every generator is a relation, i.e. `M = 0`.
    pub fn is_zero(&self) -> bool {
        let red = self.reducer();
        let one = self.ring().one_monomial();
        (0..self.generators.rank()).all(|i| red.is_reducible(&one, i as u32))
    }

    pub fn graded_piece(&self, q: i64) -> GradedPiece {
        self.piece_with(&self.reducer(), q)
    }

    fn piece_with(&self, red: &Reducer<'_>, q: i64) -> GradedPiece {
        let mut basis = Vec::new();
        for (i, &a) in self.generators.shifts.iter().enumerate() {
            if q < a {
                continue;
            }
            for m in self.ring().monomials_of_degree((q - a) as u32) {
                if !red.is_reducible(&m, i as u32) {
                    basis.push((m, i));
                }
            }
        }
        let index = basis.iter().enumerate().map(|(k, (m, i))| ((m.clone(), *i as u32), k)).collect();
        GradedPiece { degree: q, basis, index }
    }

    pub fn hilbert_function(&self, q: i64) -> usize {
        self.graded_piece(q).dimension()
    }

    /// Hilbert function on `lo..=hi`, evaluated in parallel.
    pub fn hilbert_range(&self, lo: i64, hi: i64) -> Vec<usize> {
        (lo..=hi).into_par_iter().map(|q| self.hilbert_function(q)).collect()
    }

    /// The basis element `(m, i)` as a vector of the ambient free module.
    pub fn basis_vector(&self, m: &Monomial, i: usize) -> ModuleVector {
        ModuleVector::from_sorted_terms(vec![Term { mono: m.clone(), comp: i as u32, coef: self.field().one() }])
    }

    /// Coordinates of the class of `v` in `piece`; `v` must be homogeneous of
    /// the piece's degree.
    pub fn coordinates(&self, piece: &GradedPiece, v: &ModuleVector) -> Vec<Scalar> {
        self.coordinates_with(&self.reducer(), piece, v)
    }

    pub(crate) fn coordinates_with(&self, red: &Reducer<'_>, piece: &GradedPiece, v: &ModuleVector) -> Vec<Scalar> {
        let nf = red.reduce(v);
        let mut out = vec![self.field().zero(); piece.dimension()];
        for t in nf.terms() {
            let k = piece
                .position(&t.mono, t.comp as usize)
                .expect("normal form of a homogeneous element lies in the standard basis");
            out[k] = t.coef.clone();
        }
        out
    }

    /// Matrix of multiplication by a homogeneous `f` from `M_q` to `M_{q+deg f}`,
    /// one column per basis element of the source.
    pub fn multiplication_matrix(&self, f: &MultiPoly, source: &GradedPiece, target: &GradedPiece) -> Matrix {
        let red = self.reducer();
        let mut m = Matrix::zeros(target.dimension(), source.dimension(), self.field());
        for (c, (mono, i)) in source.basis.iter().enumerate() {
            let v = self.basis_vector(mono, *i).mul_poly(&self.ambient, f);
            for (r, x) in self.coordinates_with(&red, target, &v).into_iter().enumerate() {
                if !x.is_zero() {
                    m.set(r, c, x);
                }
            }
        }
        m
    }

    /// An isomorphic presentation with minimal generators and minimal relations.
    pub fn minimal_presentation(&self, opts: &GbOptions) -> Result<GradedModule> {
        let ring = self.ring().clone();
        let mut shifts = self.generators.shifts.clone();
        let mut cols = self.relation_columns();
        while let Some((r, i)) = find_unit(&cols) {
            let pivot = cols.swap_remove(r);
            let c_inv = pivot[i].constant_term().inv();
            for col in cols.iter_mut() {
                if col[i].is_zero() {
                    continue;
                }
                let factor = col[i].scale(&c_inv);
                for (j, entry) in col.iter_mut().enumerate() {
                    if !pivot[j].is_zero() {
                        *entry = &*entry - &(&factor * &pivot[j]);
                    }
                }
            }
            for col in cols.iter_mut() {
                col.remove(i);
            }
            shifts.remove(i);
            cols.retain(|c| c.iter().any(|e| !e.is_zero()));
        }
        let free = GradedFreeModule::new(&ring, shifts);
        if cols.is_empty() {
            return Ok(GradedModule::free(free));
        }
        let ambient = free.ambient();
        let rels = ModuleBasis::new(ambient, cols)?.minimal_generators(opts)?;
        Self::from_vectors_with(free, rels.vectors().to_vec(), opts)
    }

    /// Minimal graded free resolution, iterating minimal syzygies.
    pub fn minimal_free_resolution(&self, max_length: usize, opts: &GbOptions) -> Result<FreeResolution> {
        let pres = self.minimal_presentation(opts)?;
        let mut modules = vec![pres.generators.clone()];
        let mut maps = Vec::new();
        let mut current = ModuleBasis::from_vectors(pres.ambient.clone(), pres.relations.clone());
        let ring = self.ring().clone();
        while !current.is_empty() {
            if maps.len() == max_length {
                return Err(Error::ResolutionTooLong(max_length));
            }
            let shifts = current.degrees()?;
            modules.push(GradedFreeModule::new(&ring, shifts));
            maps.push(current.vectors().to_vec());
            current = syzygies(&current, opts)?;
        }
        Ok(FreeResolution { modules, maps })
    }

    /// A free resolution that skips every minimalization step: the given
    /// presentation followed by full Gröbner syzygy bases.
    pub fn free_resolution(&self, max_length: usize, opts: &GbOptions) -> Result<FreeResolution> {
        let mut modules = vec![self.generators.clone()];
        let mut maps = Vec::new();
        let mut current = ModuleBasis::from_vectors(self.ambient.clone(), self.relations.clone());
        let ring = self.ring().clone();
        while !current.is_empty() {
            if maps.len() == max_length {
                return Err(Error::ResolutionTooLong(max_length));
            }
            let shifts = current.degrees()?;
            modules.push(GradedFreeModule::new(&ring, shifts));
            maps.push(current.vectors().to_vec());
            let lb = LiftingBasis::new(&current, opts)?;
            current = lb.syzygies();
        }
        Ok(FreeResolution { modules, maps })
    }

    pub fn betti_table(&self, opts: &GbOptions) -> Result<BettiTable> {
        let limit = self.ring().nvars() + 1;
        Ok(self.minimal_free_resolution(limit, opts)?.betti_table())
    }

    /// Text form: `vars`, `shifts`, then one relation per line.
    pub fn to_text(&self) -> String {
        ModuleDescription::from_module(self).to_text()
    }
}

fn find_unit(cols: &[Vec<MultiPoly>]) -> Option<(usize, usize)> {
    cols.iter().enumerate().find_map(|(r, col)| {
        col.iter().position(|e| !e.constant_term().is_zero()).map(|i| (r, i))
    })
}

/// `0 ← F_0 ← F_1 ← … ← F_n ← 0`; `maps[j]` lists the images of the basis of
/// `F_{j+1}` as vectors of `F_j`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    modules: Vec<GradedFreeModule>,
    maps: Vec<Vec<ModuleVector>>,
}

impl FreeResolution {
    pub fn modules(&self) -> &[GradedFreeModule] {
        &self.modules
    }

    /// Number of nonzero differentials.
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.rank()).collect()
    }

    /// Columns of the differential `F_{j+1} → F_j`.
    pub fn differential(&self, j: usize) -> &[ModuleVector] {
        &self.maps[j]
    }

    /// The differential `F_{j+1} → F_j` as columns of polynomials.
    pub fn matrix(&self, j: usize) -> Vec<Vec<MultiPoly>> {
        let fm = self.modules[j].ambient();
        self.maps[j].iter().map(|v| v.to_polys(&fm)).collect()
    }

    /// Whether no differential has an entry with nonzero constant term.
    pub fn is_minimal(&self) -> bool {
        self.maps.iter().flatten().flat_map(|v| v.terms()).all(|t| !t.mono.is_one())
    }

    /// Whether consecutive differentials compose to zero.
    pub fn is_complex(&self) -> bool {
        (1..self.maps.len()).all(|j| {
            let fm = self.modules[j - 1].ambient();
            let prev = &self.maps[j - 1];
            let gm = self.modules[j].ambient();
            self.maps[j].iter().all(|col| {
                let entries = col.to_polys(&gm);
                let mut acc = ModuleVector::zero();
                for (k, e) in entries.iter().enumerate() {
                    acc = acc.add(&fm, &prev[k].mul_poly(&fm, e));
                }
                acc.is_zero()
            })
        })
    }

    /// `Σ_p (−1)^p HF(F_p, q)`.
    pub fn euler_characteristic(&self, q: i64) -> i64 {
        self.modules
            .iter()
            .enumerate()
            .map(|(p, f)| {
                let h = f.hilbert_function(q) as i64;
                if p % 2 == 0 { h } else { -h }
            })
            .sum()
    }

    pub fn betti_table(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        for (p, f) in self.modules.iter().enumerate() {
            for &a in f.shifts() {
                *entries.entry((p, a - p as i64)).or_insert(0) += 1;
            }
        }
        BettiTable { entries }
    }
}

/// Graded Betti numbers `β_{p,q}`: generators of `F_p` of degree `p + q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, i64), usize>,
}

/// One cell of a table keyed by `(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub p: usize,
    pub q: i64,
    pub value: usize,
}

impl BettiTable {
    pub fn from_entries(entries: impl IntoIterator<Item = ((usize, i64), usize)>) -> Self {
        BettiTable { entries: entries.into_iter().filter(|e| e.1 > 0).collect() }
    }

    pub fn get(&self, p: usize, q: i64) -> usize {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, i64), usize> {
        &self.entries
    }

    pub fn total(&self, p: usize) -> usize {
        self.entries.range((p, i64::MIN)..=(p, i64::MAX)).map(|(_, v)| v).sum()
    }

    /// Largest homological index with a nonzero entry.
    pub fn projective_dimension(&self) -> Option<usize> {
        self.entries.keys().map(|k| k.0).max()
    }

    pub fn to_entries(&self) -> Vec<TableEntry> {
        self.entries.iter().map(|(&(p, q), &value)| TableEntry { p, q, value }).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,q,value\n");
        for e in self.to_entries() {
            let _ = writeln!(s, "{},{},{}", e.p, e.q, e.value);
        }
        s
    }
}

impl fmt::Display for BettiTable {
    /// Columns indexed by `p`, rows by `q`, zeros shown as dots.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(pmax) = self.projective_dimension() else {
            return writeln!(f, "(zero)");
        };
        let qmin = self.entries.keys().map(|k| k.1).min().unwrap();
        let qmax = self.entries.keys().map(|k| k.1).max().unwrap();
        let cell = |v: usize| if v == 0 { ".".to_string() } else { v.to_string() };
        let totals: Vec<String> = (0..=pmax).map(|p| self.total(p).to_string()).collect();
        let width = totals
            .iter()
            .map(|s| s.len())
            .chain(self.entries.values().map(|v| v.to_string().len()))
            .max()
            .unwrap_or(1);
        let label = (qmin..=qmax).map(|q| q.to_string().len()).max().unwrap().max(5) + 1;
        write!(f, "{:>label$}", "")?;
        for p in 0..=pmax {
            write!(f, " {:>width$}", p)?;
        }
        writeln!(f)?;
        write!(f, "{:>label$}", "total:")?;
        for t in &totals {
            write!(f, " {:>width$}", t)?;
        }
        writeln!(f)?;
        for q in qmin..=qmax {
            write!(f, "{:>label$}", format!("{q}:"))?;
            for p in 0..=pmax {
                write!(f, " {:>width$}", cell(self.get(p, q)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Serializable description of a presented module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDescription {
    pub vars: Vec<String>,
    pub shifts: Vec<i64>,
    /// One relation per entry, one polynomial per generator.
    pub relations: Vec<Vec<String>>,
}

impl ModuleDescription {
    pub fn from_module(m: &GradedModule) -> Self {
        ModuleDescription {
            vars: m.ring().names().to_vec(),
            shifts: m.generators.shifts.clone(),
            relations: m
                .relation_columns()
                .iter()
                .map(|c| c.iter().map(|p| p.to_string()).collect())
                .collect(),
        }
    }

    /// Builds the module over `field` with grevlex order.
    pub fn build(&self, field: Field) -> Result<GradedModule> {
        let ring = Ring::standard(&self.vars, field)?;
        let mut cols = Vec::with_capacity(self.relations.len());
        for row in &self.relations {
            cols.push(row.iter().map(|s| ring.parse(s)).collect::<std::result::Result<Vec<_>, _>>()?);
        }
        GradedModule::new(GradedFreeModule::new(&ring, self.shifts.clone()), cols)
    }

    /// Parses the line format
    ///
    /// ```text
    /// vars: x, y, z
    /// shifts: 0 0
    /// x, y
    /// y^2, -x*z
    /// ```
    ///
    /// where each remaining line is one relation with a comma-separated entry
    /// per generator. `shifts` defaults to a single generator of degree 0, and
    /// `#` starts a comment.
    pub fn parse_text(src: &str) -> Result<Self> {
        let mut vars = None;
        let mut shifts = None;
        let mut relations = Vec::new();
        let mut offset = 0;
        for line in src.lines() {
            let pos = offset;
            offset += line.len() + 1;
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vars:") {
                vars = Some(split_list(rest));
            } else if let Some(rest) = line.strip_prefix("shifts:") {
                let parsed = split_list(rest)
                    .iter()
                    .map(|s| s.parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| AlgebraError::parse(pos, format!("bad shift: {e}")))?;
                shifts = Some(parsed);
            } else {
                relations.push(line.split(',').map(|s| s.trim().to_string()).collect());
            }
        }
        let vars = vars.ok_or_else(|| AlgebraError::parse(0, "missing `vars:` line"))?;
        Ok(ModuleDescription { vars, shifts: shifts.unwrap_or_else(|| vec![0]), relations })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("vars: {}\n", self.vars.join(", "));
        let shifts: Vec<String> = self.shifts.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(s, "shifts: {}", shifts.join(" "));
        for r in &self.relations {
            let _ = writeln!(s, "{}", r.join(", "));
        }
        s
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}
