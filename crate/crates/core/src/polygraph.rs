//! The polygraph ring `R(n,k) = ℚ[x,y,a,b] / ⋂_f I_f` with
//! `I_f = (a_i − x_{f(i)}, b_i − y_{f(i)})`, viewed as a module over
//! `S = ℚ[x_1, y_1, …, x_n, y_n]` through its embedding into `S^{n^k}`, and
//! the `𝔖_n`-invariants of `Ext^j_S(R(n,k), S)`.
//!
//! `σ ∈ 𝔖_n` acts on `S` and on the `x, y` variables of the big ring by
//! permuting point indices, fixing `a, b`. The module generators are images
//! of `a, b`-monomials and are therefore fixed by the action; the action is
//! lifted along a minimal free resolution and dualized.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gradedmod::{FreeResolution, GradedFreeModule, GradedModule, ModuleDescription, TableEntry};
use crate::groebner::{kernel, intersect_ideals, FreeModule, GbOptions, IdealBasis, LiftingBasis, ModuleBasis, ModuleVector};
use crate::linalg::SparseColumns;
use crate::poly::{Monomial, MultiPoly, Ring, RingRef};
use crate::scalar::Field;
use crate::symgrp::{Character, PermAction};

/// Hard ceiling on the number of component maps.
pub const MAX_COMPONENTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolygraphLimits {
    pub max_n: usize,
    pub max_k: usize,
    /// Largest generator degree tried before giving up on stabilization.
    pub max_generator_degree: u32,
}

impl Default for PolygraphLimits {
    fn default() -> Self {
        PolygraphLimits { max_n: 3, max_k: 2, max_generator_degree: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygraphSpec {
    n: usize,
    k: usize,
    field: Field,
}

impl PolygraphSpec {
    pub fn new(n: usize, k: usize, field: Field) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("the polygraph needs n ≥ 1".into()));
        }
        let components = (0..k).try_fold(1usize, |acc, _| acc.checked_mul(n).filter(|&c| c <= MAX_COMPONENTS));
        if components.is_none() {
            return Err(Error::Guard(format!("n^k exceeds {MAX_COMPONENTS} component maps")));
        }
        let p = field.characteristic();
        if p != 0 && (p as usize) <= n {
            return Err(Error::CharacteristicDividesOrder(p));
        }
        Ok(PolygraphSpec { n, k, field })
    }

    /// As [`PolygraphSpec::new`], also enforcing `limits`.
    pub fn with_limits(n: usize, k: usize, field: Field, limits: &PolygraphLimits) -> Result<Self> {
        if n > limits.max_n || k > limits.max_k {
            return Err(Error::Guard(format!(
                "(n, k) = ({n}, {k}) is beyond the limits n ≤ {}, k ≤ {}",
                limits.max_n, limits.max_k
            )));
        }
        Self::new(n, k, field)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn components(&self) -> usize {
        self.n.pow(self.k as u32)
    }

    /// All maps `{1..k} → {1..n}` (0-based), lexicographically.
    pub fn functions(&self) -> Vec<Vec<usize>> {
        (0..self.components())
            .map(|mut c| {
                let mut f = vec![0; self.k];
                for slot in f.iter_mut().rev() {
                    *slot = c % self.n;
                    c /= self.n;
                }
                f
            })
            .collect()
    }

    /// `x1..xn, y1..yn, a1..ak, b1..bk`.
    pub fn big_ring(&self) -> RingRef {
        let mut names = self.point_names();
        names.extend((1..=self.k).map(|i| format!("a{i}")));
        names.extend((1..=self.k).map(|i| format!("b{i}")));
        Ring::standard(&names, self.field).expect("valid names")
    }

    /// `S = x1..xn, y1..yn`.
    pub fn base_ring(&self) -> RingRef {
        Ring::standard(&self.point_names(), self.field).expect("valid names")
    }

    fn point_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        names.extend((1..=self.n).map(|i| format!("y{i}")));
        names
    }

    fn x(&self, i: usize) -> usize {
        i
    }

    fn y(&self, i: usize) -> usize {
        self.n + i
    }

    fn a(&self, i: usize) -> usize {
        2 * self.n + i
    }

    fn b(&self, i: usize) -> usize {
        2 * self.n + self.k + i
    }

    /// Variable permutations of `s_1, …, s_{n−1}` on a ring whose first
    /// `2n` variables are the point coordinates.
    fn transpositions(&self, nvars: usize) -> Vec<Vec<usize>> {
        (0..self.n.saturating_sub(1))
            .map(|i| {
                let mut p: Vec<usize> = (0..nvars).collect();
                p.swap(self.x(i), self.x(i + 1));
                p.swap(self.y(i), self.y(i + 1));
                p
            })
            .collect()
    }

    /// `I_f`.
    pub fn component_ideal(&self, f: &[usize]) -> IdealBasis {
        let t = self.big_ring();
        let var = |i| MultiPoly::var(&t, i);
        let mut gens = Vec::with_capacity(2 * self.k);
        for (i, &fi) in f.iter().enumerate() {
            gens.push(&var(self.a(i)) - &var(self.x(fi)));
            gens.push(&var(self.b(i)) - &var(self.y(fi)));
        }
        IdealBasis::new(&t, gens).expect("same ring")
    }

    /// The substitution `a_i ↦ x_{f(i)}, b_i ↦ y_{f(i)}` into `S`.
    pub fn component_map(&self, s: &RingRef, f: &[usize]) -> Vec<MultiPoly> {
        let mut images: Vec<MultiPoly> = (0..2 * self.n).map(|v| MultiPoly::var(s, v)).collect();
        images.extend(f.iter().map(|&fi| MultiPoly::var(s, self.x(fi))));
        images.extend(f.iter().map(|&fi| MultiPoly::var(s, self.y(fi))));
        images
    }
}

/// Gröbner basis of `⋂_f I_f`, checked to be stable under the symmetric group.
pub fn polygraph_ideal(spec: &PolygraphSpec, opts: &GbOptions) -> Result<IdealBasis> {
    let ideals: Vec<IdealBasis> = spec.functions().par_iter().map(|f| spec.component_ideal(f)).collect();
    let ideal = intersect_ideals(&ideals, opts)?;
    check_ideal_stable(spec, &ideal)?;
    Ok(ideal)
}

/// Every Gröbner basis element maps into the ideal under each `s_i`.
pub fn check_ideal_stable(spec: &PolygraphSpec, ideal: &IdealBasis) -> Result<()> {
    let t = ideal.ring();
    for perm in spec.transpositions(t.nvars()) {
        for (idx, g) in ideal.generators().iter().enumerate() {
            if !ideal.normal_form(&g.map_variables(t, &perm))?.is_zero() {
                return Err(Error::ActionNotStable(idx));
            }
        }
    }
    Ok(())
}

/// Whether `T/I → ∏_f T/I_f` is injective in degrees `0..=max_degree`:
/// the Hilbert function of `T/I` equals the rank of evaluating monomials
/// through every component map.
pub fn embedding_holds(spec: &PolygraphSpec, ideal: &IdealBasis, max_degree: u32) -> Result<bool> {
    let t = ideal.ring();
    let s = spec.base_ring();
    let quotient = GradedModule::quotient(ideal)?;
    let maps: Vec<Vec<MultiPoly>> = spec.functions().iter().map(|f| spec.component_map(&s, f)).collect();
    for e in 0..=max_degree {
        let targets = s.monomials_of_degree(e);
        let positions: HashMap<&Monomial, usize> = targets.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let index = |m: &Monomial| positions.get(m).copied();
        let mut matrix = SparseColumns::new(targets.len() * maps.len());
        for mono in t.monomials_of_degree(e) {
            let p = MultiPoly::term(t, mono, spec.field.one());
            let mut col = Vec::new();
            for (c, images) in maps.iter().enumerate() {
                for (m, coef) in p.compose(&s, images).terms() {
                    let row = index(m).ok_or_else(|| Error::Internal("image monomial outside its degree".into()))?;
                    col.push((c * targets.len() + row, coef.clone()));
                }
            }
            col.sort_by_key(|&(r, _)| r);
            matrix.cols.push(col);
        }
        if matrix.rank() != quotient.hilbert_function(e as i64) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `R(n,k)` as a graded `S`-module: generators are images in `S^{n^k}` of
/// `a, b`-monomials, relations are their syzygies.
#[derive(Clone, Debug)]
pub struct SModulePresentation {
    spec: PolygraphSpec,
    degree_bound: u32,
    /// The `a, b`-monomial behind each generator, as a polynomial of the big ring.
    sources: Vec<MultiPoly>,
    images: Vec<Vec<MultiPoly>>,
    module: GradedModule,
}

fn ab_monomials(spec: &PolygraphSpec, t: &RingRef, max_degree: u32) -> Vec<MultiPoly> {
    let vars: Vec<usize> = (0..spec.k).map(|i| spec.a(i)).chain((0..spec.k).map(|i| spec.b(i))).collect();
    let mut out = vec![MultiPoly::one(t)];
    let mut layer = vec![MultiPoly::one(t)];
    for _ in 0..max_degree {
        let mut next: Vec<MultiPoly> = Vec::new();
        for m in &layer {
            let last = m.leading().map_or(0, |(mono, _)| {
                vars.iter().rposition(|&v| mono.exponents()[v] > 0).unwrap_or(0)
            });
            let start = if m.is_constant() { 0 } else { last };
            for &v in &vars[start..] {
                next.push(m * &MultiPoly::var(t, v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl SModulePresentation {
    pub fn spec(&self) -> &PolygraphSpec {
        &self.spec
    }

    /// The generator degree bound `D` at which the span stabilized.
    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn sources(&self) -> &[MultiPoly] {
        &self.sources
    }

    /// Image of each generator, one entry per component map.
    pub fn images(&self) -> &[Vec<MultiPoly>] {
        &self.images
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    /// `Σ_t r_t · image_t = 0` for every relation `r`.
    pub fn relations_annihilate(&self) -> bool {
        let gm = self.module.ambient();
        self.module.relations().iter().all(|rel| {
            let coeffs = rel.to_polys(gm);
            (0..self.spec.components()).all(|c| {
                coeffs
                    .iter()
                    .zip(&self.images)
                    .fold(MultiPoly::zero(self.module.ring()), |acc, (r, img)| &acc + &(r * &img[c]))
                    .is_zero()
            })
        })
    }

    /// The symmetric group action fixing every generator.
    pub fn action(&self) -> Result<PermAction> {
        let s = self.module.ring();
        PermAction::new(self.spec.n, s, self.spec.transpositions(s.nvars()), None)
    }

    pub fn minimal_resolution(&self, opts: &GbOptions) -> Result<FreeResolution> {
        let limit = self.module.ring().nvars() + 1;
        let res = self.module.minimal_free_resolution(limit, opts)?;
        if res.modules()[0].shifts() != self.module.generators().shifts() {
            return Err(Error::Internal("minimal presentation changed the generators".into()));
        }
        Ok(res)
    }
}

/// Dimension of `U_e` for the `S`-span `U` of homogeneous vectors in `S^N`.
fn span_dimension(span: &GradedModule, free: &GradedFreeModule, e: i64) -> usize {
    free.hilbert_function(e) - span.hilbert_function(e)
}

/// Increases `D` from 0 until the span of the images of `a, b`-monomials of
/// degree `≤ D` has the Hilbert function of `T/I` through degree `D + 2`.
pub fn s_module_presentation(
    spec: &PolygraphSpec,
    ideal: &IdealBasis,
    limits: &PolygraphLimits,
    opts: &GbOptions,
) -> Result<SModulePresentation> {
    let t = ideal.ring().clone();
    let s = spec.base_ring();
    let quotient = GradedModule::quotient(ideal)?;
    let comps = spec.components();
    let maps: Vec<Vec<MultiPoly>> = spec.functions().iter().map(|f| spec.component_map(&s, f)).collect();
    let free = GradedFreeModule::new(&s, vec![0; comps]);
    let fm = free.ambient();
    for d in 0..=limits.max_generator_degree {
        let sources = ab_monomials(spec, &t, d);
        let images: Vec<Vec<MultiPoly>> =
            sources.par_iter().map(|m| maps.iter().map(|img| m.compose(&s, img)).collect()).collect();
        let vectors = images
            .iter()
            .map(|v| ModuleVector::from_polys(&fm, v))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let span = GradedModule::from_vectors_with(free.clone(), vectors.clone(), opts)?;
        let stable = (0..=d as i64 + 2).all(|e| span_dimension(&span, &free, e) == quotient.hilbert_function(e));
        if !stable {
            continue;
        }
        let basis = ModuleBasis::from_vectors(fm.clone(), vectors.clone()).minimal_generators(opts)?;
        let chosen: Vec<usize> = basis
            .vectors()
            .iter()
            .map(|v| vectors.iter().position(|w| w == v).expect("minimal generators are a subset"))
            .collect();
        let shifts = basis.degrees()?;
        let relations = kernel(&basis, shifts.clone(), opts)?;
        let module =
            GradedModule::from_vectors_with(GradedFreeModule::new(&s, shifts), relations.vectors().to_vec(), opts)?;
        let pres = SModulePresentation {
            spec: spec.clone(),
            degree_bound: d,
            sources: chosen.iter().map(|&i| sources[i].clone()).collect(),
            images: chosen.iter().map(|&i| images[i].clone()).collect(),
            module,
        };
        if (0..=d as i64 + 2).any(|e| pres.module.hilbert_function(e) != quotient.hilbert_function(e)) {
            return Err(Error::Internal("presented module disagrees with the quotient ring".into()));
        }
        return Ok(pres);
    }
    Err(Error::NoStabilization(limits.max_generator_degree))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    ExtZero,
    InvariantsZero,
    InvariantsNonzero { witness_degree: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub degree: i64,
    pub ext_dimension: usize,
    pub invariant_dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtReport {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub verdict: Verdict,
    pub generator_degree_bound: u32,
    pub presentation_generators: usize,
    pub presentation_relations: usize,
    pub resolution_betti: Vec<TableEntry>,
    pub projective_dimension: usize,
    pub ext_generator_degrees: Vec<i64>,
    pub ext_relation_degrees: Vec<i64>,
    pub window: Option<(i64, i64)>,
    pub dimensions: Vec<DegreeRow>,
    pub ext_presentation: Option<ModuleDescription>,
}

impl ExtReport {
    /// Whether the verdict matches the stored dimensions.
    pub fn is_consistent(&self) -> bool {
        match &self.verdict {
            Verdict::ExtZero => self.dimensions.iter().all(|r| r.ext_dimension == 0),
            Verdict::InvariantsZero => {
                let covered = match (self.window, self.ext_generator_degrees.iter().min(), self.ext_generator_degrees.iter().max()) {
                    (Some((lo, hi)), Some(&a), Some(&b)) => lo <= a && b <= hi,
                    _ => false,
                };
                covered && self.dimensions.iter().all(|r| r.invariant_dimension == 0)
            }
            Verdict::InvariantsNonzero { witness_degree } => self
                .dimensions
                .iter()
                .find(|r| r.invariant_dimension > 0)
                .is_some_and(|r| r.degree == *witness_degree),
        }
    }

    pub fn summary(&self) -> String {
        let verdict = match &self.verdict {
            Verdict::ExtZero => "ext-zero".to_string(),
            Verdict::InvariantsZero => "invariants-zero".to_string(),
            Verdict::InvariantsNonzero { witness_degree } => format!("invariants-nonzero (degree {witness_degree})"),
        };
        let window = self.window.map_or(String::new(), |(lo, hi)| format!(", degrees {lo}..={hi} checked"));
        format!("R({},{}): Ext^{} {verdict}; projective dimension {}{window}", self.n, self.k, self.j, self.projective_dimension)
    }
}

/// Entry `row` of each column of a map, i.e. row `row` of its matrix.
fn matrix_row(cols: &[ModuleVector], fm: &FreeModule, row: usize) -> Vec<MultiPoly> {
    cols.iter().map(|c| c.to_polys(fm)[row].clone()).collect()
}

fn dual_module(f: &GradedFreeModule) -> GradedFreeModule {
    GradedFreeModule::new(f.ring(), f.shifts().iter().map(|a| -a).collect())
}

/// `Ext^j` presented as `K / im`: its generators, as cocycles in `Hom(F_j, S)`,
/// the images of `Hom(F_{j−1}, S)`, and the module.
struct ExtPresentation {
    dual: FreeModule,
    cocycles: Vec<ModuleVector>,
    coboundaries: Vec<ModuleVector>,
    module: GradedModule,
}

fn ext_presentation(res: &FreeResolution, j: usize, opts: &GbOptions) -> Result<Option<ExtPresentation>> {
    let mods = res.modules();
    if j >= mods.len() {
        return Ok(None);
    }
    let s = mods[j].ring().clone();
    let gj = dual_module(&mods[j]);
    let dual = gj.ambient();
    let rank = mods[j].rank();
    let cocycles: Vec<ModuleVector> = if j < res.length() {
        let next = dual_module(&mods[j + 1]).ambient();
        let fj = mods[j].ambient();
        let cols = res.differential(j);
        let images = (0..rank)
            .map(|l| ModuleVector::from_polys(&next, &matrix_row(cols, &fj, l)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let ker = kernel(&ModuleBasis::from_vectors(next, images), gj.shifts().to_vec(), opts)?;
        let gens: Vec<ModuleVector> =
            ker.vectors().iter().map(|v| unpack(v, &ker.ambient().clone(), &dual)).collect();
        ModuleBasis::from_vectors(dual.clone(), gens).minimal_generators(opts)?.vectors().to_vec()
    } else {
        (0..rank).map(|l| ModuleVector::unit(&dual, l)).collect()
    };
    let coboundaries: Vec<ModuleVector> = if j > 0 {
        let prev = mods[j - 1].ambient();
        let cols = res.differential(j - 1);
        (0..mods[j - 1].rank())
            .map(|m| ModuleVector::from_polys(&dual, &matrix_row(cols, &prev, m)))
            .collect::<std::result::Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let cocycle_basis = ModuleBasis::from_vectors(dual.clone(), cocycles.clone());
    let degrees = cocycle_basis.degrees()?;
    let mut all = cocycles.clone();
    all.extend(coboundaries.iter().cloned());
    let mut all_degrees = degrees.clone();
    all_degrees.extend(mods.get(j.wrapping_sub(1)).map_or(Vec::new(), |f| dual_module(f).shifts().to_vec()));
    let relations: Vec<ModuleVector> = if coboundaries.is_empty() {
        Vec::new()
    } else {
        let syz = kernel(&ModuleBasis::from_vectors(dual.clone(), all), all_degrees, opts)?;
        let free = GradedFreeModule::new(&s, degrees.clone()).ambient();
        let map: Vec<Option<usize>> = (0..syz.ambient().rank()).map(|c| (c < cocycles.len()).then_some(c)).collect();
        syz.vectors().iter().map(|v| v.remap_components(&free, &map)).filter(|v| !v.is_zero()).collect()
    };
    let module = GradedModule::from_vectors_with(GradedFreeModule::new(&s, degrees), relations, opts)?;
    Ok(Some(ExtPresentation { dual, cocycles, coboundaries, module }))
}

/// Re-expresses a vector of one free module in another of the same rank.
fn unpack(v: &ModuleVector, from: &FreeModule, to: &FreeModule) -> ModuleVector {
    ModuleVector::from_polys(to, &v.to_polys(from)).expect("same ring")
}

/// Semilinear lifts `φ_j` of `s_i` along the resolution, as the images of the
/// basis of each `F_j`, given that `s_i` fixes the generators of `F_0`.
fn chain_lifts(res: &FreeResolution, act: &PermAction, i: usize, upto: usize, opts: &GbOptions) -> Result<Vec<Vec<ModuleVector>>> {
    let mods = res.modules();
    let f0 = mods[0].ambient();
    let mut lifts = vec![(0..mods[0].rank()).map(|l| ModuleVector::unit(&f0, l)).collect::<Vec<_>>()];
    for j in 1..=upto.min(res.length()) {
        let prev = mods[j - 1].ambient();
        let cur = mods[j].ambient();
        let cols = res.differential(j - 1);
        let lifting = LiftingBasis::new(&ModuleBasis::from_vectors(prev.clone(), cols.to_vec()), opts)?;
        let mut images = Vec::with_capacity(cols.len());
        for col in cols {
            let mut target = ModuleVector::zero();
            for (l, entry) in col.to_polys(&prev).iter().enumerate() {
                if !entry.is_zero() {
                    target = target.add(&prev, &lifts[j - 1][l].mul_poly(&prev, &act.apply_poly(i, entry)));
                }
            }
            let coeffs = lifting
                .lift(&target)
                .ok_or_else(|| Error::Internal(format!("transposition does not lift to F_{j}")))?;
            images.push(ModuleVector::from_polys(&cur, &coeffs)?);
        }
        lifts.push(images);
    }
    Ok(lifts)
}

/// The induced action of `𝔖_n` on the presented `Ext^j`.
fn ext_action(
    pres: &SModulePresentation,
    res: &FreeResolution,
    ext: &ExtPresentation,
    j: usize,
    opts: &GbOptions,
) -> Result<PermAction> {
    let base = pres.action()?;
    let n = pres.spec.n;
    let s = pres.module.ring();
    let fj = res.modules()[j].ambient();
    let mut all = ext.cocycles.clone();
    all.extend(ext.coboundaries.iter().cloned());
    let lifting = LiftingBasis::new(&ModuleBasis::from_vectors(ext.dual.clone(), all), opts)?;
    let egm = ext.module.ambient();
    let mut gen_images = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let phi = &chain_lifts(res, &base, i, j, opts)?[j];
        let phi_polys: Vec<Vec<MultiPoly>> = phi.iter().map(|v| v.to_polys(&fj)).collect();
        let mut images = Vec::with_capacity(ext.cocycles.len());
        for kappa in &ext.cocycles {
            let psi = kappa.to_polys(&ext.dual);
            let moved: Vec<MultiPoly> = phi_polys
                .iter()
                .map(|col| {
                    let dot = col.iter().zip(&psi).fold(MultiPoly::zero(s), |acc, (a, b)| &acc + &(a * b));
                    base.apply_poly(i, &dot)
                })
                .collect();
            let v = ModuleVector::from_polys(&ext.dual, &moved)?;
            let coeffs = lifting
                .lift(&v)
                .ok_or_else(|| Error::Internal("transported cocycle left the cocycle module".into()))?;
            images.push(ModuleVector::from_polys(egm, &coeffs[..ext.cocycles.len()])?);
        }
        gen_images.push(images);
    }
    PermAction::new(n, s, pres.spec.transpositions(s.nvars()), Some(gen_images))
}

/// The degrees checked for invariants: from the lowest generator degree to
/// `max generator + max relation + n`, and never less than `n` past the
/// highest generator or relation.
pub fn invariant_window(gen_degrees: &[i64], rel_degrees: &[i64], n: usize) -> Option<(i64, i64)> {
    let lo = *gen_degrees.iter().min()?;
    let max_gen = *gen_degrees.iter().max()?;
    let max_rel = rel_degrees.iter().max().copied().unwrap_or(max_gen);
    let n = n as i64;
    Some((lo, (max_gen + max_rel + n).max(max_gen.max(max_rel) + n)))
}

/// Per-degree dimensions of `Ext^j` computed from any free resolution.
pub fn ext_dimensions(res: &FreeResolution, j: usize, lo: i64, hi: i64, opts: &GbOptions) -> Result<Vec<usize>> {
    match ext_presentation(res, j, opts)? {
        None => Ok(vec![0; (hi - lo + 1).max(0) as usize]),
        Some(e) => Ok(e.module.hilbert_range(lo, hi)),
    }
}

/// `Ext^j_S(R(n,k), S)` with its trivial-isotypic dimensions.
pub fn ext_modules(pres: &SModulePresentation, j: usize, opts: &GbOptions) -> Result<ExtReport> {
    let res = pres.minimal_resolution(opts)?;
    ext_report(pres, &res, j, opts)
}

pub fn ext_report(pres: &SModulePresentation, res: &FreeResolution, j: usize, opts: &GbOptions) -> Result<ExtReport> {
    let betti = res.betti_table();
    let mut report = ExtReport {
        n: pres.spec.n,
        k: pres.spec.k,
        j,
        verdict: Verdict::ExtZero,
        generator_degree_bound: pres.degree_bound,
        presentation_generators: pres.module.generators().rank(),
        presentation_relations: pres.module.relations().len(),
        resolution_betti: betti.to_entries(),
        projective_dimension: res.length(),
        ext_generator_degrees: Vec::new(),
        ext_relation_degrees: Vec::new(),
        window: None,
        dimensions: Vec::new(),
        ext_presentation: None,
    };
    let Some(ext) = ext_presentation(res, j, opts)? else {
        return Ok(report);
    };
    if ext.module.is_zero() {
        return Ok(report);
    }
    let gen_degrees = ext.module.generators().shifts().to_vec();
    let egm = ext.module.ambient();
    let rel_degrees: Vec<i64> =
        ext.module.relations().iter().map(|r| r.homogeneous_degree(egm).expect("homogeneous")).collect();
    let action = ext_action(pres, res, &ext, j, opts)?;
    action.check_stable(&ext.module)?;
    let (lo, hi) = invariant_window(&gen_degrees, &rel_degrees, pres.spec.n).expect("nonzero module");
    let rows: Vec<DegreeRow> = (lo..=hi)
        .into_par_iter()
        .map(|q| {
            Ok(DegreeRow {
                degree: q,
                ext_dimension: ext.module.hilbert_function(q),
                invariant_dimension: action.isotypic_dimension(&ext.module, Character::Trivial, q)?,
            })
        })
        .collect::<Result<_>>()?;
    report.verdict = match rows.iter().find(|r| r.invariant_dimension > 0) {
        Some(r) => Verdict::InvariantsNonzero { witness_degree: r.degree },
        None => Verdict::InvariantsZero,
    };
    report.ext_generator_degrees = gen_degrees;
    report.ext_relation_degrees = rel_degrees;
    report.window = Some((lo, hi));
    report.dimensions = rows;
    report.ext_presentation = Some(ModuleDescription::from_module(&ext.module));
    Ok(report)
}

/// The full pipeline for `Ext^{k+1}`.
pub fn equivariant_vanishing_check(spec: &PolygraphSpec, limits: &PolygraphLimits, opts: &GbOptions) -> Result<ExtReport> {
    let ideal = polygraph_ideal(spec, opts)?;
    let pres = s_module_presentation(spec, &ideal, limits, opts)?;
    ext_modules(&pres, spec.k + 1, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, k: usize) -> PolygraphSpec {
        PolygraphSpec::new(n, k, Field::Rationals).unwrap()
    }

    fn opts() -> GbOptions {
        GbOptions::default()
    }

    fn setup(n: usize, k: usize) -> (PolygraphSpec, IdealBasis, SModulePresentation) {
        let sp = spec(n, k);
        let ideal = polygraph_ideal(&sp, &opts()).unwrap();
        let pres = s_module_presentation(&sp, &ideal, &PolygraphLimits::default(), &opts()).unwrap();
        (sp, ideal, pres)
    }

    #[test]
    fn guards() {
        assert!(matches!(PolygraphSpec::new(0, 1, Field::Rationals), Err(Error::Precondition(_))));
        assert!(matches!(PolygraphSpec::new(2, 13, Field::Rationals), Err(Error::Guard(_))));
        assert!(PolygraphSpec::new(2, 12, Field::Rationals).is_ok());
        let lim = PolygraphLimits::default();
        assert!(matches!(PolygraphSpec::with_limits(4, 1, Field::Rationals, &lim), Err(Error::Guard(_))));
        assert!(matches!(PolygraphSpec::with_limits(2, 3, Field::Rationals, &lim), Err(Error::Guard(_))));
        assert_eq!(
            PolygraphSpec::new(3, 1, Field::prime(3).unwrap()),
            Err(Error::CharacteristicDividesOrder(3))
        );
    }

    #[test]
    fn function_enumeration() {
        let sp = spec(3, 2);
        let fs = sp.functions();
        assert_eq!(fs.len(), 9);
        assert_eq!(fs[0], vec![0, 0]);
        assert_eq!(fs[5], vec![1, 2]);
        assert_eq!(spec(2, 0).functions(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn single_point_ideal() {
        let sp = spec(1, 1);
        let ideal = polygraph_ideal(&sp, &opts()).unwrap();
        let t = ideal.ring();
        let expected = IdealBasis::parse(t, &["a1 - x1", "b1 - y1"]).unwrap().groebner().unwrap();
        assert_eq!(ideal, expected);
    }

    #[test]
    fn two_point_ideal_membership() {
        let sp = spec(2, 1);
        let ideal = polygraph_ideal(&sp, &opts()).unwrap();
        let t = ideal.ring();
        for g in ["(a1 - x1)*(a1 - x2)", "(a1 - x1)*(b1 - y2)"] {
            let p = t.parse(g).unwrap();
            assert!(ideal.contains(&p).unwrap(), "{g}");
            // both substitutions vanish
            let s = sp.base_ring();
            for f in sp.functions() {
                assert!(p.compose(&s, &sp.component_map(&s, &f)).is_zero());
            }
        }
        assert!(!ideal.contains(&t.parse("a1 - x1").unwrap()).unwrap());
    }

    #[test]
    fn no_points_selected() {
        let sp = spec(2, 0);
        let ideal = polygraph_ideal(&sp, &opts()).unwrap();
        assert!(ideal.is_zero());
        let pres = s_module_presentation(&sp, &ideal, &PolygraphLimits::default(), &opts()).unwrap();
        assert_eq!(pres.module().generators().rank(), 1);
        assert!(pres.module().relations().is_empty());
    }

    #[test]
    fn single_point_module_is_free() {
        for k in 0..=2 {
            let (_, _, pres) = setup(1, k);
            assert_eq!(pres.module().generators().shifts(), &[0]);
            assert!(pres.module().relations().is_empty());
            assert!(pres.sources()[0].is_constant());
        }
    }

    #[test]
    fn two_points_one_letter_generators() {
        let (sp, ideal, pres) = setup(2, 1);
        let t = ideal.ring();
        let mut names: Vec<String> = pres.sources().iter().map(|m| m.to_string()).collect();
        names.sort();
        assert_eq!(names, ["1", "a1", "b1"]);
        assert_eq!(pres.module().generators().shifts(), &[0, 1, 1]);
        assert!(pres.relations_annihilate());
        // image of a1 is (x1, x2) and of b1*a1 is an S-combination of the three
        let s = sp.base_ring();
        let a1 = pres.sources().iter().position(|m| *m == t.parse("a1").unwrap()).unwrap();
        assert_eq!(pres.images()[a1], vec![s.parse("x1").unwrap(), s.parse("x2").unwrap()]);
        let fm = GradedFreeModule::new(&s, vec![0, 0]).ambient();
        let gens = ModuleBasis::from_vectors(
            fm.clone(),
            pres.images().iter().map(|v| ModuleVector::from_polys(&fm, v).unwrap()).collect(),
        );
        let lifting = LiftingBasis::new(&gens, &opts()).unwrap();
        for higher in ["a1^2", "a1*b1", "b1^2", "a1^3"] {
            let img: Vec<MultiPoly> = sp
                .functions()
                .iter()
                .map(|f| t.parse(higher).unwrap().compose(&s, &sp.component_map(&s, f)))
                .collect();
            assert!(lifting.lift(&ModuleVector::from_polys(&fm, &img).unwrap()).is_some(), "{higher}");
        }
    }

    #[test]
    fn embedding_in_low_degrees() {
        for (n, k) in [(1, 1), (2, 1), (2, 0)] {
            let sp = spec(n, k);
            let ideal = polygraph_ideal(&sp, &opts()).unwrap();
            assert!(embedding_holds(&sp, &ideal, 4).unwrap(), "({n},{k})");
        }
        // a strictly larger ideal breaks injectivity
        let sp = spec(2, 1);
        let t = sp.big_ring();
        let too_big = IdealBasis::parse(&t, &["a1 - x1", "b1 - y1"]).unwrap().groebner().unwrap();
        assert!(!embedding_holds(&sp, &too_big, 2).unwrap());
    }

    #[test]
    fn stability_is_checked() {
        let sp = spec(2, 1);
        let t = sp.big_ring();
        let lopsided = IdealBasis::parse(&t, &["a1 - x1"]).unwrap().groebner().unwrap();
        assert!(matches!(check_ideal_stable(&sp, &lopsided), Err(Error::ActionNotStable(_))));
    }

    #[test]
    fn single_point_ext_vanishes() {
        let (_, _, pres) = setup(1, 1);
        for j in 1..=3 {
            let r = ext_modules(&pres, j, &opts()).unwrap();
            assert_eq!(r.verdict, Verdict::ExtZero);
            assert!(r.is_consistent());
        }
        let (_, _, pres0) = setup(2, 0);
        assert_eq!(ext_modules(&pres0, 1, &opts()).unwrap().verdict, Verdict::ExtZero);
    }

    #[test]
    fn hom_into_base_of_free_module() {
        // Ext^0(S, S) = S with its invariant ring in degree 1 spanned by x1+x2, y1+y2
        let (_, _, pres) = setup(2, 0);
        let r = ext_modules(&pres, 0, &opts()).unwrap();
        assert_eq!(r.verdict, Verdict::InvariantsNonzero { witness_degree: 0 });
        let row1 = r.dimensions.iter().find(|d| d.degree == 1).unwrap();
        assert_eq!((row1.ext_dimension, row1.invariant_dimension), (4, 2));
        assert!(r.is_consistent());
    }

    #[test]
    fn two_points_one_letter_pipeline() {
        let sp = spec(2, 1);
        let report = equivariant_vanishing_check(&sp, &PolygraphLimits::default(), &opts()).unwrap();
        assert_eq!(report.j, 2);
        assert!(matches!(report.verdict, Verdict::ExtZero | Verdict::InvariantsZero));
        assert!(report.is_consistent());
        assert_eq!(report.projective_dimension, 1);
    }

    #[test]
    fn first_ext_of_two_points() {
        let (_, _, pres) = setup(2, 1);
        let r = ext_modules(&pres, 1, &opts()).unwrap();
        assert!(r.is_consistent());
        assert!(r.window.is_some());
        assert!(r.dimensions.iter().any(|d| d.ext_dimension > 0));
        let (lo, hi) = r.window.unwrap();
        assert!(lo <= *r.ext_generator_degrees.iter().max().unwrap() && hi >= lo);
    }

    #[test]
    fn ext_does_not_depend_on_the_resolution() {
        let (_, _, pres) = setup(2, 1);
        let minimal = pres.minimal_resolution(&opts()).unwrap();
        let fat = pres.module().free_resolution(8, &opts()).unwrap();
        assert!(fat.is_complex());
        for j in 0..=2 {
            let a = ext_dimensions(&minimal, j, -6, 4, &opts()).unwrap();
            let b = ext_dimensions(&fat, j, -6, 4, &opts()).unwrap();
            assert_eq!(a, b, "Ext^{j}");
        }
    }

    #[test]
    fn invariants_do_not_depend_on_the_resolution() {
        for (n, k, j) in [(2, 1, 1), (3, 1, 1), (3, 1, 2)] {
            let (_, _, pres) = setup(n, k);
            let minimal = ext_modules(&pres, j, &opts()).unwrap();
            let fat = pres.module().free_resolution(8, &opts()).unwrap();
            let other = ext_report(&pres, &fat, j, &opts()).unwrap();
            for row in &minimal.dimensions {
                let same = other.dimensions.iter().find(|r| r.degree == row.degree);
                let (e, i) = same.map_or((0, 0), |r| (r.ext_dimension, r.invariant_dimension));
                assert_eq!((e, i), (row.ext_dimension, row.invariant_dimension), "({n},{k}) Ext^{j} degree {}", row.degree);
            }
        }
    }

    #[test]
    fn ext_action_is_a_group_action() {
        let (_, _, pres) = setup(3, 1);
        let res = pres.minimal_resolution(&opts()).unwrap();
        for j in 1..=2 {
            let ext = ext_presentation(&res, j, &opts()).unwrap().unwrap();
            let act = ext_action(&pres, &res, &ext, j, &opts()).unwrap();
            act.check_stable(&ext.module).unwrap();
            let lo = *ext.module.generators().shifts().iter().min().unwrap();
            for q in lo..lo + 3 {
                assert!(act.satisfies_group_law_on(&ext.module, q), "Ext^{j} degree {q}");
            }
        }
    }

    #[test]
    fn window_rule() {
        assert_eq!(invariant_window(&[-3, -2], &[-1], 2), Some((-3, 1)));
        assert_eq!(invariant_window(&[0], &[], 3), Some((0, 3)));
        assert_eq!(invariant_window(&[], &[], 3), None);
    }
}
