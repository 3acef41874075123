//! Gröbner bases of ideals and submodules, normal forms, elimination,
//! intersection of ideals and syzygies.

mod buchberger;
mod vector;

use rayon::prelude::*;
use smallvec::SmallVec;

pub use buchberger::GbOptions;
pub(crate) use buchberger::Reducer;
pub use vector::{FreeModule, ModuleOrder, ModuleVector, Term};

use crate::error::{AlgebraError, Error, Result};
use crate::poly::{MonomialOrder, MultiPoly, Ring, RingRef};

/// Generators of an ideal, optionally known to be a reduced Gröbner basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealBasis {
    ring: RingRef,
    generators: Vec<MultiPoly>,
    is_groebner: bool,
}

fn ideal_module(ring: &RingRef) -> FreeModule {
    FreeModule::new(ring, vec![0], ModuleOrder::Top)
}

fn to_vector(p: &MultiPoly) -> ModuleVector {
    let fm = ideal_module(p.ring());
    ModuleVector::from_polys(&fm, std::slice::from_ref(p)).expect("same ring")
}

fn from_vector(ring: &RingRef, v: &ModuleVector) -> MultiPoly {
    v.to_polys(&ideal_module(ring)).pop().unwrap()
}

impl IdealBasis {
    /// Ideal generated by `generators`; zero polynomials are dropped.
    pub fn new(ring: &RingRef, generators: Vec<MultiPoly>) -> Result<Self> {
        if generators.iter().any(|g| g.ring() != ring) {
            return Err(AlgebraError::RingMismatch.into());
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(IdealBasis { ring: ring.clone(), generators, is_groebner: false })
    }

    pub fn parse(ring: &RingRef, generators: &[&str]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|s| ring.parse(s))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(ring, gens)
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn is_groebner(&self) -> bool {
        self.is_groebner
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Reduced Gröbner basis with the default size guard.
    pub fn groebner(&self) -> Result<IdealBasis> {
        self.groebner_with(&GbOptions::default())
    }

    pub fn groebner_with(&self, opts: &GbOptions) -> Result<IdealBasis> {
        if self.is_groebner {
            return Ok(self.clone());
        }
        let fm = ideal_module(&self.ring);
        let inputs: Vec<ModuleVector> = self.generators.iter().map(to_vector).collect();
        let out = buchberger::groebner(&fm, &inputs, opts)?;
        Ok(IdealBasis {
            ring: self.ring.clone(),
            generators: out.basis.iter().map(|v| from_vector(&self.ring, v)).collect(),
            is_groebner: true,
        })
    }

    /// Remainder of `f` modulo the basis; requires a Gröbner basis.
    pub fn normal_form(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if !self.is_groebner {
            return Err(Error::NotGroebner);
        }
        if f.ring() != &self.ring {
            return Err(AlgebraError::RingMismatch.into());
        }
        let fm = ideal_module(&self.ring);
        let basis: Vec<ModuleVector> = self.generators.iter().map(to_vector).collect();
        let r = buchberger::normal_form(&fm, &to_vector(f), &basis);
        Ok(from_vector(&self.ring, &r))
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Whether the ideal is the unit ideal.
    pub fn is_unit(&self) -> Result<bool> {
        let gb = self.groebner()?;
        Ok(gb.generators.iter().any(|g| g.is_constant()))
    }

    /// Generators of `I ∩ k[keep]`, as a reduced Gröbner basis of the original ring.
    pub fn eliminate(&self, keep: &[usize]) -> Result<IdealBasis> {
        self.eliminate_with(keep, &GbOptions::default())
    }

    pub fn eliminate_with(&self, keep: &[usize], opts: &GbOptions) -> Result<IdealBasis> {
        let n = self.ring.nvars();
        let elim: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        if elim.is_empty() {
            return self.groebner_with(opts);
        }
        if elim.len() == n {
            let unit = self.groebner_with(opts)?.generators.iter().any(|g| g.is_constant());
            let gens = if unit { vec![MultiPoly::one(&self.ring)] } else { Vec::new() };
            return Ok(IdealBasis { ring: self.ring.clone(), generators: gens, is_groebner: true });
        }
        // eliminated variables first, then the kept ones, under a block order
        let order: Vec<usize> = elim.iter().chain(keep.iter().filter(|&&k| k < n)).copied().collect();
        let names = order.iter().map(|&i| self.ring.names()[i].clone()).collect();
        let weights = order.iter().map(|&i| self.ring.weights()[i]).collect();
        let block = Ring::new(
            names,
            weights,
            MonomialOrder::Block { split: elim.len() },
            self.ring.field(),
        )?;
        let mut to_block = vec![0; n];
        for (pos, &i) in order.iter().enumerate() {
            to_block[i] = pos;
        }
        let gens = self.generators.iter().map(|g| g.map_variables(&block, &to_block)).collect();
        let gb = IdealBasis::new(&block, gens)?.groebner_with(opts)?;
        let back: Vec<usize> = order.clone();
        let kept: Vec<MultiPoly> = gb
            .generators
            .iter()
            .filter(|g| {
                g.terms()
                    .iter()
                    .all(|(m, _)| m.exponents()[..elim.len()].iter().all(|&e| e == 0))
            })
            .map(|g| g.map_variables(&self.ring, &back))
            .collect();
        IdealBasis::new(&self.ring, kept)?.groebner_with(opts)
    }

    /// Intersection with another ideal through `t·I + (1−t)·J`, eliminating `t`.
    pub fn intersect(&self, other: &IdealBasis, opts: &GbOptions) -> Result<IdealBasis> {
        if self.ring != other.ring {
            return Err(AlgebraError::RingMismatch.into());
        }
        if self.is_zero() || other.is_zero() {
            return Ok(IdealBasis { ring: self.ring.clone(), generators: Vec::new(), is_groebner: true });
        }
        let n = self.ring.nvars();
        let mut names = vec![fresh_name(&self.ring)];
        names.extend(self.ring.names().iter().cloned());
        let mut weights = vec![1];
        weights.extend(self.ring.weights().iter().copied());
        let ext = Ring::new(names, weights, MonomialOrder::Block { split: 1 }, self.ring.field())?;
        let shift: Vec<usize> = (1..=n).collect();
        let t = MultiPoly::var(&ext, 0);
        let one_minus_t = &MultiPoly::one(&ext) - &t;
        let mut gens = Vec::new();
        for g in &self.generators {
            gens.push(&t * &g.map_variables(&ext, &shift));
        }
        for g in &other.generators {
            gens.push(&one_minus_t * &g.map_variables(&ext, &shift));
        }
        let gb = IdealBasis::new(&ext, gens)?.groebner_with(opts)?;
        let target = self.ring.clone();
        let kept: Vec<MultiPoly> = gb
            .generators
            .iter()
            .filter(|g| g.terms().iter().all(|(m, _)| m.exponents()[0] == 0))
            .map(|g| {
                let terms = g
                    .terms()
                    .iter()
                    .map(|(m, c)| {
                        let e: SmallVec<[u16; 12]> = m.exponents()[1..].iter().copied().collect();
                        (target.monomial(e), c.clone())
                    })
                    .collect();
                MultiPoly::from_terms(&target, terms)
            })
            .collect();
        IdealBasis::new(&self.ring, kept)?.groebner_with(opts)
    }

    /// Leading monomials of the generators.
    pub fn leading_monomials(&self) -> Vec<crate::poly::Monomial> {
        self.generators.iter().filter_map(|g| g.leading().map(|t| t.0.clone())).collect()
    }
}

fn fresh_name(ring: &Ring) -> String {
    let mut name = "t".to_string();
    while ring.var_index(&name).is_some() {
        name.push('_');
    }
    name
}

/// Intersection of several ideals of one ring by balanced pairwise folding.
/// Independent pairs at each level are computed in parallel; the result does
/// not depend on scheduling.
pub fn intersect_ideals(ideals: &[IdealBasis], opts: &GbOptions) -> Result<IdealBasis> {
    let first = ideals.first().ok_or(Error::Empty("intersection of no ideals"))?;
    if ideals.iter().any(|i| i.ring != first.ring) {
        return Err(AlgebraError::RingMismatch.into());
    }
    let mut level: Vec<IdealBasis> = ideals.to_vec();
    if level.len() == 1 {
        return level.pop().unwrap().groebner_with(opts);
    }
    while level.len() > 1 {
        level = level
            .par_chunks(2)
            .map(|pair| match pair {
                [a, b] => a.intersect(b, opts),
                [a] => Ok(a.clone()),
                _ => unreachable!(),
            })
            .collect::<Result<Vec<_>>>()?;
    }
    level.pop().unwrap().groebner_with(opts)
}

/// Generators of a submodule of a graded free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleBasis {
    ambient: FreeModule,
    elements: Vec<ModuleVector>,
    is_groebner: bool,
}

impl ModuleBasis {
    pub fn new(ambient: FreeModule, elements: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let mut vs = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if e.len() != ambient.rank() {
                return Err(Error::Shape(format!(
                    "element {i} has length {} but the ambient rank is {}",
                    e.len(),
                    ambient.rank()
                )));
            }
            vs.push(ModuleVector::from_polys(&ambient, e)?);
        }
        Ok(Self::from_vectors(ambient, vs))
    }

    pub fn from_vectors(ambient: FreeModule, elements: Vec<ModuleVector>) -> Self {
        ModuleBasis { ambient, elements, is_groebner: false }
    }

    pub fn ambient(&self) -> &FreeModule {
        &self.ambient
    }

    pub fn vectors(&self) -> &[ModuleVector] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_groebner(&self) -> bool {
        self.is_groebner
    }

    /// Elements as lists of polynomials, one per component.
    pub fn elements(&self) -> Vec<Vec<MultiPoly>> {
        self.elements.iter().map(|v| v.to_polys(&self.ambient)).collect()
    }

    pub fn groebner(&self) -> Result<ModuleBasis> {
        self.groebner_with(&GbOptions::default())
    }

    pub fn groebner_with(&self, opts: &GbOptions) -> Result<ModuleBasis> {
        if self.is_groebner {
            return Ok(self.clone());
        }
        let out = buchberger::groebner(&self.ambient, &self.elements, opts)?;
        Ok(ModuleBasis { ambient: self.ambient.clone(), elements: out.basis, is_groebner: true })
    }

    pub fn normal_form(&self, v: &ModuleVector) -> Result<ModuleVector> {
        if !self.is_groebner {
            return Err(Error::NotGroebner);
        }
        Ok(buchberger::normal_form(&self.ambient, v, &self.elements))
    }

    /// Degrees of the elements (zero counts as degree 0); fails if some
    /// element is inhomogeneous.
    pub fn degrees(&self) -> Result<Vec<i64>> {
        self.elements
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if v.is_zero() {
                    return Ok(0);
                }
                v.homogeneous_degree(&self.ambient)
                    .ok_or_else(|| Error::Inhomogeneous(format!("module element {i}")))
            })
            .collect()
    }

    /// A minimal homogeneous generating subset, ascending in degree.
    pub fn minimal_generators(&self, opts: &GbOptions) -> Result<ModuleBasis> {
        let degs = self.degrees()?;
        let mut idx: Vec<usize> = (0..self.elements.len()).filter(|&i| !self.elements[i].is_zero()).collect();
        idx.sort_by_key(|&i| (degs[i], i));
        let sorted: Vec<ModuleVector> = idx.iter().map(|&i| self.elements[i].clone()).collect();
        let out = buchberger::groebner(&self.ambient, &sorted, opts)?;
        let mut chosen: Vec<usize> = out.minimal_inputs;
        chosen.sort_by_key(|&k| (degs[idx[k]], k));
        let elements = chosen.into_iter().map(|k| sorted[k].clone()).collect();
        Ok(ModuleBasis { ambient: self.ambient.clone(), elements, is_groebner: false })
    }
}

/// Generators of a submodule together with a basis that records how each
/// Gröbner element is built from them. Supports syzygies and lifting.
pub struct LiftingBasis {
    ambient: FreeModule,
    ngens: usize,
    augmented: FreeModule,
    gb: Vec<ModuleVector>,
}

impl LiftingBasis {
    /// Gröbner basis of `{(g_i, e_i)}` in `F ⊕ R^m` under an elimination order.
    pub fn new(gens: &ModuleBasis, opts: &GbOptions) -> Result<Self> {
        let degrees = gens
            .elements
            .iter()
            .map(|g| if g.is_zero() { 0 } else { g.sugar(&gens.ambient) })
            .collect();
        Self::with_degrees(gens, degrees, opts)
    }

    /// As [`LiftingBasis::new`], with `e_i` placed in degree `degrees[i]`.
    pub fn with_degrees(gens: &ModuleBasis, degrees: Vec<i64>, opts: &GbOptions) -> Result<Self> {
        let ambient = gens.ambient.clone();
        let r = ambient.rank();
        let m = gens.elements.len();
        if degrees.len() != m {
            return Err(Error::Shape(format!("{} degrees for {m} generators", degrees.len())));
        }
        let mut shifts = ambient.shifts.clone();
        shifts.extend(degrees);
        let augmented = FreeModule::new(&ambient.ring, shifts, ModuleOrder::Elimination { split: r });
        let one = ambient.ring.field().one();
        let inputs: Vec<ModuleVector> = gens
            .elements
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let mut terms: Vec<Term> = g.terms().to_vec();
                terms.push(Term { mono: ambient.ring.one_monomial(), comp: (r + k) as u32, coef: one.clone() });
                ModuleVector::from_terms(&augmented, terms)
            })
            .collect();
        let out = buchberger::groebner(&augmented, &inputs, opts)?;
        Ok(LiftingBasis { ambient, ngens: m, augmented, gb: out.basis })
    }

    fn tracking_module(&self) -> FreeModule {
        FreeModule::new(
            &self.ambient.ring,
            self.augmented.shifts[self.ambient.rank()..].to_vec(),
            ModuleOrder::Top,
        )
    }

    /// Generators of the kernel of `R^m → F`, `e_i ↦ g_i`.
    pub fn syzygies(&self) -> ModuleBasis {
        let r = self.ambient.rank();
        let tm = self.tracking_module();
        let map: Vec<Option<usize>> = (0..r + self.ngens).map(|c| c.checked_sub(r)).collect();
        let elements = self
            .gb
            .iter()
            .filter(|v| v.leading().is_some_and(|t| t.comp as usize >= r))
            .map(|v| v.remap_components(&tm, &map))
            .collect();
        ModuleBasis::from_vectors(tm, elements)
    }

    /// Coefficients `c` with `v = Σ c_i g_i`, or `None` if `v` is not in the span.
    pub fn lift(&self, v: &ModuleVector) -> Option<Vec<MultiPoly>> {
        let r = self.ambient.rank();
        let ext = v.reorder(&self.augmented);
        let reducer = Reducer::new(&self.augmented, &self.gb);
        let red = reducer.reduce(&ext);
        if red.leading().is_some_and(|t| (t.comp as usize) < r) {
            return None;
        }
        let tm = self.tracking_module();
        let map: Vec<Option<usize>> = (0..r + self.ngens).map(|c| c.checked_sub(r)).collect();
        let w = red.remap_components(&tm, &map);
        let minus = self.ambient.ring.field().from_i64(-1);
        Some(w.scale(&minus).to_polys(&tm))
    }

    /// Reduced Gröbner basis of the submodule itself.
    pub fn submodule_groebner(&self) -> ModuleBasis {
        let r = self.ambient.rank();
        let map: Vec<Option<usize>> = (0..r + self.ngens).map(|c| (c < r).then_some(c)).collect();
        let elements: Vec<ModuleVector> = self
            .gb
            .iter()
            .filter(|v| v.leading().is_some_and(|t| (t.comp as usize) < r))
            .map(|v| v.remap_components(&self.ambient, &map))
            .collect();
        ModuleBasis::from_vectors(self.ambient.clone(), elements)
    }
}

/// Minimal generators of the syzygy module of homogeneous `gens`.
pub fn syzygies(gens: &ModuleBasis, opts: &GbOptions) -> Result<ModuleBasis> {
    let degrees = gens.degrees()?;
    kernel(gens, degrees, opts)
}

/// Minimal generators of the kernel of `⊕ R(−degrees[i]) → F`, `e_i ↦ gens[i]`.
/// Each nonzero generator must be homogeneous of its given degree.
pub fn kernel(gens: &ModuleBasis, degrees: Vec<i64>, opts: &GbOptions) -> Result<ModuleBasis> {
    for (i, g) in gens.elements.iter().enumerate() {
        if !g.is_zero() && g.homogeneous_degree(&gens.ambient) != degrees.get(i).copied() {
            return Err(Error::Inhomogeneous(format!("map column {i} does not have its source degree")));
        }
    }
    let lb = LiftingBasis::with_degrees(gens, degrees, opts)?;
    let syz = lb.syzygies();
    if syz.is_empty() {
        return Ok(syz);
    }
    syz.minimal_generators(opts)
}

#[cfg(test)]
mod tests;
