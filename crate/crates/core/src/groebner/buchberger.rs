//! Buchberger's algorithm for submodules of graded free modules.
//!
//! Pairs are processed by the normal (sugar) strategy with ties broken by
//! pair index, and pruned with the Gebauer–Möller criteria. Input generators
//! enter the same queue; for homogeneous input, a generator that survives
//! reduction after every lower- and equal-degree pair has been processed is a
//! minimal generator of the submodule, which is how minimal generating sets
//! are extracted.

use std::collections::BTreeMap;

use super::vector::{FreeModule, ModuleVector, Term};
use crate::error::{Error, Result};
use crate::poly::Monomial;

/// Guards for a Gröbner basis computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbOptions {
    /// Abort once the working basis holds more elements than this.
    pub max_basis: usize,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions { max_basis: 20_000 }
    }
}

pub(crate) struct GbOutput {
    /// Reduced basis, monic, ascending by leading term.
    pub basis: Vec<ModuleVector>,
    /// Indices of the inputs that were not redundant when they were reached.
    pub minimal_inputs: Vec<usize>,
}

struct Element {
    v: ModuleVector,
    lm: Monomial,
    comp: u32,
    mask: u64,
    sugar: i64,
    redundant: bool,
}

impl Element {
    fn new(v: ModuleVector, sugar: i64) -> Self {
        let v = v.monic();
        let lead = v.leading().expect("nonzero element");
        Element {
            lm: lead.mono.clone(),
            comp: lead.comp,
            mask: lead.mono.support_mask(),
            sugar,
            v,
            redundant: false,
        }
    }
}

/// Reduces `v` against the non-redundant elements. With `full` the tail is
/// reduced too; otherwise only until the leading term is irreducible.
fn reduce(
    fm: &FreeModule,
    mut v: ModuleVector,
    mut sugar: i64,
    elems: &[Element],
    full: bool,
) -> (ModuleVector, i64) {
    let mut done: Vec<Term> = Vec::new();
    while let Some(t) = v.leading() {
        let tmask = t.mono.support_mask();
        let reducer = elems.iter().find(|g| {
            !g.redundant && g.comp == t.comp && g.mask & !tmask == 0 && g.lm.divides(&t.mono)
        });
        match reducer {
            Some(g) => {
                let q = t.mono.div(&g.lm);
                let c = -&t.coef;
                sugar = sugar.max(q.degree() as i64 + g.sugar);
                v = v.axpy(fm, &g.v, Some(&q), Some(&c));
            }
            None if full => done.push(v.pop_leading()),
            None => break,
        }
    }
    if done.is_empty() {
        return (v, sugar);
    }
    done.extend(v.into_terms());
    (ModuleVector::from_sorted_terms(done), sugar)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Pair = 0,
    Input = 1,
}

type Key = (i64, Kind, usize, usize);

pub(crate) fn groebner(fm: &FreeModule, inputs: &[ModuleVector], opts: &GbOptions) -> Result<GbOutput> {
    let rank_one = fm.rank() == 1;
    let mut elems: Vec<Element> = Vec::new();
    let mut queue: BTreeMap<Key, Option<Monomial>> = BTreeMap::new();
    let mut minimal_inputs = Vec::new();
    for (k, v) in inputs.iter().enumerate() {
        if !v.is_zero() {
            queue.insert((v.sugar(fm), Kind::Input, k, 0), None);
        }
    }
    while let Some(((sugar, kind, a, b), _)) = queue.pop_first() {
        let (candidate, sugar) = match kind {
            Kind::Input => (inputs[a].clone(), sugar),
            Kind::Pair => spoly(fm, &elems[a], &elems[b]),
        };
        let (r, sugar) = reduce(fm, candidate, sugar, &elems, true);
        if r.is_zero() {
            continue;
        }
        if kind == Kind::Input {
            minimal_inputs.push(a);
        }
        elems.push(Element::new(r, sugar));
        if elems.len() > opts.max_basis {
            return Err(Error::BasisLimit(opts.max_basis));
        }
        update(fm, &mut elems, &mut queue, rank_one);
    }
    Ok(GbOutput { basis: interreduce(fm, elems), minimal_inputs })
}

fn spoly(fm: &FreeModule, f: &Element, g: &Element) -> (ModuleVector, i64) {
    let l = f.lm.lcm(&g.lm, &fm.ring);
    let qf = l.div(&f.lm);
    let qg = l.div(&g.lm);
    let minus = fm.ring.field().from_i64(-1);
    let s = f.v.mul_term(&qf, &fm.ring.field().one()).axpy(fm, &g.v, Some(&qg), Some(&minus));
    let sugar = (f.sugar + qf.degree() as i64).max(g.sugar + qg.degree() as i64);
    (s, sugar)
}

/// Gebauer–Möller update after appending a new element.
fn update(
    fm: &FreeModule,
    elems: &mut [Element],
    queue: &mut BTreeMap<Key, Option<Monomial>>,
    rank_one: bool,
) {
    let hi = elems.len() - 1;
    let (old, last) = elems.split_at_mut(hi);
    let h = &last[0];
    let cand: Vec<(usize, Monomial, bool)> = old
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.redundant && g.comp == h.comp)
        .map(|(i, g)| (i, g.lm.lcm(&h.lm, &fm.ring), rank_one && g.lm.coprime(&h.lm)))
        .collect();
    let mut kept: Vec<&(usize, Monomial, bool)> = Vec::new();
    for (idx, c) in cand.iter().enumerate() {
        let dominated = cand[idx + 1..].iter().any(|o| o.1.divides(&c.1))
            || kept.iter().any(|o| o.1.divides(&c.1));
        if c.2 || !dominated {
            kept.push(c);
        }
    }
    // old pairs whose lcm is divisible by lm(h) with both new lcms different
    let stale: Vec<Key> = queue
        .iter()
        .filter_map(|(key, l)| {
            let l = l.as_ref()?;
            let (i, j) = (key.2, key.3);
            if old[i].comp != h.comp || !h.lm.divides(l) {
                return None;
            }
            let li = old[i].lm.lcm(&h.lm, &fm.ring);
            let lj = old[j].lm.lcm(&h.lm, &fm.ring);
            (li != *l && lj != *l).then_some(*key)
        })
        .collect();
    for k in stale {
        queue.remove(&k);
    }
    for g in old.iter_mut() {
        if !g.redundant && g.comp == h.comp && h.lm.divides(&g.lm) {
            g.redundant = true;
        }
    }
    for (i, l, coprime) in kept {
        if *coprime {
            continue;
        }
        let g = &old[*i];
        let sugar = (g.sugar + (l.degree() - g.lm.degree()) as i64)
            .max(h.sugar + (l.degree() - h.lm.degree()) as i64);
        queue.insert((sugar, Kind::Pair, *i, hi), Some(l.clone()));
    }
}

fn interreduce(fm: &FreeModule, elems: Vec<Element>) -> Vec<ModuleVector> {
    let mut keep: Vec<Element> = elems.into_iter().filter(|e| !e.redundant).collect();
    keep.sort_by(|a, b| fm.cmp_terms((&a.lm, a.comp), (&b.lm, b.comp)));
    for i in 0..keep.len() {
        let mut v = keep[i].v.clone();
        let lead = v.pop_leading();
        keep[i].redundant = true;
        let (tail, _) = reduce(fm, v, 0, &keep, true);
        keep[i].redundant = false;
        let mut terms = vec![lead];
        terms.extend(tail.into_terms());
        keep[i].v = ModuleVector::from_sorted_terms(terms);
    }
    keep.into_iter().map(|e| e.v).collect()
}

/// Full normal form against a reduced basis.
pub(crate) fn normal_form(fm: &FreeModule, v: &ModuleVector, basis: &[ModuleVector]) -> ModuleVector {
    let elems: Vec<Element> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| Element::new(b.clone(), 0))
        .collect();
    reduce(fm, v.clone(), 0, &elems, true).0
}

/// Reusable reducer for repeated normal forms against one basis.
pub(crate) struct Reducer<'a> {
    fm: &'a FreeModule,
    elems: Vec<Element>,
}

impl<'a> Reducer<'a> {
    pub fn new(fm: &'a FreeModule, basis: &[ModuleVector]) -> Self {
        let elems = basis
            .iter()
            .filter(|b| !b.is_zero())
            .map(|b| Element::new(b.clone(), 0))
            .collect();
        Reducer { fm, elems }
    }

    pub fn reduce(&self, v: &ModuleVector) -> ModuleVector {
        reduce(self.fm, v.clone(), 0, &self.elems, true).0
    }

    /// Whether a term is divisible by some leading term.
    pub fn is_reducible(&self, m: &Monomial, comp: u32) -> bool {
        let mask = m.support_mask();
        self.elems
            .iter()
            .any(|g| g.comp == comp && g.mask & !mask == 0 && g.lm.divides(m))
    }
}
