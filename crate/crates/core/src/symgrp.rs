//! Actions of symmetric groups on graded modules by semilinear maps, and
//! projections onto the trivial and sign isotypic components.
//!
//! An action of `𝔖_n` is recorded through the adjacent transpositions
//! `s_i = (i, i+1)`: each acts on the ring by permuting variables and on the
//! module by sending generator `e_k` to a given vector. All other group
//! elements are reached as words in the `s_i`.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{AlgebraError, Error, Result};
use crate::gradedmod::{GradedModule, GradedPiece};
use crate::groebner::{FreeModule, ModuleVector, Term};
use crate::linalg::Matrix;
use crate::poly::{MultiPoly, RingRef};
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Character {
    Trivial,
    Sign,
}

/// A permutation of `0..n`, stored as its list of images.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// `(i, i+1)`.
    pub fn adjacent(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(i, i + 1);
        p
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn sign(&self) -> i64 {
        let inversions = (0..self.0.len())
            .flat_map(|i| (i + 1..self.0.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.0[i] > self.0[j])
            .count();
        if inversions % 2 == 0 { 1 } else { -1 }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }
}

/// `n!`, saturating.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).fold(1u64, |a, b| a.saturating_mul(b))
}

fn character_value(chi: Character, sigma: &Permutation) -> i64 {
    match chi {
        Character::Trivial => 1,
        Character::Sign => sigma.sign(),
    }
}

fn check_characteristic(field: Field, n: usize) -> Result<()> {
    let p = field.characteristic();
    if p != 0 && (p as usize) <= n {
        return Err(Error::CharacteristicDividesOrder(p));
    }
    Ok(())
}

/// `(1/n!) Σ_σ χ(σ) ρ(σ)` from the matrices of all group elements.
pub fn reynolds(mats: &[(Permutation, Matrix)], chi: Character, field: Field) -> Result<Matrix> {
    let (first, m0) = mats.first().ok_or(Error::Empty("group with no elements"))?;
    let n = first.0.len();
    check_characteristic(field, n)?;
    let mut acc = Matrix::zeros(m0.rows(), m0.cols(), field);
    for (sigma, m) in mats {
        acc = acc.add(&m.scale(&field.from_i64(character_value(chi, sigma))));
    }
    let order = field.from_i64(mats.len() as i64);
    Ok(acc.scale(&order.inv()))
}

/// Matrices of every group element from those of the adjacent
/// transpositions, in breadth-first order from the identity.
pub fn group_matrices(n: usize, generators: &[Matrix], field: Field) -> Vec<(Permutation, Matrix)> {
    let dim = generators.first().map_or(0, |m| m.rows());
    let id = Permutation::identity(n);
    let mut seen: BTreeMap<Permutation, Matrix> = BTreeMap::new();
    let mut order = vec![id.clone()];
    seen.insert(id.clone(), Matrix::identity(dim, field));
    let mut queue = VecDeque::from([id]);
    while let Some(tau) = queue.pop_front() {
        for (i, g) in generators.iter().enumerate() {
            let sigma = Permutation::adjacent(n, i).compose(&tau);
            if !seen.contains_key(&sigma) {
                let m = g.mul(&seen[&tau]);
                seen.insert(sigma.clone(), m);
                order.push(sigma.clone());
                queue.push_back(sigma);
            }
        }
    }
    order
        .into_iter()
        .map(|p| {
            let m = seen.remove(&p).unwrap();
            (p, m)
        })
        .collect()
}

/// Whether matrices for `s_1, …, s_{n−1}` satisfy the Coxeter relations.
pub fn satisfies_group_law(generators: &[Matrix], field: Field) -> bool {
    let Some(first) = generators.first() else { return true };
    let id = Matrix::identity(first.rows(), field);
    let pow = |m: &Matrix, e: usize| (1..e).fold(m.clone(), |acc, _| acc.mul(m));
    for (i, a) in generators.iter().enumerate() {
        if pow(a, 2) != id {
            return false;
        }
        for (j, b) in generators.iter().enumerate().skip(i + 1) {
            let e = if j == i + 1 { 3 } else { 2 };
            if pow(&a.mul(b), e) != id {
                return false;
            }
        }
    }
    true
}

/// Partitions of `n` with parts in non-increasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Size of the conjugacy class with cycle type `lambda`.
pub fn class_size(lambda: &[usize]) -> u64 {
    let n: usize = lambda.iter().sum();
    let mut z = 1u64;
    let mut mult: BTreeMap<usize, u64> = BTreeMap::new();
    for &l in lambda {
        *mult.entry(l).or_default() += 1;
        z *= l as u64;
    }
    z *= mult.values().map(|&m| factorial(m as usize)).product::<u64>();
    factorial(n) / z
}

/// A word in the `s_i` whose product has cycle type `lambda`: consecutive
/// blocks, each a cycle `s_a s_{a+1} ⋯ s_{a+l−2}`.
pub fn class_word(lambda: &[usize]) -> Vec<usize> {
    let mut word = Vec::new();
    let mut start = 0;
    for &l in lambda {
        word.extend(start..start + l - 1);
        start += l;
    }
    word
}

fn trace_of_word(generators: &[Matrix], word: &[usize], dim: usize, field: Field) -> crate::scalar::Scalar {
    let Some((&last, init)) = word.split_last() else {
        return field.from_i64(dim as i64);
    };
    let b = &generators[last];
    let mut acc = field.zero();
    if init.is_empty() {
        for i in 0..dim {
            acc = &acc + b.get(i, i);
        }
        return acc;
    }
    let a = init[1..].iter().fold(generators[init[0]].clone(), |m, &w| m.mul(&generators[w]));
    for i in 0..dim {
        for j in 0..dim {
            let (x, y) = (a.get(i, j), b.get(j, i));
            if !x.is_zero() && !y.is_zero() {
                acc = &acc + &(x * y);
            }
        }
    }
    acc
}

/// `(1/n!) Σ_λ |C_λ| χ(λ) tr ρ(λ)`, valid in characteristic zero.
pub fn isotypic_dimension_by_characters(n: usize, generators: &[Matrix], chi: Character, field: Field) -> usize {
    let dim = generators.first().map_or(0, |m| m.rows());
    let mut total = field.zero();
    for lambda in partitions(n) {
        let sign = if (n - lambda.len()) % 2 == 0 { 1 } else { -1 };
        let chi_val = match chi {
            Character::Trivial => 1,
            Character::Sign => sign,
        };
        let tr = trace_of_word(generators, &class_word(&lambda), dim, field);
        total = &total + &(&tr * &field.from_i64(chi_val * class_size(&lambda) as i64));
    }
    let value = &total * &field.from_i64(factorial(n) as i64).inv();
    value.to_i64().and_then(|v| usize::try_from(v).ok()).expect("character inner product is a nonnegative integer")
}

/// An action of `𝔖_n` on a graded module over `ring`.
#[derive(Clone, Debug)]
pub struct PermAction {
    n: usize,
    ring: RingRef,
    var_perms: Vec<Vec<usize>>,
    /// Images of the module generators under each `s_i`; `None` fixes them.
    gen_images: Option<Vec<Vec<ModuleVector>>>,
}

impl PermAction {
    /// `var_perms[i][v]` is the image of variable `v` under `s_i`.
    pub fn new(
        n: usize,
        ring: &RingRef,
        var_perms: Vec<Vec<usize>>,
        gen_images: Option<Vec<Vec<ModuleVector>>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("symmetric group on zero letters".into()));
        }
        let gens = n - 1;
        let bad_perm = |p: &Vec<usize>| {
            let mut s = p.clone();
            s.sort_unstable();
            p.len() != ring.nvars() || s != (0..ring.nvars()).collect::<Vec<_>>()
        };
        if var_perms.len() != gens || var_perms.iter().any(bad_perm) {
            return Err(Error::Shape("one variable permutation per adjacent transposition".into()));
        }
        let w = ring.weights();
        if var_perms.iter().any(|p| p.iter().enumerate().any(|(v, &img)| w[img] != w[v])) {
            return Err(AlgebraError::InvalidRing("variable permutation must preserve weights".into()).into());
        }
        if gen_images.as_ref().is_some_and(|g| g.len() != gens) {
            return Err(Error::Shape("generator images for each adjacent transposition".into()));
        }
        Ok(PermAction { n, ring: ring.clone(), var_perms, gen_images })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn apply_poly(&self, i: usize, f: &MultiPoly) -> MultiPoly {
        f.map_variables(&self.ring, &self.var_perms[i])
    }

    /// `s_i(Σ c_k e_k) = Σ s_i(c_k) s_i(e_k)`.
    pub fn apply_vector(&self, i: usize, fm: &FreeModule, v: &ModuleVector) -> ModuleVector {
        let polys = v.to_polys(fm);
        let mut acc = ModuleVector::zero();
        for (k, c) in polys.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = self.apply_poly(i, c);
            let image = match &self.gen_images {
                Some(g) => g[i][k].clone(),
                None => ModuleVector::unit(fm, k),
            };
            acc = acc.add(fm, &image.mul_poly(fm, &c));
        }
        acc
    }

    /// Checks that every relation is mapped into the relation module;
    /// reports the first offending relation.
    pub fn check_stable(&self, module: &GradedModule) -> Result<()> {
        let fm = module.ambient();
        for (r, rel) in module.relations().iter().enumerate() {
            for i in 0..self.n - 1 {
                if !module.normal_form(&self.apply_vector(i, fm, rel)).is_zero() {
                    return Err(Error::ActionNotStable(r));
                }
            }
        }
        Ok(())
    }

    /// Matrices of `s_1, …, s_{n−1}` on the piece `M_q`.
    pub fn generator_matrices(&self, module: &GradedModule, piece: &GradedPiece) -> Vec<Matrix> {
        let fm = module.ambient();
        let red = module.reducer();
        (0..self.n - 1)
            .map(|i| {
                let mut m = Matrix::zeros(piece.dimension(), piece.dimension(), module.field());
                for (c, (mono, k)) in piece.basis().iter().enumerate() {
                    let e = ModuleVector::from_sorted_terms(vec![Term {
                        mono: mono.clone(),
                        comp: *k as u32,
                        coef: module.field().one(),
                    }]);
                    let img = self.apply_vector(i, fm, &e);
                    for (r, x) in module.coordinates_with(&red, piece, &img).into_iter().enumerate() {
                        if !x.is_zero() {
                            m.set(r, c, x);
                        }
                    }
                }
                m
            })
            .collect()
    }

    /// Dimension of the `χ`-isotypic part of `M_q`.
    pub fn isotypic_dimension(&self, module: &GradedModule, chi: Character, q: i64) -> Result<usize> {
        check_characteristic(module.field(), self.n)?;
        let piece = module.graded_piece(q);
        if piece.dimension() == 0 {
            return Ok(0);
        }
        let gens = self.generator_matrices(module, &piece);
        if self.n == 1 {
            return Ok(piece.dimension());
        }
        if module.field().characteristic() == 0 {
            return Ok(isotypic_dimension_by_characters(self.n, &gens, chi, module.field()));
        }
        let all = group_matrices(self.n, &gens, module.field());
        Ok(reynolds(&all, chi, module.field())?.to_columns().rank())
    }

    /// The Coxeter relations on `M_q`.
    pub fn satisfies_group_law_on(&self, module: &GradedModule, q: i64) -> bool {
        let piece = module.graded_piece(q);
        satisfies_group_law(&self.generator_matrices(module, &piece), module.field())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedmod::GradedFreeModule;
    use crate::poly::Ring;

    fn q(v: i64) -> crate::scalar::Scalar {
        Field::Rationals.from_i64(v)
    }

    fn perm_matrix(p: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(p.len(), p.len(), Field::Rationals);
        for (c, &r) in p.iter().enumerate() {
            m.set(r, c, q(1));
        }
        m
    }

    fn image_dim(m: &Matrix) -> usize {
        m.rank()
    }

    #[test]
    fn swap_on_the_plane() {
        let gens = [perm_matrix(&[1, 0])];
        let all = group_matrices(2, &gens, Field::Rationals);
        assert_eq!(all.len(), 2);
        let t = reynolds(&all, Character::Trivial, Field::Rationals).unwrap();
        let s = reynolds(&all, Character::Sign, Field::Rationals).unwrap();
        assert_eq!((image_dim(&t), image_dim(&s)), (1, 1));
        assert_eq!(t.mul(&t), t);
        assert_eq!(s.mul(&s), s);
    }

    #[test]
    fn permutation_representation_of_s3() {
        let gens = [perm_matrix(&[1, 0, 2]), perm_matrix(&[0, 2, 1])];
        assert!(satisfies_group_law(&gens, Field::Rationals));
        let all = group_matrices(3, &gens, Field::Rationals);
        assert_eq!(all.len(), 6);
        let s = reynolds(&all, Character::Sign, Field::Rationals).unwrap();
        assert_eq!(image_dim(&s), 0);
        let t = reynolds(&all, Character::Trivial, Field::Rationals).unwrap();
        assert_eq!(image_dim(&t), 1);
        assert_eq!(t.mul(&t), t);
    }

    #[test]
    fn refuses_small_characteristic() {
        let f = Field::prime(3).unwrap();
        let gens = [Matrix::identity(1, f), Matrix::identity(1, f)];
        let all = group_matrices(3, &gens, f);
        assert_eq!(reynolds(&all, Character::Trivial, f), Err(Error::CharacteristicDividesOrder(3)));
        let f5 = Field::prime(5).unwrap();
        let all5 = group_matrices(3, &[Matrix::identity(1, f5), Matrix::identity(1, f5)], f5);
        assert!(reynolds(&all5, Character::Trivial, f5).is_ok());
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for n in 1..=6 {
            let total: u64 = partitions(n).iter().map(|l| class_size(l)).sum();
            assert_eq!(total, factorial(n));
        }
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(class_size(&[2, 2]), 3);
    }

    #[test]
    fn class_words_have_the_right_cycle_type() {
        for n in 1..=5 {
            for lambda in partitions(n) {
                let p = class_word(&lambda)
                    .iter()
                    .fold(Permutation::identity(n), |acc, &i| acc.compose(&Permutation::adjacent(n, i)));
                let mut seen = vec![false; n];
                let mut cycles = Vec::new();
                for s in 0..n {
                    let mut len = 0;
                    let mut x = s;
                    while !seen[x] {
                        seen[x] = true;
                        x = p.apply(x);
                        len += 1;
                    }
                    if len > 0 {
                        cycles.push(len);
                    }
                }
                cycles.sort_unstable_by(|a, b| b.cmp(a));
                assert_eq!(cycles, lambda);
            }
        }
    }

    #[test]
    fn characters_agree_with_projectors() {
        let gens = [perm_matrix(&[1, 0, 2, 3]), perm_matrix(&[0, 2, 1, 3]), perm_matrix(&[0, 1, 3, 2])];
        let all = group_matrices(4, &gens, Field::Rationals);
        for chi in [Character::Trivial, Character::Sign] {
            let by_rank = reynolds(&all, chi, Field::Rationals).unwrap().rank();
            assert_eq!(isotypic_dimension_by_characters(4, &gens, chi, Field::Rationals), by_rank);
        }
    }

    fn two_point_ring() -> RingRef {
        Ring::rational(&["x1", "y1", "x2", "y2"])
    }

    fn swap_pairs() -> Vec<Vec<usize>> {
        vec![vec![2, 3, 0, 1]]
    }

    #[test]
    fn linear_invariants_of_two_points() {
        let r = two_point_ring();
        let s = GradedModule::free(GradedFreeModule::new(&r, vec![0]));
        let act = PermAction::new(2, &r, swap_pairs(), None).unwrap();
        assert_eq!(act.isotypic_dimension(&s, Character::Trivial, 1).unwrap(), 2);
        assert_eq!(act.isotypic_dimension(&s, Character::Sign, 1).unwrap(), 2);
    }

    #[test]
    fn invariants_of_two_variables() {
        let r = Ring::rational(&["x1", "x2"]);
        let s = GradedModule::free(GradedFreeModule::new(&r, vec![0]));
        let act = PermAction::new(2, &r, vec![vec![1, 0]], None).unwrap();
        assert_eq!(act.isotypic_dimension(&s, Character::Trivial, 2).unwrap(), 2);
        assert_eq!(act.isotypic_dimension(&s, Character::Sign, 1).unwrap(), 1);
        let zero = GradedModule::quotient(&crate::groebner::IdealBasis::parse(&r, &["1"]).unwrap()).unwrap();
        for d in 0..4 {
            assert_eq!(act.isotypic_dimension(&zero, Character::Trivial, d).unwrap(), 0);
        }
    }

    #[test]
    fn stability_witness() {
        let r = Ring::rational(&["x1", "x2"]);
        let free = GradedFreeModule::new(&r, vec![0]);
        let stable = GradedModule::new(free.clone(), vec![vec![r.parse("x1*x2").unwrap()]]).unwrap();
        let act = PermAction::new(2, &r, vec![vec![1, 0]], None).unwrap();
        assert!(act.check_stable(&stable).is_ok());
        let unstable = GradedModule::new(
            free,
            vec![vec![r.parse("x1^2 + x2^2").unwrap()], vec![r.parse("x1").unwrap()]],
        )
        .unwrap();
        assert_eq!(act.check_stable(&unstable), Err(Error::ActionNotStable(1)));
    }

    #[test]
    fn generator_images_permute_components() {
        // 𝔖_2 acting on ℚ^2 = (ring with no variables)^2 by swapping generators
        let r = Ring::new(Vec::new(), Vec::new(), crate::poly::MonomialOrder::Grevlex, Field::Rationals).unwrap();
        let free = GradedFreeModule::new(&r, vec![0, 0]);
        let m = GradedModule::free(free);
        let fm = m.ambient().clone();
        let images = vec![vec![ModuleVector::unit(&fm, 1), ModuleVector::unit(&fm, 0)]];
        let act = PermAction::new(2, &r, vec![Vec::new()], Some(images)).unwrap();
        assert_eq!(act.isotypic_dimension(&m, Character::Trivial, 0).unwrap(), 1);
        assert_eq!(act.isotypic_dimension(&m, Character::Sign, 0).unwrap(), 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(20))]

            #[test]
            fn projectors_are_idempotent_and_split(n in 2usize..=3, deg in 0i64..=3, sign_twist in any::<bool>()) {
                let names: Vec<String> = (1..=n).flat_map(|i| [format!("x{i}"), format!("y{i}")]).collect();
                let r = Ring::rational(&names);
                let perms: Vec<Vec<usize>> = (0..n - 1)
                    .map(|i| {
                        let mut p: Vec<usize> = (0..2 * n).collect();
                        p.swap(2 * i, 2 * i + 2);
                        p.swap(2 * i + 1, 2 * i + 3);
                        p
                    })
                    .collect();
                let m = GradedModule::free(GradedFreeModule::new(&r, vec![0]));
                let fm = m.ambient().clone();
                let f = Field::Rationals;
                let images = sign_twist.then(|| (0..n - 1).map(|_| vec![ModuleVector::unit(&fm, 0).scale(&f.from_i64(-1))]).collect());
                let act = PermAction::new(n, &r, perms, images).unwrap();
                let piece = m.graded_piece(deg);
                let gens = act.generator_matrices(&m, &piece);
                prop_assert!(satisfies_group_law(&gens, f));
                let all = group_matrices(n, &gens, f);
                let t = reynolds(&all, Character::Trivial, f).unwrap();
                let s = reynolds(&all, Character::Sign, f).unwrap();
                prop_assert_eq!(t.mul(&t), t.clone());
                prop_assert_eq!(s.mul(&s), s.clone());
                let (dt, ds) = (t.rank(), s.rank());
                prop_assert_eq!(isotypic_dimension_by_characters(n, &gens, Character::Trivial, f), dt);
                prop_assert_eq!(isotypic_dimension_by_characters(n, &gens, Character::Sign, f), ds);
                prop_assert!(dt + ds <= piece.dimension());
                if n == 2 {
                    prop_assert_eq!(dt + ds, piece.dimension());
                }
            }
        }
    }
}
