//! Modules of sections `Γ(B, L) = ⊕_q H⁰(𝒪(b + qd))` on the projective line,
//! with `V = H⁰(𝒪(d))` acting by multiplication of binary forms.
//!
//! A form of degree `m` is recorded in the monomial basis `s^{m−j} t^j`,
//! `j = 0..=m`; multiplying by `s^{d−i} t^i` sends index `j` to `i + j`.

use crate::error::{Error, Result};
use crate::gradedmod::{GradedFreeModule, GradedModule};
use crate::groebner::{FreeModule, GbOptions, ModuleBasis, ModuleOrder, ModuleVector};
use crate::koszul::{koszul_cohomology_dim, GradedAction};
use crate::linalg::{Matrix, SparseColumns};
use crate::poly::{Monomial, MultiPoly, Ring, RingRef};
use crate::scalar::Field;

/// `𝒪(m)` on the projective line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineBundleOnP1 {
    pub degree: i64,
}

impl LineBundleOnP1 {
    pub fn new(degree: i64) -> Self {
        LineBundleOnP1 { degree }
    }

    pub fn h0(&self) -> usize {
        (self.degree + 1).max(0) as usize
    }

    /// The monomial basis `s^{m−j} t^j` of `H⁰` as forms in `ring = ℚ[s, t]`.
    pub fn sections(&self, ring: &RingRef) -> Vec<MultiPoly> {
        binary_forms(ring, self.degree)
    }
}

/// `ℚ[s, t]` over `field`.
pub fn binary_ring(field: Field) -> RingRef {
    Ring::standard(&["s", "t"], field).expect("valid names")
}

/// `s^{m−j} t^j` for `j = 0..=m`; empty when `m < 0`.
pub fn binary_forms(ring: &RingRef, m: i64) -> Vec<MultiPoly> {
    (0..=m.max(-1))
        .filter(|_| m >= 0)
        .map(|j| {
            let mono = ring.monomial([(m - j) as u16, j as u16].into_iter().collect());
            MultiPoly::term(ring, mono, ring.field().one())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionModule {
    b: i64,
    d: i64,
    field: Field,
}

impl SectionModule {
    pub fn new(b: i64, d: i64, field: Field) -> Result<Self> {
        if d < 1 {
            return Err(Error::Precondition(format!("L = 𝒪({d}) must have positive degree")));
        }
        Ok(SectionModule { b, d, field })
    }

    pub fn rational(b: i64, d: i64) -> Result<Self> {
        Self::new(b, d, Field::Rationals)
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Degree of the forms in `M_q`.
    pub fn form_degree(&self, q: i64) -> i64 {
        self.b + q * self.d
    }

    /// First `q` with `M_q ≠ 0`.
    pub fn first_degree(&self) -> i64 {
        (-self.b).div_euclid(self.d) + i64::from((-self.b).rem_euclid(self.d) != 0)
    }

    /// `S = ℚ[z_0, …, z_d]` with `z_i ↦ s^{d−i} t^i`.
    pub fn coordinate_ring(&self) -> RingRef {
        let names: Vec<String> = (0..=self.d).map(|i| format!("z{i}")).collect();
        Ring::standard(&names, self.field).expect("valid names")
    }

    /// A presentation over `ℚ[z_0..z_d]` agreeing with the section module in
    /// every degree. Generators sit in the first nonzero degree, since
    /// multiplication `V ⊗ M_q → M_{q+1}` is onto once `M_q ≠ 0`; relations
    /// are collected degree by degree until the pieces have the right size
    /// through `q_max`.
    pub fn presentation(&self, q_max: i64, opts: &GbOptions) -> Result<GradedModule> {
        let ring = self.coordinate_ring();
        let q0 = self.first_degree();
        let m0 = self.form_degree(q0);
        let free = GradedFreeModule::new(&ring, vec![q0; (m0 + 1) as usize]);
        let fm = FreeModule::new(&ring, free.shifts().to_vec(), ModuleOrder::Top);
        let mut relations: Vec<ModuleVector> = Vec::new();
        let mut module = GradedModule::free(free.clone());
        for q in q0 + 1..=q_max.max(q0 + 2) {
            if module.hilbert_function(q) == self.piece_dim(q) {
                continue;
            }
            relations.extend(self.kernel_in_degree(&ring, &fm, q0, m0, q));
            let basis = ModuleBasis::from_vectors(fm.clone(), relations.clone()).minimal_generators(opts)?;
            relations = basis.vectors().to_vec();
            module = GradedModule::from_vectors_with(free.clone(), relations.clone(), opts)?;
        }
        Ok(module)
    }

    /// Kernel of `F_q → M_q` for the free module on `M_{q0}`.
    fn kernel_in_degree(&self, ring: &RingRef, fm: &FreeModule, q0: i64, m0: i64, q: i64) -> Vec<ModuleVector> {
        let monos: Vec<Monomial> = ring.monomials_of_degree((q - q0) as u32);
        let columns: Vec<(Monomial, usize)> =
            monos.iter().flat_map(|m| (0..=m0 as usize).map(move |j| (m.clone(), j))).collect();
        let mut mat = Matrix::zeros(self.piece_dim(q), columns.len(), self.field);
        for (c, (mono, j)) in columns.iter().enumerate() {
            let t_exp: usize = j + mono.exponents().iter().enumerate().map(|(i, &e)| i * e as usize).sum::<usize>();
            mat.set(t_exp, c, self.field.one());
        }
        mat.kernel()
            .into_iter()
            .map(|v| {
                let entries: Vec<MultiPoly> = (0..=m0 as usize)
                    .map(|j| {
                        let terms = columns
                            .iter()
                            .zip(&v)
                            .filter(|((_, jj), x)| *jj == j && !x.is_zero())
                            .map(|((m, _), x)| (m.clone(), x.clone()))
                            .collect();
                        MultiPoly::from_terms(ring, terms)
                    })
                    .collect();
                ModuleVector::from_polys(fm, &entries).expect("same ring")
            })
            .collect()
    }
}

impl GradedAction for SectionModule {
    fn field(&self) -> Field {
        self.field
    }

    fn v_dim(&self) -> usize {
        (self.d + 1) as usize
    }

    fn piece_dim(&self, q: i64) -> usize {
        (self.form_degree(q) + 1).max(0) as usize
    }

    fn action(&self, q: i64) -> Vec<SparseColumns> {
        let (src, dst) = (self.piece_dim(q), self.piece_dim(q + 1));
        (0..self.v_dim())
            .map(|i| SparseColumns {
                nrows: dst,
                cols: (0..src).map(|j| vec![(i + j, self.field.one())]).collect(),
            })
            .collect()
    }

    fn support_start(&self) -> i64 {
        self.first_degree()
    }

    fn weights(&self, q: i64) -> Option<(Vec<i64>, Vec<i64>)> {
        Some(((0..self.v_dim() as i64).collect(), (0..self.piece_dim(q) as i64).collect()))
    }
}

/// `dim K_{p,q}(ℙ¹, 𝒪(b), 𝒪(d))`.
pub fn koszul_of_sections(b: i64, d: i64, p: usize, q: i64) -> Result<usize> {
    Ok(koszul_cohomology_dim(&SectionModule::rational(b, d)?, p, q))
}
