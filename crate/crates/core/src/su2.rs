//! Coefficient-level algebra of su(2).
//!
//! Elements are stored as real coefficients on the basis `{½σ₁, ½σ₂, ½σ₃}`
//! with `σ₁σ₂ = −σ₃` (cyclically). The basis is orthonormal for the
//! invariant inner product `⟨a b⟩ = −2 tr(ab)`, so inner products are dot
//! products and the commutator is the *negative* cross product.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// Levi-Civita symbol on `{0, 1, 2}`.
#[inline]
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// An su(2) element as coefficients on `{½σ_k}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgVec(pub [f64; 3]);

impl AlgVec {
    pub const ZERO: AlgVec = AlgVec([0.0; 3]);

    pub const fn new(v1: f64, v2: f64, v3: f64) -> Self {
        AlgVec([v1, v2, v3])
    }

    /// Unit basis element `½σ_{k+1}`.
    pub fn basis(k: usize) -> Self {
        let mut v = [0.0; 3];
        v[k] = 1.0;
        AlgVec(v)
    }

    pub fn from_slice(v: &[f64]) -> Self {
        AlgVec([v[0], v[1], v[2]])
    }

    pub fn norm_sq(&self) -> f64 {
        inner(self, self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Index<usize> for AlgVec {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl IndexMut<usize> for AlgVec {
    fn index_mut(&mut self, k: usize) -> &mut f64 {
        &mut self.0[k]
    }
}

impl Add for AlgVec {
    type Output = AlgVec;
    fn add(self, o: AlgVec) -> AlgVec {
        AlgVec([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for AlgVec {
    type Output = AlgVec;
    fn sub(self, o: AlgVec) -> AlgVec {
        AlgVec([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl AddAssign for AlgVec {
    fn add_assign(&mut self, o: AlgVec) {
        *self = *self + o;
    }
}

impl SubAssign for AlgVec {
    fn sub_assign(&mut self, o: AlgVec) {
        *self = *self - o;
    }
}

impl Neg for AlgVec {
    type Output = AlgVec;
    fn neg(self) -> AlgVec {
        AlgVec([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for AlgVec {
    type Output = AlgVec;
    fn mul(self, s: f64) -> AlgVec {
        AlgVec([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<AlgVec> for f64 {
    type Output = AlgVec;
    fn mul(self, v: AlgVec) -> AlgVec {
        v * self
    }
}

/// An su(2)-valued 1-form on ℝ³: `self.0[j]` is the algebra element carried by `dx_j`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgOneForm(pub [AlgVec; 3]);

impl AlgOneForm {
    pub const ZERO: AlgOneForm = AlgOneForm([AlgVec::ZERO; 3]);

    /// Entry `c[j][k]` multiplies `dx_j ⊗ ½σ_k`.
    pub fn from_table(c: [[f64; 3]; 3]) -> Self {
        AlgOneForm([AlgVec(c[0]), AlgVec(c[1]), AlgVec(c[2])])
    }

    pub fn table(&self) -> [[f64; 3]; 3] {
        [self.0[0].0, self.0[1].0, self.0[2].0]
    }

    /// The 1-form `w ⊗ v` for a real 1-form `w` and a fixed algebra element `v`.
    pub fn outer(w: [f64; 3], v: AlgVec) -> Self {
        AlgOneForm([v * w[0], v * w[1], v * w[2]])
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(AlgVec::norm_sq).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Pointwise pairing with an algebra element: the real 1-form `⟨v, self_j⟩`.
    pub fn contract(&self, v: &AlgVec) -> [f64; 3] {
        [inner(v, &self.0[0]), inner(v, &self.0[1]), inner(v, &self.0[2])]
    }

    /// Componentwise `[v, self_j]`.
    pub fn bracket_left(&self, v: &AlgVec) -> AlgOneForm {
        AlgOneForm([bracket(v, &self.0[0]), bracket(v, &self.0[1]), bracket(v, &self.0[2])])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(AlgVec::is_finite)
    }
}

impl Index<usize> for AlgOneForm {
    type Output = AlgVec;
    fn index(&self, j: usize) -> &AlgVec {
        &self.0[j]
    }
}

impl IndexMut<usize> for AlgOneForm {
    fn index_mut(&mut self, j: usize) -> &mut AlgVec {
        &mut self.0[j]
    }
}

impl Add for AlgOneForm {
    type Output = AlgOneForm;
    fn add(self, o: AlgOneForm) -> AlgOneForm {
        AlgOneForm([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for AlgOneForm {
    type Output = AlgOneForm;
    fn sub(self, o: AlgOneForm) -> AlgOneForm {
        AlgOneForm([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl AddAssign for AlgOneForm {
    fn add_assign(&mut self, o: AlgOneForm) {
        *self = *self + o;
    }
}

impl SubAssign for AlgOneForm {
    fn sub_assign(&mut self, o: AlgOneForm) {
        *self = *self - o;
    }
}

impl Neg for AlgOneForm {
    type Output = AlgOneForm;
    fn neg(self) -> AlgOneForm {
        AlgOneForm([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for AlgOneForm {
    type Output = AlgOneForm;
    fn mul(self, s: f64) -> AlgOneForm {
        AlgOneForm([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<AlgOneForm> for f64 {
    type Output = AlgOneForm;
    fn mul(self, f: AlgOneForm) -> AlgOneForm {
        f * self
    }
}

/// The commutator `[a, b]` in the `{½σ_k}` basis: `[a, b]_k = −ε_{ijk} a_i b_j`.
#[inline]
pub fn bracket(a: &AlgVec, b: &AlgVec) -> AlgVec {
    let (a, b) = (&a.0, &b.0);
    AlgVec([-(a[1] * b[2] - a[2] * b[1]), -(a[2] * b[0] - a[0] * b[2]), -(a[0] * b[1] - a[1] * b[0])])
}

/// The invariant inner product `−2 tr(ab)`.
#[inline]
pub fn inner(a: &AlgVec, b: &AlgVec) -> f64 {
    a.0[0] * b.0[0] + a.0[1] * b.0[1] + a.0[2] * b.0[2]
}

/// `wedge_dual(a, b)_m = Σ_{j,l} ε_{jlm} [a_j, b_l]`.
///
/// Symmetric in its arguments; `*(α ∧ α) = ½ wedge_dual(α, α)`.
pub fn wedge_dual(a: &AlgOneForm, b: &AlgOneForm) -> AlgOneForm {
    let mut out = AlgOneForm::ZERO;
    for m in 0..3 {
        let j = (m + 1) % 3;
        let l = (m + 2) % 3;
        out.0[m] = bracket(&a.0[j], &b.0[l]) - bracket(&a.0[l], &b.0[j]);
    }
    out
}

/// Componentwise bracket `[α_j, η]` of a 1-form with a function value.
pub fn bracket_form(a: &AlgOneForm, v: &AlgVec) -> AlgOneForm {
    AlgOneForm([bracket(&a.0[0], v), bracket(&a.0[1], v), bracket(&a.0[2], v)])
}
